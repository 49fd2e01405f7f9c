// Copyright 2026 The hrtfup Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hrtfup/dataset.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>

#include <unsupported/Eigen/FFT>

#include "doctest.h"
#include "hrtfup/error.h"
#include "oracles.h"

namespace hrtfup {
namespace {

using std::numbers::pi;

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hrtfup_dataset_test_" + name);
}

HrirBundle OneChannelBundle(double rate, std::vector<double> taps) {
  HrirBundle b;
  b.subjects = {"a"};
  b.positions = {{1.47, 0.0, 0.0}};
  b.sample_rate = rate;
  b.channels = 2;
  b.taps = taps.size();
  b.hrirs = taps;
  b.hrirs.insert(b.hrirs.end(), taps.begin(), taps.end());
  return b;
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kInvalidArgument;
}

// In-band energy per unit time via a zero-padded DFT.
double BandEnergy(const std::vector<double>& x, double rate, double f_max) {
  const std::size_t n = 1 << 15;
  std::vector<double> padded(n, 0.0);
  std::copy(x.begin(), x.end(), padded.begin());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, padded);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double f = rate * static_cast<double>(std::min(k, n - k)) / static_cast<double>(n);
    if (f < f_max) acc += std::norm(spec[k]);
  }
  return acc / (static_cast<double>(n) * rate);
}

TEST_CASE("resampling a tone keeps its amplitude") {
  const double f0 = 1000.0, in_rate = 44100.0;
  std::vector<double> x(4410);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2 * pi * f0 * i / in_rate);
  const HrirBundle out = ResampleHrirs(OneChannelBundle(in_rate, x), 32000.0);
  CHECK(out.sample_rate == 32000.0);
  CHECK(out.taps == 3200);
  // Least-squares amplitude away from the edges.
  double ss = 0.0, sc = 0.0, cc = 0.0, ys = 0.0, yc = 0.0;
  for (std::size_t i = 400; i + 400 < out.taps; ++i) {
    const double t = i / 32000.0;
    const double s = std::sin(2 * pi * f0 * t), c = std::cos(2 * pi * f0 * t);
    const double y = out.hrirs[i];
    ss += s * s;
    sc += s * c;
    cc += c * c;
    ys += y * s;
    yc += y * c;
  }
  const double det = ss * cc - sc * sc;
  const double a = (ys * cc - yc * sc) / det, b = (yc * ss - ys * sc) / det;
  CHECK(std::abs(std::hypot(a, b) - 1.0) < 0.01);
  CHECK(std::abs(b) < 0.01);  // no phase shift
}

TEST_CASE("resampling an impulse preserves in-band energy") {
  for (double in_rate : {44100.0, 48000.0, 96000.0}) {
    std::vector<double> x(512, 0.0);
    x[256] = 1.0;
    const HrirBundle out = ResampleHrirs(OneChannelBundle(in_rate, x), 32000.0);
    std::vector<double> y(out.hrirs.begin(), out.hrirs.begin() + static_cast<std::ptrdiff_t>(out.taps));
    const double band = 0.875 * 16000.0;
    const double e_in = BandEnergy(x, in_rate, band);
    const double e_out = BandEnergy(y, 32000.0, band);
    CHECK(std::abs(e_out / e_in - 1.0) < 0.01);
  }
}

TEST_CASE("resampling at the same rate is the identity") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal;
  std::vector<double> x(100);
  for (double& v : x) v = normal(gen);
  const HrirBundle in = OneChannelBundle(32000.0, x);
  const HrirBundle out = ResampleHrirs(in, 32000.0);
  CHECK(out.hrirs == in.hrirs);
  CHECK(out.taps == in.taps);
}

TEST_CASE("resampling rejects upsampling") {
  const HrirBundle in = OneChannelBundle(16000.0, std::vector<double>(32, 0.0));
  CHECK(CodeOf([&] { ResampleHrirs(in, 32000.0); }) == ErrorCode::kUnsupportedRatio);
}

TEST_CASE("impulse spectra") {
  std::vector<double> x(256, 0.0);
  x[0] = 1.0;
  HrtfSet set = HrirToHrtf(OneChannelBundle(32000.0, x));
  REQUIRE(set.num_bins() == 128);
  for (std::size_t l = 0; l < 128; ++l) {
    CHECK(std::abs(set.log_magnitudes(0, 0, 0, l)) < 1e-15);
    CHECK(std::abs((*set.spectra)(0, 0, 1, l) - Complex(1.0)) < 1e-14);
  }
  CHECK(set.Frequency(0) == 125.0);
  CHECK(set.Frequency(127) == 16000.0);

  std::vector<double> delayed(256, 0.0);
  delayed[10] = 1.0;
  set = HrirToHrtf(OneChannelBundle(32000.0, delayed));
  for (std::size_t l = 0; l < 128; ++l) {
    CHECK(std::abs(set.log_magnitudes(0, 0, 0, l)) < 1e-13);
    // Conjugated DFT: phase advances as +2 pi f tau.
    const Complex want = std::polar(1.0, 2 * pi * (l + 1) * 10.0 / 256.0);
    CHECK(std::abs((*set.spectra)(0, 0, 0, l) - want) < 1e-12);
  }
}

TEST_CASE("a windowed 4 kHz tone peaks at the 4 kHz bin") {
  std::vector<double> x(256);
  for (std::size_t i = 0; i < 256; ++i) {
    const double window = 0.5 - 0.5 * std::cos(2 * pi * i / 256.0);
    x[i] = std::cos(2 * pi * 4000.0 * i / 32000.0) * window;
  }
  const HrtfSet set = HrirToHrtf(OneChannelBundle(32000.0, x));
  std::size_t peak = 0;
  for (std::size_t l = 1; l < 128; ++l) {
    if (set.log_magnitudes(0, 0, 0, l) > set.log_magnitudes(0, 0, 0, peak)) peak = l;
  }
  CHECK(peak + 1 == 32);
  CHECK(set.Frequency(peak) == 4000.0);
}

TEST_CASE("spectra are linear in the impulse response") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal;
  std::vector<double> a(200), b(200), sum(200);
  for (std::size_t i = 0; i < 200; ++i) {
    a[i] = normal(gen);
    b[i] = normal(gen);
    sum[i] = 2.0 * a[i] - b[i];
  }
  const auto sa = *HrirToHrtf(OneChannelBundle(32000.0, a)).spectra;
  const auto sb = *HrirToHrtf(OneChannelBundle(32000.0, b)).spectra;
  const auto ss = *HrirToHrtf(OneChannelBundle(32000.0, sum)).spectra;
  for (std::size_t i = 0; i < ss.data().size(); ++i) {
    CHECK(std::abs(ss.data()[i] - (2.0 * sa.data()[i] - sb.data()[i])) < 1e-12);
  }
}

TEST_CASE("long impulse responses are truncated to 256 taps") {
  std::vector<double> x(300, 0.0);
  x[0] = 1.0;
  x[280] = 5.0;
  const HrtfSet set = HrirToHrtf(OneChannelBundle(32000.0, x));
  CHECK(std::abs(set.log_magnitudes(0, 0, 0, 7)) < 1e-15);
}

TEST_CASE("zero bins are floored") {
  const HrtfSet set = HrirToHrtf(OneChannelBundle(32000.0, std::vector<double>(256, 0.0)));
  CHECK(set.log_magnitudes(0, 0, 0, 0) == -300.0);
}

TEST_CASE("synthetic bundles reproduce their spectra") {
  SyntheticSpec spec;
  spec.subjects = 2;
  spec.positions = 20;
  spec.bins = 128;
  spec.bin_spacing_hz = 125.0;
  const HrtfSet truth = MakeSyntheticHrtfSet(spec);
  const HrtfSet got = HrirToHrtf(MakeSyntheticBundle(spec));
  double worst = 0.0, worst_nyquist = 0.0;
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t b = 0; b < 20; ++b) {
      for (std::size_t ch = 0; ch < 2; ++ch) {
        for (std::size_t l = 0; l + 1 < 128; ++l) {
          worst = std::max(worst, std::abs((*got.spectra)(s, b, ch, l) - (*truth.spectra)(s, b, ch, l)));
        }
        worst_nyquist = std::max(worst_nyquist, std::abs(got.log_magnitudes(s, b, ch, 127) -
                                                         truth.log_magnitudes(s, b, ch, 127)));
      }
    }
  }
  CHECK(worst < 1e-12);
  CHECK(worst_nyquist < 1e-12);
}

TEST_CASE("t-design files") {
  for (int t = 2; t <= 13; ++t) {
    const std::size_t count = static_cast<std::size_t>((t + 1) * (t + 1));
    const auto points = ReadDesignFile(DesignFilePath(DefaultDesignDir(), t, count));
    REQUIRE(points.size() == count);
    for (const auto& p : points) CHECK(std::abs(p.Norm() - 1.0) < 1e-12);
  }
  CHECK(DesignFilePath("d", 3, 16) == std::filesystem::path("d") / "tdesign_t3_n16.txt");
  CHECK(CodeOf([] { ReadDesignFile("/nonexistent/tdesign.txt"); }) == ErrorCode::kMissingDesignFile);
}

TEST_CASE("t-design subsampling") {
  const auto grid = SpiralGrid(440, 1.47);
  const auto dir = DefaultDesignDir();

  const auto nine = TdesignSubsample(grid, 9, dir);
  CHECK(nine.size() == 9);
  CHECK(std::is_sorted(nine.begin(), nine.end()));
  CHECK(std::adjacent_find(nine.begin(), nine.end()) == nine.end());

  // On the design itself the selection must be the identity.
  auto design = ReadDesignFile(DesignFilePath(dir, 5, 36));
  for (auto& p : design) p = {p.x * 1.47, p.y * 1.47, p.z * 1.47};
  const auto identity = TdesignSubsample(design, 36, dir);
  for (std::size_t i = 0; i < 36; ++i) CHECK(identity[i] == i);

  CHECK(CodeOf([&] { TdesignSubsample(grid, 10, dir); }) == ErrorCode::kNotPerfectSquare);
  CHECK(CodeOf([&] { TdesignSubsample(grid, 225, dir); }) == ErrorCode::kMissingDesignFile);
}

TEST_CASE("196-point selection stays within the grid mesh norm") {
  const auto grid = SpiralGrid(440, 1.47);
  const auto design = ReadDesignFile(DesignFilePath(DefaultDesignDir(), 13, 196));
  const auto chosen = TdesignSubsample(grid, 196, DefaultDesignDir());
  REQUIRE(chosen.size() == 196);
  CHECK(std::adjacent_find(chosen.begin(), chosen.end()) == chosen.end());

  auto angle = [](const CartesianPosition& a, const CartesianPosition& b) {
    return std::acos(std::clamp(Dot(Normalized(a), Normalized(b)), -1.0, 1.0));
  };
  // Lower bound on the mesh norm from a dense random probe.
  std::mt19937_64 gen(17);
  double mesh = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const CartesianPosition q = testing::RandomDirection(gen);
    double nearest = pi;
    for (const auto& g : grid) nearest = std::min(nearest, angle(q, g));
    mesh = std::max(mesh, nearest);
  }
  // Each design point is matched against the closest selected point.
  double worst = 0.0;
  for (const auto& d : design) {
    double nearest = pi;
    for (std::size_t i : chosen) nearest = std::min(nearest, angle(d, grid[i]));
    worst = std::max(worst, nearest);
  }
  CHECK(worst < mesh);
}

TEST_CASE("nearest-neighbour collisions fall to the next-nearest point") {
  const std::vector<CartesianPosition> grid = {{0, 0, 1}, {0, 0.2, 0.98}, {1, 0, 0}};
  const std::vector<CartesianPosition> design = {{0, 0, 1}, {0, 0.01, 1}};
  const auto idx = NearestNeighborSelection(grid, design);
  REQUIRE(idx.size() == 2);
  CHECK(idx[0] == 0);
  CHECK(idx[1] == 1);
}

HrtfSet SetWithValues(std::vector<double> values) {
  HrtfSet set;
  set.subjects = {"s"};
  set.positions = {{1, 0, 0}};
  set.log_magnitudes = LogMagnitudes(1, 1, 2, values.size() / 2);
  set.log_magnitudes.data() = std::move(values);
  return set;
}

TEST_CASE("standardization") {
  const auto stats = ComputeStandardization(SetWithValues({0.0, 2.0}));
  CHECK(stats.mean == 1.0);
  CHECK(stats.std == 1.0);
  CHECK(stats.Invert(stats.Apply(0.7)) == doctest::Approx(0.7));
  CHECK(CodeOf([] { ComputeStandardization(SetWithValues({3.0, 3.0, 3.0, 3.0})); }) ==
        ErrorCode::kDegenerateVariance);

  std::mt19937_64 gen(21);
  std::normal_distribution<double> normal(-1.3, 0.4);
  std::vector<double> values(64);
  for (double& v : values) v = normal(gen);
  HrtfSet set = SetWithValues(values);
  const auto s1 = ComputeStandardization(set);
  for (double& v : set.log_magnitudes.data()) v = s1.Apply(v);
  const auto s2 = ComputeStandardization(set);
  CHECK(std::abs(s2.mean) < 1e-10);
  CHECK(std::abs(s2.std - 1.0) < 1e-10);
}

TEST_CASE("default split") {
  std::vector<std::string> ids;
  for (int i = 0; i < 94; ++i) ids.push_back("pp" + std::to_string(i));
  const SplitSpec split = DefaultSplit(ids);
  CHECK(split.train.size() == 77);
  CHECK(split.val.size() == 10);
  CHECK(split.test.size() == 7);
  CHECK(split.train.front() == "pp0");
  CHECK(split.val.front() == "pp77");
  CHECK(split.test.back() == "pp93");

  const SplitSpec small = DefaultSplit(std::span<const std::string>(ids.data(), 20));
  CHECK(small.train.size() == 16);
  CHECK(small.val.size() == 2);
  CHECK(small.test.size() == 2);
}

TEST_CASE("split files round trip and validation") {
  SplitSpec split{{"a", "b"}, {"c"}, {"d", "e"}};
  const auto dir = TempPath("splits");
  std::filesystem::remove_all(dir);
  WriteSplits(split, dir);
  const SplitSpec back = ReadSplits(dir);
  CHECK(back.train == split.train);
  CHECK(back.val == split.val);
  CHECK(back.test == split.test);
  split.test.push_back("a");
  CHECK(CodeOf([&] { split.Validate(); }) == ErrorCode::kInvalidArgument);
  std::filesystem::remove_all(dir);
}

HrirBundle RandomBundle(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  HrirBundle b;
  b.subjects = {"pp1", "pp02", "subject_three"};
  for (int i = 0; i < 5; ++i) b.positions.push_back({normal(gen), normal(gen), normal(gen)});
  b.sample_rate = 44100.0;
  b.channels = 2;
  b.taps = 17;
  b.hrirs.resize(3 * 5 * 2 * 17);
  for (double& v : b.hrirs) v = normal(gen);
  return b;
}

std::vector<char> FileBytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void PutBytes(const std::filesystem::path& p, const std::vector<char>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

TEST_CASE("bundle round trip") {
  const HrirBundle b = RandomBundle(9);
  const auto path = TempPath("roundtrip.hrirb");
  WriteBundle(b, path);
  const HrirBundle back = ReadBundle(path);
  CHECK(back.subjects == b.subjects);
  CHECK(back.positions == b.positions);
  CHECK(back.sample_rate == b.sample_rate);
  CHECK(back.channels == b.channels);
  CHECK(back.taps == b.taps);
  CHECK(back.hrirs == b.hrirs);
  std::filesystem::remove(path);
}

TEST_CASE("bundle format errors") {
  const auto path = TempPath("broken.hrirb");
  WriteBundle(RandomBundle(10), path);
  const std::vector<char> good = FileBytes(path);

  std::vector<char> truncated(good.begin(), good.end() - 9);
  PutBytes(path, truncated);
  CHECK(CodeOf([&] { ReadBundle(path); }) == ErrorCode::kFormatError);

  std::vector<char> versioned = good;
  versioned[6] = 7;  // version follows the 6-byte magic
  PutBytes(path, versioned);
  try {
    ReadBundle(path);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFormatError);
    const std::string msg = e.what();
    CHECK(msg.find("expected 1") != std::string::npos);
    CHECK(msg.find("found 7") != std::string::npos);
  }

  std::vector<char> magic = good;
  magic[0] = 'X';
  PutBytes(path, magic);
  CHECK(CodeOf([&] { ReadBundle(path); }) == ErrorCode::kFormatError);

  std::vector<char> trailing = good;
  trailing.push_back(0);
  PutBytes(path, trailing);
  CHECK(CodeOf([&] { ReadBundle(path); }) == ErrorCode::kFormatError);

  std::filesystem::remove(path);
  CHECK(CodeOf([&] { ReadBundle(path); }) == ErrorCode::kIoError);
}

TEST_CASE("HRTF set files and loading by magic") {
  SyntheticSpec spec;
  spec.subjects = 2;
  spec.positions = 12;
  spec.bins = 128;
  spec.bin_spacing_hz = 125.0;
  const HrtfSet set = MakeSyntheticHrtfSet(spec);
  const auto set_path = TempPath("set.hrtfs");
  WriteHrtfSet(set, set_path);
  const HrtfSet back = ReadHrtfSet(set_path);
  CHECK(back.subjects == set.subjects);
  CHECK(back.positions == set.positions);
  CHECK(back.bin_spacing_hz == set.bin_spacing_hz);
  CHECK(back.spectra->data() == set.spectra->data());
  CHECK(back.log_magnitudes.data() == set.log_magnitudes.data());
  CHECK(LoadHrtfSet(set_path).spectra->data() == set.spectra->data());

  const auto bundle_path = TempPath("set.hrirb");
  WriteBundle(MakeSyntheticBundle(spec), bundle_path);
  const HrtfSet loaded = LoadHrtfSet(bundle_path);
  CHECK(loaded.num_subjects() == 2);
  CHECK(loaded.num_positions() == 12);
  CHECK(std::abs((*loaded.spectra)(1, 3, 0, 20) - (*set.spectra)(1, 3, 0, 20)) < 1e-12);
  std::filesystem::remove(set_path);
  std::filesystem::remove(bundle_path);
}

TEST_CASE("subject selection") {
  SyntheticSpec spec;
  spec.subjects = 3;
  spec.positions = 5;
  const HrtfSet set = MakeSyntheticHrtfSet(spec);
  const std::vector<std::string> ids = {"synth2", "synth0"};
  const HrtfSet sub = set.SelectSubjects(ids);
  CHECK(sub.subjects == ids);
  CHECK(sub.log_magnitudes(0, 1, 1, 3) == set.log_magnitudes(2, 1, 1, 3));
  CHECK(sub.log_magnitudes(1, 4, 0, 0) == set.log_magnitudes(0, 4, 0, 0));
  CHECK((*sub.spectra)(0, 2, 0, 1) == (*set.spectra)(2, 2, 0, 1));
  const std::vector<std::string> bad = {"nobody"};
  CHECK(CodeOf([&] { set.SelectSubjects(bad); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("spiral grid") {
  const auto grid = SpiralGrid(50, 1.47);
  REQUIRE(grid.size() == 50);
  for (const auto& p : grid) CHECK(p.Norm() == doctest::Approx(1.47));
}

}  // namespace
}  // namespace hrtfup
