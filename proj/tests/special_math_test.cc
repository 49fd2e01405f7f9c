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

#include "hrtfup/special_math.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hrtfup/dataset.h"
#include "hrtfup/error.h"

namespace hrtfup {
namespace {

using std::numbers::pi;

double MaxAbs(Complex a, Complex b) { return std::abs(a - b); }

TEST_CASE("low-order harmonics") {
  CHECK(std::abs(SphericalHarmonic({0, 0}, 0.3, 1.2) - Complex(1 / std::sqrt(4 * pi))) < 1e-15);
  CHECK(SphericalHarmonic({0, 0}, 0.3, 1.2).real() == doctest::Approx(0.28209479));
  CHECK(SphericalHarmonic({1, 0}, 0.0, 0.0).real() == doctest::Approx(0.48860251));
}

TEST_CASE("harmonics agree with std::sph_legendre") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> th(0.0, pi), ph(0.0, 2 * pi);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = th(gen), phi = ph(gen);
    const std::vector<Complex> table = SphericalHarmonics(20, theta, phi);
    for (int n = 0; n <= 20; ++n) {
      for (int m = 0; m <= n; ++m) {
        const Complex want = std::sph_legendre(n, m, theta) * std::polar(1.0, m * phi);
        worst = std::max(worst, MaxAbs(table[HarmonicIndex{n, m}.Flat()], want));
      }
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("conjugation symmetry") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> th(0.0, pi), ph(0.0, 2 * pi);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = th(gen), phi = ph(gen);
    for (int n = 0; n <= 10; ++n) {
      for (int m = 1; m <= n; ++m) {
        const Complex neg = SphericalHarmonic({n, -m}, theta, phi);
        const Complex pos = SphericalHarmonic({n, m}, theta, phi);
        worst = std::max(worst, MaxAbs(neg, (m % 2 ? -1.0 : 1.0) * std::conj(pos)));
      }
    }
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("discrete orthonormality on a t-design") {
  // A 13-design integrates products of harmonics up to total degree 13.
  const auto design = ReadDesignFile(DesignFilePath(DefaultDesignDir(), 13, 196));
  const int n_max = 6;
  const std::size_t count = NumHarmonics(n_max);
  std::vector<std::vector<Complex>> rows;
  for (const CartesianPosition& p : design) {
    const SphericalPosition s = CartToSph(p);
    rows.push_back(SphericalHarmonics(n_max, s.theta, s.phi));
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < count; ++b) {
      Complex acc = 0.0;
      for (const auto& row : rows) acc += row[a] * std::conj(row[b]);
      acc *= 4 * pi / static_cast<double>(design.size());
      worst = std::max(worst, std::abs(acc - Complex(a == b ? 1.0 : 0.0)));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("addition theorem") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> th(0.0, pi), ph(0.0, 2 * pi);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const SphericalPosition a{1.0, th(gen), ph(gen)}, b{1.0, th(gen), ph(gen)};
    const double cos_gamma = Dot(SphToCart(a), SphToCart(b));
    const auto ya = SphericalHarmonics(12, a.theta, a.phi);
    const auto yb = SphericalHarmonics(12, b.theta, b.phi);
    for (int n = 0; n <= 12; ++n) {
      Complex acc = 0.0;
      for (int m = -n; m <= n; ++m) {
        const std::size_t i = HarmonicIndex{n, m}.Flat();
        acc += ya[i] * std::conj(yb[i]);
      }
      const double want = (2 * n + 1) / (4 * pi) * std::legendre(n, std::clamp(cos_gamma, -1.0, 1.0));
      worst = std::max(worst, std::abs(acc - want));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("Hankel closed forms") {
  const Complex i(0.0, 1.0);
  const double x = 1.0;
  const Complex h0 = -i * std::exp(i * x) / x;
  const Complex h1 = -std::exp(i * x) * (1.0 + i / x) / x;
  CHECK(std::abs(SphericalHankelH1(0, x) - h0) < 1e-12);
  CHECK(std::abs(SphericalHankelH1(1, x) - h1) < 1e-12);
  CHECK(SphericalHankelH1(0, 1.0).real() == doctest::Approx(0.841471).epsilon(1e-6));
  CHECK(SphericalHankelH1(0, 1.0).imag() == doctest::Approx(-0.540302).epsilon(1e-6));
  CHECK(SphericalHankelH1(1, 1.0).real() == doctest::Approx(0.301169).epsilon(1e-6));
  CHECK(SphericalHankelH1(1, 1.0).imag() == doctest::Approx(-1.381773).epsilon(1e-6));
}

TEST_CASE("Hankel agrees with std::sph_bessel and std::sph_neumann") {
  for (double x : {0.5, 2.0, 6.0, 12.0, 40.0, 150.0}) {
    const auto table = SphericalHankelH1Table(19, x);
    for (unsigned n = 0; n <= 19; ++n) {
      const Complex want(std::sph_bessel(n, x), std::sph_neumann(n, x));
      CHECK(std::abs(table[n] - want) <= 1e-10 * std::abs(want));
    }
  }
}

TEST_CASE("Wronskian") {
  const int n = 5;
  const double x = 3.0;
  const Complex h = SphericalHankelH1(n, x);
  const Complex dh = SphericalHankelH1(n - 1, x) - (n + 1) / x * h;
  // j y' - j' y = Im(conj(h) h').
  CHECK(std::abs((std::conj(h) * dh).imag() - 1 / (x * x)) < 1e-12);
}

TEST_CASE("Hankel rejects non-positive arguments") {
  CHECK_THROWS_AS(SphericalHankelH1(0, 0.0), Error);
  CHECK_THROWS_AS(SphericalHankelH1Table(3, -1.0), Error);
}

TEST_CASE("basis rows") {
  const SphericalPosition pos{0.45, 1.1, 2.3};
  const double k = Wavenumber(2000.0);
  const auto row0 = BasisRow(pos, k, 0);
  REQUIRE(row0.size() == 1);
  CHECK(std::abs(row0[0] - SphericalHankelH1(0, k * pos.r) / std::sqrt(4 * pi)) < 1e-15);
  CHECK(BasisRow(pos, k, 19).size() == 400);

  const auto row = BasisRow(pos, k, 3);
  const HarmonicIndex idx{2, 1};
  CHECK(row[idx.Flat()] == SphericalHankelH1(2, k * pos.r) * SphericalHarmonic(idx, pos.theta, pos.phi));
}

TEST_CASE("flat index round trip") {
  for (std::size_t f = 0; f < NumHarmonics(8); ++f) CHECK(HarmonicIndex::FromFlat(f).Flat() == f);
  CHECK(HarmonicIndex{2, -2}.Flat() == 4);
}

}  // namespace
}  // namespace hrtfup
