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

#include "hrtfup/eval.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hrtfup/error.h"

namespace hrtfup::eval {
namespace {

HrtfSet Field(std::size_t subjects = 2) {
  SyntheticSpec spec;
  spec.subjects = subjects;
  spec.positions = 440;
  spec.bins = 16;
  spec.bin_spacing_hz = 1000.0;
  spec.field_order = 3;
  return MakeSyntheticHrtfSet(spec);
}

std::filesystem::path Temp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hrtfup_eval_test_" + name);
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_CASE("default measurement counts") {
  const auto b = DefaultBPrimes();
  REQUIRE(b.size() == 12);
  CHECK(b.front() == 9);
  CHECK(b.back() == 196);
}

TEST_CASE("passthrough scores zero everywhere") {
  const HrtfSet set = Field();
  const PassthroughInterpolator pass;
  const std::vector<const Interpolator*> methods = {&pass};
  const ResultTable t = RunExperiment(methods, set, DefaultBPrimes(), DefaultDesignDir());
  REQUIRE(t.rows.size() == 12);
  for (const ResultRow& r : t.rows) {
    CHECK(r.error.empty());
    CHECK(r.lsd_mean == 0.0);
    CHECK(r.lsd_per_subject.size() == 2);
  }
}

TEST_CASE("balanced RLR recovers an order-limited field") {
  const HrtfSet set = Field();
  rlr::RlrConfig cfg;
  cfg.lambda = 1e-10;
  const RlrInterpolator balanced("rlr", cfg, true);
  const std::vector<const Interpolator*> methods = {&balanced};
  const std::vector<std::size_t> b = {196};
  const ResultTable t = RunExperiment(methods, set, b, DefaultDesignDir());
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].error.empty());
  CHECK(t.rows[0].lsd_mean < 0.1);
}

TEST_CASE("rows per method and b_prime, failures recorded in place") {
  const HrtfSet set = Field(3);
  const PassthroughInterpolator pass;
  const RlrInterpolator rp7b = RlrInterpolator::FromLabel("RP7B");
  const std::vector<const Interpolator*> methods = {&pass, &rp7b};
  const std::vector<std::size_t> b = {9, 10, 16};
  const ResultTable t = RunExperiment(methods, set, b, DefaultDesignDir());
  REQUIRE(t.rows.size() == 6);
  CHECK(t.rows[0].method == "passthrough");
  CHECK(t.rows[3].method == "RP7B");
  CHECK(t.rows[4].b_prime == 10);
  CHECK(!t.rows[4].error.empty());
  CHECK(std::isnan(t.rows[4].lsd_mean));
  CHECK(t.rows[5].error.empty());
  CHECK(t.rows[5].lsd_mean > 0.0);
  CHECK(t.Find("RP7B", 16) == &t.rows[5]);
  CHECK(t.Find("RP7B", 25) == nullptr);
}

TEST_CASE("setting labels") {
  CHECK(RlrInterpolator::FromLabel("RP6U").config().lambda == 1e-6);
  CHECK(RlrInterpolator::FromLabel("RP7U").config().lambda == 1e-7);
  CHECK(RlrInterpolator::FromLabel("RP6U").config().n_max == 19);
  CHECK_FALSE(RlrInterpolator::FromLabel("RP6U").balanced());
  CHECK(RlrInterpolator::FromLabel("RP6B").balanced());
  CHECK_THROWS_AS(RlrInterpolator::FromLabel("RP8B"), Error);
}

ResultTable Sample() {
  ResultTable t;
  t.subjects = {"pp88", "pp89", "pp90"};
  t.rows.push_back({"RP6U", 9, 7.25, {7.0, 7.5, 7.25}, ""});
  t.rows.push_back({"RP6U", 16, 6.125, {6.0, 6.25, 6.125}, ""});
  t.rows.push_back({"autoencoder", 9, 0.1 + 0.2, {0.3, 1.0 / 3.0, 1e-17}, ""});
  return t;
}

TEST_CASE("CSV round trip") {
  const ResultTable t = Sample();
  const auto path = Temp("table.csv");
  ExportCsv(t, path);
  const ResultTable back = ReadCsv(path);
  CHECK(back.subjects == t.subjects);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(back.rows[i].method == t.rows[i].method);
    CHECK(back.rows[i].b_prime == t.rows[i].b_prime);
    CHECK(back.rows[i].lsd_mean == t.rows[i].lsd_mean);
    CHECK(back.rows[i].lsd_per_subject == t.rows[i].lsd_per_subject);
  }
  std::istringstream lines(Slurp(path));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "method,b_prime,lsd_mean,pp88,pp89,pp90");
  while (std::getline(lines, line)) CHECK(std::count(line.begin(), line.end(), ',') == 5);
  std::filesystem::remove(path);
}

TEST_CASE("empty table") {
  ResultTable t;
  t.subjects = {"a", "b"};
  CHECK(ToCsv(t) == "method,b_prime,lsd_mean,a,b\n");
  CHECK(ParseCsv(ToCsv(t)).rows.empty());
  CHECK_THROWS_AS(ParseCsv("method,b_prime,lsd_mean,a\nRP6U,9,1.0\n"), Error);
  CHECK_THROWS_AS(ReadCsv(Temp("missing.csv")), Error);
}

TEST_CASE("plot data") {
  const std::string text = ToPlotdata(Sample());
  std::istringstream in(text);
  std::string header, row9, row16;
  std::getline(in, header);
  std::getline(in, row9);
  std::getline(in, row16);
  CHECK(header == "# b_prime RP6U autoencoder");
  CHECK(row9.rfind("9 7.25 ", 0) == 0);
  CHECK(row16 == "16 6.125 nan");
}

TEST_CASE("experiment file text") {
  const ExperimentSpec spec = ExperimentSpec::Parse(
      "# sweep\n"
      "methods = RP6U, autoencoder\n"
      "b_primes = 9, 25 , 196\n"
      "checkpoint = run/model.ckpt\n"
      "variant = measured\n");
  CHECK(spec.methods == std::vector<std::string>{"RP6U", "autoencoder"});
  CHECK(spec.b_primes == std::vector<std::size_t>{9, 25, 196});
  CHECK(spec.checkpoint == std::filesystem::path("run/model.ckpt"));
  CHECK(spec.extra.at("variant") == "measured");
  spec.Validate();
  const ExperimentSpec again = ExperimentSpec::Parse(spec.ToString());
  CHECK(again.methods == spec.methods);
  CHECK(again.b_primes == spec.b_primes);
  CHECK(again.checkpoint == spec.checkpoint);

  ExperimentSpec bad = spec;
  bad.b_primes = {12};
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad.b_primes = {441};
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad = spec;
  bad.checkpoint.reset();
  CHECK_THROWS_AS(bad.Validate(), Error);
  CHECK_THROWS_AS(ExperimentSpec::Parse("methods RP6U\n"), Error);

  ExperimentSpec rlr_only;
  rlr_only.methods = {"RP6U", "RP7B", "passthrough"};
  const auto interps = MakeInterpolators(rlr_only);
  REQUIRE(interps.size() == 3);
  CHECK(interps[1]->Name() == "RP7B");
}

TEST_CASE("inspect output") {
  const HrtfSet set = Field(1);
  const PassthroughInterpolator pass;
  const std::vector<const Interpolator*> methods = {&pass};
  const std::string text = InspectResponse(methods, set, 0, 17, 1, 9, DefaultDesignDir());
  std::istringstream in(text);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "# frequency_hz truth passthrough");
  std::istringstream cols(first);
  double f, truth, est;
  cols >> f >> truth >> est;
  CHECK(f == 1000.0);
  CHECK(truth == est);
  CHECK(truth == doctest::Approx(20.0 * set.log_magnitudes(0, 17, 1, 0)));
  CHECK_THROWS_AS(InspectResponse(methods, set, 1, 0, 0, 9, DefaultDesignDir()), Error);
}

}  // namespace
}  // namespace hrtfup::eval
