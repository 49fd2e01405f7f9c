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

#include "hrtfup/rlr.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hrtfup/dataset.h"
#include "hrtfup/error.h"
#include "oracles.h"

namespace hrtfup::rlr {
namespace {

using testing::RandomComplex;
using testing::RandomSphere;
using testing::RidgeByQr;

std::vector<SphericalPosition> DesignPoints(int t, std::size_t count, double radius) {
  std::vector<SphericalPosition> out;
  for (const CartesianPosition& p : ReadDesignFile(DesignFilePath(DefaultDesignDir(), t, count))) {
    SphericalPosition s = CartToSph(p);
    s.r = radius;
    out.push_back(s);
  }
  return out;
}

double RelErr(const Eigen::VectorXcd& got, const Eigen::VectorXcd& want) {
  return (got - want).norm() / want.norm();
}

TEST_CASE("truncation order") {
  RlrConfig cfg;
  CHECK(Wavenumber(125.0) == doctest::Approx(2.2900).epsilon(1e-4));
  CHECK(TruncationOrder(Wavenumber(125.0), cfg) == 2);
  CHECK(TruncationOrder(Wavenumber(16000.0), cfg) == 19);
  CHECK(std::numbers::e * Wavenumber(16000.0) * 0.45 / 2 == doctest::Approx(179.26).epsilon(1e-4));
  cfg.n_max = 0;
  CHECK(TruncationOrder(Wavenumber(125.0), cfg) == 0);
  CHECK(TruncationOrder(Wavenumber(16000.0), cfg) == 0);
  cfg.n_max = 19;
  cfg.frequency_dependent_truncation = false;
  CHECK(TruncationOrder(Wavenumber(125.0), cfg) == 19);
}

TEST_CASE("balanced order") {
  CHECK(BalancedOrder(9) == 2);
  CHECK(BalancedOrder(196) == 13);
  CHECK_THROWS_AS(BalancedOrder(10), Error);
  CHECK_THROWS_AS(BalancedOrder(0), Error);
}

TEST_CASE("design matrix shapes") {
  std::mt19937_64 gen(1);
  const auto one = RandomSphere(gen, 1, 1.47);
  CHECK(BuildDesignMatrix(one, 10.0, 0).rows() == 1);
  CHECK(BuildDesignMatrix(one, 10.0, 0).cols() == 1);
  const auto nine = RandomSphere(gen, 9, 1.47);
  CHECK(BuildDesignMatrix(nine, 10.0, 2).cols() == 9);
  CHECK(BuildDesignMatrix(nine, 10.0, 19).rows() == 9);
  CHECK(BuildDesignMatrix(nine, 10.0, 19).cols() == 400);
}

TEST_CASE("regularizer diagonal") {
  CHECK(RegularizerDiag(0).size() == 1);
  CHECK(RegularizerDiag(0)(0) == 1.0);
  const Eigen::VectorXd d1 = RegularizerDiag(1);
  REQUIRE(d1.size() == 4);
  CHECK(d1(1) == 3.0);
  CHECK(d1(2) == 3.0);
  CHECK(d1(3) == 3.0);
  const Eigen::VectorXd d2 = RegularizerDiag(2);
  for (int i = 4; i < 9; ++i) CHECK(d2(i) == 7.0);
}

TEST_CASE("ridge limit on a scalar system") {
  const Eigen::MatrixXcd phi = Eigen::MatrixXcd::Identity(1, 1);
  Eigen::VectorXcd p(1);
  p << Complex(2.0, 1.0);
  const Eigen::VectorXcd c = FitCoefficients(p, phi, Eigen::VectorXd::Ones(1), 1e-12);
  CHECK(std::abs(c(0) - Complex(2.0, 1.0)) < 1e-11);
}

TEST_CASE("agrees with the stacked QR solution") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> bcount(4, 64), order(0, 5);
  std::uniform_real_distribution<double> log_lambda(-9.0, -3.0), kr(6.0, 12.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = order(gen);
    const auto pos = RandomSphere(gen, static_cast<std::size_t>(bcount(gen)), 1.0);
    const double lambda = std::pow(10.0, log_lambda(gen));
    const Eigen::MatrixXcd phi = BuildDesignMatrix(pos, kr(gen), n);
    const Eigen::VectorXd d = RegularizerDiag(n);
    const Eigen::VectorXcd p = RandomComplex(gen, phi.rows());
    worst = std::max(worst, RelErr(FitCoefficients(p, phi, d, lambda), RidgeByQr(phi, d, lambda, p)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("multi right-hand side matches column-wise fits") {
  std::mt19937_64 gen(8);
  const auto pos = RandomSphere(gen, 20, 1.0);
  const Eigen::MatrixXcd phi = BuildDesignMatrix(pos, 8.0, 3);
  const Eigen::VectorXd d = RegularizerDiag(3);
  const RidgeSolver solver(phi, d, 1e-5);
  Eigen::MatrixXcd p(20, 3);
  for (int j = 0; j < 3; ++j) p.col(j) = RandomComplex(gen, 20);
  const Eigen::MatrixXcd c = solver.Solve(p);
  for (int j = 0; j < 3; ++j) {
    CHECK(RelErr(c.col(j), FitCoefficients(p.col(j), phi, d, 1e-5)) < 1e-14);
  }
}

TEST_CASE("recovers an order-limited field") {
  std::mt19937_64 gen(99);
  const double k = 8.0 / 1.47;
  const auto fit_pos = DesignPoints(9, 100, 1.47);
  const auto held_out = RandomSphere(gen, 340, 1.47);
  const Eigen::VectorXcd truth = RandomComplex(gen, static_cast<Eigen::Index>(NumHarmonics(4)));
  const Eigen::VectorXcd p = BuildDesignMatrix(fit_pos, k, 4) * truth;
  const BinCoefficients fitted{4, FitCoefficients(p, BuildDesignMatrix(fit_pos, k, 4),
                                                  RegularizerDiag(4), 1e-9)};
  CHECK(RelErr(fitted.c, truth) < 1e-6);
  const BinCoefficients exact{4, truth};
  CHECK(RelErr(Synthesize(fitted, held_out, k), Synthesize(exact, held_out, k)) < 1e-6);
}

TEST_CASE("underdetermined fit reproduces its observations") {
  std::mt19937_64 gen(4);
  const double k = Wavenumber(4000.0);
  const auto pos = DesignPoints(2, 9, 1.47);
  const Eigen::MatrixXcd phi = BuildDesignMatrix(pos, k, 19);
  const Eigen::VectorXcd p = RandomComplex(gen, 9);
  const Eigen::VectorXcd c = FitCoefficients(p, phi, RegularizerDiag(19), 1e-6);
  CHECK((p - phi * c).norm() / p.norm() < 0.05);
}

TEST_CASE("interpolation property for a square system") {
  std::mt19937_64 gen(6);
  const double k = 7.0 / 1.47;
  const auto pos = DesignPoints(3, 16, 1.47);
  const Eigen::MatrixXcd phi = BuildDesignMatrix(pos, k, 3);
  const Eigen::VectorXcd p = RandomComplex(gen, 16);
  const BinCoefficients c{3, FitCoefficients(p, phi, RegularizerDiag(3), 1e-14)};
  CHECK(RelErr(Synthesize(c, pos, k), p) < 1e-8);
}

TEST_CASE("monopole synthesis") {
  const double k = 5.0;
  BinCoefficients c{0, Eigen::VectorXcd::Ones(1)};
  const std::vector<SphericalPosition> target = {{1.0, 0.4, 0.1}};
  CHECK(std::abs(Synthesize(c, target, k)(0) - SphericalHankelH1(0, k) / std::sqrt(4 * std::numbers::pi)) <
        1e-15);
}

TEST_CASE("stronger regularization shrinks the weighted norm") {
  std::mt19937_64 gen(12);
  const auto pos = RandomSphere(gen, 16, 1.0);
  const Eigen::MatrixXcd phi = BuildDesignMatrix(pos, 9.0, 5);
  const Eigen::VectorXd d = RegularizerDiag(5);
  const Eigen::VectorXcd p = RandomComplex(gen, 16);
  double previous = std::numeric_limits<double>::infinity();
  for (double lambda : {1e-8, 1e-6, 1e-4, 1e-2, 1.0}) {
    const Eigen::VectorXcd c = FitCoefficients(p, phi, d, lambda);
    const double weighted = (d.cwiseSqrt().cast<Complex>().asDiagonal() * c).norm();
    CHECK(weighted < previous);
    previous = weighted;
  }
}

TEST_CASE("set interpolation recovers a synthetic set") {
  SyntheticSpec spec;
  spec.subjects = 2;
  spec.positions = 120;
  spec.bins = 6;
  spec.bin_spacing_hz = 400.0;
  spec.field_order = 3;
  const HrtfSet set = MakeSyntheticHrtfSet(spec);
  std::vector<std::size_t> measured, targets;
  for (std::size_t b = 0; b < set.num_positions(); ++b) {
    (b % 3 == 0 ? targets : measured).push_back(b);
  }
  RlrConfig cfg;
  cfg.lambda = 1e-12;
  cfg.n_max = 3;
  cfg.frequency_dependent_truncation = false;
  const ComplexSpectra est = Interpolate(set, measured, targets, cfg);
  REQUIRE(est.subjects() == 2);
  REQUIRE(est.positions() == targets.size());
  double worst = 0.0;
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      for (std::size_t ch = 0; ch < 2; ++ch) {
        for (std::size_t l = 0; l < spec.bins; ++l) {
          const Complex want = (*set.spectra)(s, targets[i], ch, l);
          worst = std::max(worst, std::abs(est(s, i, ch, l) - want) / std::abs(want));
        }
      }
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("config validation") {
  RlrConfig cfg;
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(cfg.Validate(), Error);
  cfg.lambda = 1e-6;
  cfg.n_max = 31;
  CHECK_THROWS_AS(cfg.Validate(), Error);
}

}  // namespace
}  // namespace hrtfup::rlr
