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

#ifndef HRTFUP_RLR_H_
#define HRTFUP_RLR_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hrtfup/geom.h"
#include "hrtfup/special_math.h"

namespace hrtfup {

struct HrtfSet;
template <typename T>
class HrtfArray;

namespace rlr {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct RlrConfig {
  double lambda = 1e-6;
  int n_max = 19;
  bool frequency_dependent_truncation = true;
  double radius = 0.45;  // m, sets the truncation rule
  double speed_of_sound = kDefaultSpeedOfSound;

  // Throws Error(kInvalidArgument) on a violated invariant.
  void Validate() const;
};

// min(ceil(e k R / 2), n_max) when the frequency-dependent rule is on,
// n_max otherwise.
int TruncationOrder(double k, const RlrConfig& cfg);

// sqrt(b_prime) - 1. Throws Error(kNotPerfectSquare) otherwise.
int BalancedOrder(std::size_t b_prime);

// Row b holds the spherical wavefunctions of positions[b].
ComplexMatrix BuildDesignMatrix(std::span<const SphericalPosition> positions,
                                double k, int n_max);

// 1 + n(n+1) at every flat index of order n.
Eigen::VectorXd RegularizerDiag(int n_max);

// Factorization of Phi^H Phi + lambda diag(D), reusable across right-hand
// sides that share a design matrix.
class RidgeSolver {
 public:
  RidgeSolver(const ComplexMatrix& phi, const Eigen::VectorXd& d, double lambda);

  // argmin ||p - Phi c||^2 + lambda ||D^{1/2} c||^2 for each column of p.
  ComplexMatrix Solve(const ComplexMatrix& p) const;
  ComplexVector Solve(const ComplexVector& p) const;

 private:
  ComplexMatrix phi_;
  Eigen::VectorXd reg_;  // lambda * D
  Eigen::LLT<ComplexMatrix> llt_;
};

// Closed-form ridge estimate (Phi^H Phi + lambda D)^{-1} Phi^H p, computed
// by Cholesky with one step of refinement against the unsquared residual.
ComplexVector FitCoefficients(const ComplexVector& p, const ComplexMatrix& phi,
                              const Eigen::VectorXd& d, double lambda);

// Coefficients of one frequency bin together with their effective order.
struct BinCoefficients {
  int order = 0;
  ComplexVector c;
};
using CoefficientVector = std::vector<BinCoefficients>;

// Sum over n, m of c_{n,m} h_n(k r_b) Y_n^m(theta_b, phi_b).
ComplexVector Synthesize(const BinCoefficients& c,
                         std::span<const SphericalPosition> targets, double k);

// Two-step interpolation of every (subject, channel, bin): fit on the
// measured position indices, re-synthesize at target indices. Returns
// complex estimates shaped [subjects x targets x channels x bins].
HrtfArray<Complex> Interpolate(const HrtfSet& set,
                               std::span<const std::size_t> measured,
                               std::span<const std::size_t> targets,
                               const RlrConfig& cfg);

}  // namespace rlr
}  // namespace hrtfup

#endif  // HRTFUP_RLR_H_
