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
#include <numbers>
#include <string>

#include "hrtfup/dataset.h"
#include "hrtfup/error.h"

namespace hrtfup::rlr {

void RlrConfig::Validate() const {
  if (!(lambda > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
  if (n_max < 0 || n_max > kMaxHarmonicOrder) {
    throw Error(ErrorCode::kInvalidArgument, "n_max outside [0, 30]");
  }
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "truncation radius must be positive");
  if (!(speed_of_sound > 0.0)) throw Error(ErrorCode::kInvalidArgument, "speed of sound must be positive");
}

int TruncationOrder(double k, const RlrConfig& cfg) {
  if (!cfg.frequency_dependent_truncation) return cfg.n_max;
  const double rule = std::ceil(std::numbers::e * k * cfg.radius / 2.0);
  return rule < cfg.n_max ? static_cast<int>(rule) : cfg.n_max;
}

int BalancedOrder(std::size_t b_prime) {
  const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(b_prime))));
  if (b_prime == 0 || root * root != b_prime) {
    throw Error(ErrorCode::kNotPerfectSquare,
                "balanced order needs a perfect-square B', got " + std::to_string(b_prime));
  }
  return static_cast<int>(root) - 1;
}

ComplexMatrix BuildDesignMatrix(std::span<const SphericalPosition> positions, double k,
                                int n_max) {
  if (positions.empty()) throw Error(ErrorCode::kInvalidArgument, "no positions");
  ComplexMatrix phi(static_cast<Eigen::Index>(positions.size()),
                    static_cast<Eigen::Index>(NumHarmonics(n_max)));
  for (std::size_t b = 0; b < positions.size(); ++b) {
    const std::vector<Complex> row = BasisRow(positions[b], k, n_max);
    for (std::size_t j = 0; j < row.size(); ++j) {
      phi(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)) = row[j];
    }
  }
  return phi;
}

Eigen::VectorXd RegularizerDiag(int n_max) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(NumHarmonics(n_max)));
  for (int n = 0; n <= n_max; ++n) {
    for (int m = -n; m <= n; ++m) {
      d(static_cast<Eigen::Index>(HarmonicIndex{n, m}.Flat())) = 1.0 + n * (n + 1.0);
    }
  }
  return d;
}

RidgeSolver::RidgeSolver(const ComplexMatrix& phi, const Eigen::VectorXd& d, double lambda)
    : phi_(phi), reg_(lambda * d) {
  if (d.size() != phi.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "regularizer length differs from basis size");
  }
  if (!(lambda > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
  ComplexMatrix normal = phi.adjoint() * phi;
  normal.diagonal() += reg_.cast<Complex>();
  llt_.compute(normal);
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingularSystem, "regularized normal matrix is not positive definite");
  }
}

ComplexMatrix RidgeSolver::Solve(const ComplexMatrix& p) const {
  if (p.rows() != phi_.rows()) throw Error(ErrorCode::kShapeMismatch, "observation count differs from design rows");
  ComplexMatrix c = llt_.solve(phi_.adjoint() * p);
  // Refinement with the residual of the unsquared system recovers the
  // accuracy lost by forming Phi^H Phi.
  const ComplexMatrix r = phi_.adjoint() * (p - phi_ * c) - reg_.cast<Complex>().asDiagonal() * c;
  c += llt_.solve(r);
  return c;
}

ComplexVector RidgeSolver::Solve(const ComplexVector& p) const {
  return Solve(ComplexMatrix(p)).col(0);
}

ComplexVector FitCoefficients(const ComplexVector& p, const ComplexMatrix& phi,
                              const Eigen::VectorXd& d, double lambda) {
  return RidgeSolver(phi, d, lambda).Solve(p);
}

ComplexVector Synthesize(const BinCoefficients& c, std::span<const SphericalPosition> targets,
                         double k) {
  if (static_cast<std::size_t>(c.c.size()) != NumHarmonics(c.order)) {
    throw Error(ErrorCode::kShapeMismatch, "coefficient length does not match its order");
  }
  return BuildDesignMatrix(targets, k, c.order) * c.c;
}

HrtfArray<Complex> Interpolate(const HrtfSet& set, std::span<const std::size_t> measured,
                               std::span<const std::size_t> targets, const RlrConfig& cfg) {
  cfg.Validate();
  if (!set.spectra) throw Error(ErrorCode::kInvalidArgument, "RLR needs complex spectra");
  if (measured.empty()) throw Error(ErrorCode::kInvalidArgument, "no measurement positions");
  const ComplexSpectra& sp = *set.spectra;
  const std::size_t S = sp.subjects();
  const std::size_t C = sp.channels();
  const std::size_t L = sp.bins();
  std::vector<SphericalPosition> meas_pos;
  std::vector<SphericalPosition> target_pos;
  for (std::size_t b : measured) meas_pos.push_back(CartToSph(set.positions.at(b)));
  for (std::size_t b : targets) target_pos.push_back(CartToSph(set.positions.at(b)));

  HrtfArray<Complex> out(S, targets.size(), C, L);
  // Each bin shares one design matrix across subjects and channels; the
  // observations become the columns of a single right-hand side.
  ComplexMatrix p(static_cast<Eigen::Index>(meas_pos.size()), static_cast<Eigen::Index>(S * C));
  for (std::size_t l = 0; l < L; ++l) {
    const double k = Wavenumber(set.Frequency(l), cfg.speed_of_sound);
    const int order = TruncationOrder(k, cfg);
    for (std::size_t i = 0; i < meas_pos.size(); ++i) {
      for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t ch = 0; ch < C; ++ch) {
          p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s * C + ch)) = sp(s, measured[i], ch, l);
        }
      }
    }
    const RidgeSolver solver(BuildDesignMatrix(meas_pos, k, order), RegularizerDiag(order), cfg.lambda);
    const ComplexMatrix coef = solver.Solve(p);
    const ComplexMatrix est = BuildDesignMatrix(target_pos, k, order) * coef;
    for (std::size_t i = 0; i < target_pos.size(); ++i) {
      for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t ch = 0; ch < C; ++ch) {
          out(s, i, ch, l) = est(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s * C + ch));
        }
      }
    }
  }
  return out;
}

}  // namespace hrtfup::rlr
