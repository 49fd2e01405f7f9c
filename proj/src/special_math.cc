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

#include <cmath>
#include <numbers>
#include <string>

#include "hrtfup/error.h"

namespace hrtfup {
namespace {

void CheckOrder(int n_max) {
  if (n_max < 0 || n_max > kMaxHarmonicOrder) {
    throw Error(ErrorCode::kInvalidArgument,
                "harmonic order " + std::to_string(n_max) + " outside [0, " +
                    std::to_string(kMaxHarmonicOrder) + "]");
  }
}

// Orthonormalized associated Legendre functions (with the Condon-Shortley
// phase) for 0 <= m <= n <= n_max, stored at n(n+1)/2 + m.
std::vector<double> NormalizedLegendre(int n_max, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<double> p(static_cast<std::size_t>((n_max + 1) * (n_max + 2) / 2));
  auto at = [](int n, int m) {
    return static_cast<std::size_t>(n * (n + 1) / 2 + m);
  };
  p[0] = 0.5 / std::sqrt(std::numbers::pi);
  for (int m = 1; m <= n_max; ++m) {
    p[at(m, m)] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * p[at(m - 1, m - 1)];
  }
  for (int m = 0; m < n_max; ++m) {
    p[at(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * c * p[at(m, m)];
  }
  for (int m = 0; m <= n_max; ++m) {
    for (int n = m + 2; n <= n_max; ++n) {
      const double nn = n;
      const double mm = m;
      const double a = std::sqrt((4.0 * nn * nn - 1.0) / (nn * nn - mm * mm));
      const double b = std::sqrt(((nn - 1.0) * (nn - 1.0) - mm * mm) /
                                 (4.0 * (nn - 1.0) * (nn - 1.0) - 1.0));
      p[at(n, m)] = a * (c * p[at(n - 1, m)] - b * p[at(n - 2, m)]);
    }
  }
  return p;
}

}  // namespace

HarmonicIndex HarmonicIndex::FromFlat(std::size_t flat) {
  int n = static_cast<int>(std::sqrt(static_cast<double>(flat)));
  while (static_cast<std::size_t>(n * n) > flat) --n;
  while (static_cast<std::size_t>((n + 1) * (n + 1)) <= flat) ++n;
  return {n, static_cast<int>(flat) - n * n - n};
}

double Wavenumber(double frequency_hz, double speed_of_sound) {
  return 2.0 * std::numbers::pi * frequency_hz / speed_of_sound;
}

std::vector<Complex> SphericalHarmonics(int n_max, double theta, double phi) {
  CheckOrder(n_max);
  const std::vector<double> legendre = NormalizedLegendre(n_max, theta);
  std::vector<Complex> out(NumHarmonics(n_max));
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n; ++m) {
      const double l = legendre[static_cast<std::size_t>(n * (n + 1) / 2 + m)];
      const Complex y = l * std::polar(1.0, m * phi);
      out[HarmonicIndex{n, m}.Flat()] = y;
      if (m > 0) {
        // Y_n^{-m} = (-1)^m conj(Y_n^m)
        out[HarmonicIndex{n, -m}.Flat()] = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
      }
    }
  }
  return out;
}

Complex SphericalHarmonic(HarmonicIndex idx, double theta, double phi) {
  if (idx.n < 0 || std::abs(idx.m) > idx.n) {
    throw Error(ErrorCode::kInvalidArgument, "invalid harmonic index");
  }
  return SphericalHarmonics(idx.n, theta, phi)[idx.Flat()];
}

std::vector<Complex> SphericalHankelH1Table(int n_max, double x) {
  CheckOrder(n_max);
  if (!(x > 0.0)) {
    throw Error(ErrorCode::kDomainError,
                "spherical Hankel argument must be positive, got " + std::to_string(x));
  }
  std::vector<Complex> h(static_cast<std::size_t>(n_max + 1));
  const Complex i(0.0, 1.0);
  const Complex e = std::polar(1.0, x);
  h[0] = -i * e / x;
  if (n_max >= 1) h[1] = -e * (1.0 + i / x) / x;
  for (int n = 1; n < n_max; ++n) {
    h[n + 1] = ((2.0 * n + 1.0) / x) * h[n] - h[n - 1];
  }
  return h;
}

Complex SphericalHankelH1(int n, double x) {
  return SphericalHankelH1Table(n, x)[static_cast<std::size_t>(n)];
}

std::vector<Complex> BasisRow(const SphericalPosition& pos, double k, int n_max) {
  const std::vector<Complex> h = SphericalHankelH1Table(n_max, k * pos.r);
  std::vector<Complex> row = SphericalHarmonics(n_max, pos.theta, pos.phi);
  for (std::size_t j = 0; j < row.size(); ++j) {
    row[j] = h[static_cast<std::size_t>(HarmonicIndex::FromFlat(j).n)] * row[j];
  }
  return row;
}

}  // namespace hrtfup
