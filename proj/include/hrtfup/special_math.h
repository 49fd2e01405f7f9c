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

#ifndef HRTFUP_SPECIAL_MATH_H_
#define HRTFUP_SPECIAL_MATH_H_

#include <complex>
#include <cstddef>
#include <vector>

#include "hrtfup/geom.h"

namespace hrtfup {

using Complex = std::complex<double>;

inline constexpr double kDefaultSpeedOfSound = 343.0;  // m/s
inline constexpr int kMaxHarmonicOrder = 30;

// Order n >= 0 and degree |m| <= n of a spherical harmonic.
struct HarmonicIndex {
  int n = 0;
  int m = 0;

  // Position n^2 + n + m in order-major storage.
  std::size_t Flat() const { return static_cast<std::size_t>(n * n + n + m); }
  static HarmonicIndex FromFlat(std::size_t flat);
};

// Number of basis functions up to and including order n_max.
inline std::size_t NumHarmonics(int n_max) {
  return static_cast<std::size_t>((n_max + 1) * (n_max + 1));
}

// k = 2 pi f / v in rad/m.
double Wavenumber(double frequency_hz, double speed_of_sound = kDefaultSpeedOfSound);

// Orthonormal complex spherical harmonic with the Condon-Shortley phase.
// theta is the zenith angle.
Complex SphericalHarmonic(HarmonicIndex idx, double theta, double phi);

// All Y_n^m for n <= n_max, in flat order. Entries agree bit for bit with
// SphericalHarmonic().
std::vector<Complex> SphericalHarmonics(int n_max, double theta, double phi);

// h_n^(1)(x) = j_n(x) + i y_n(x). Throws Error(kDomainError) unless x > 0.
Complex SphericalHankelH1(int n, double x);

// h_0^(1)(x) ... h_{n_max}^(1)(x) by upward recurrence.
std::vector<Complex> SphericalHankelH1Table(int n_max, double x);

// Spherical wavefunctions h_n^(1)(k r) Y_n^m(theta, phi) for n <= n_max.
std::vector<Complex> BasisRow(const SphericalPosition& pos, double k, int n_max);

}  // namespace hrtfup

#endif  // HRTFUP_SPECIAL_MATH_H_
