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

#include "hrtfup/geom.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hrtfup/error.h"

namespace hrtfup {

double CartesianPosition::Norm() const { return std::hypot(x, y, z); }

CartesianPosition SphToCart(const SphericalPosition& p) {
  const double s = std::sin(p.theta);
  return {p.r * s * std::cos(p.phi), p.r * s * std::sin(p.phi),
          p.r * std::cos(p.theta)};
}

SphericalPosition CartToSph(const CartesianPosition& p) {
  const double r = p.Norm();
  if (!(r > 0.0)) throw Error(ErrorCode::kZeroRadius, "position at origin");
  SphericalPosition out;
  out.r = r;
  const double rho = std::hypot(p.x, p.y);
  out.theta = std::atan2(rho, p.z);
  if (rho == 0.0) {
    out.phi = 0.0;
  } else {
    double phi = std::atan2(p.y, p.x);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    // atan2 may round a tiny negative angle up to exactly 2 pi.
    if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
    out.phi = phi;
  }
  return out;
}

double Dot(const CartesianPosition& a, const CartesianPosition& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

CartesianPosition Normalized(const CartesianPosition& p) {
  const double r = p.Norm();
  if (!(r > 0.0)) throw Error(ErrorCode::kZeroRadius, "position at origin");
  return {p.x / r, p.y / r, p.z / r};
}

}  // namespace hrtfup
