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

#ifndef HRTFUP_GEOM_H_
#define HRTFUP_GEOM_H_

namespace hrtfup {

// Source position relative to the head center. +x points along the view
// direction, +z through the top of the head.
struct CartesianPosition {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double Norm() const;
  bool operator==(const CartesianPosition&) const = default;
};

// theta is the zenith angle in [0, pi], phi the azimuth in [0, 2 pi).
// Radians throughout; degrees appear only at file and CLI boundaries.
struct SphericalPosition {
  double r = 1.0;
  double theta = 0.0;
  double phi = 0.0;
};

// (r sin(theta) cos(phi), r sin(theta) sin(phi), r cos(theta)).
CartesianPosition SphToCart(const SphericalPosition& p);

// Inverse of SphToCart. At the poles phi is canonicalized to 0.
// Throws Error(kZeroRadius) for the origin.
SphericalPosition CartToSph(const CartesianPosition& p);

double Dot(const CartesianPosition& a, const CartesianPosition& b);

// Unit vector along p. Throws Error(kZeroRadius) for the origin.
CartesianPosition Normalized(const CartesianPosition& p);

}  // namespace hrtfup

#endif  // HRTFUP_GEOM_H_
