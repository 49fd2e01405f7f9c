#!/usr/bin/env python3
# Copyright 2026 The hrtfup Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Computes spherical t-designs with (t+1)^2 points.

Solves sum_i Y_n^m(x_i) = 0 for 1 <= n <= t by minimum-norm Gauss-Newton
over the point angles, starting from a generalized spiral. Writes
designs/tdesign_t{T}_n{COUNT}.txt with one "x y z" unit vector per line.

Usage: make_tdesigns.py [--out DIR] [--tmin 2] [--tmax 13]
"""

import argparse
import os

import numpy as np
from scipy.special import sph_harm_y


def spiral(count):
    k = np.arange(count) + 0.5
    z = 1.0 - 2.0 * k / count
    theta = np.arccos(z)
    phi = np.pi * (1.0 + 5.0**0.5) * k
    return theta, np.mod(phi, 2.0 * np.pi)


def residual_and_jacobian(t, theta, phi):
    rows_r = []
    rows_jt = []
    rows_jp = []
    for n in range(1, t + 1):
        for m in range(0, n + 1):
            y = sph_harm_y(n, m, theta, phi)
            if m < n:
                y_up = sph_harm_y(n, m + 1, theta, phi)
                dtheta = (m / np.tan(theta)) * y + np.sqrt(
                    (n - m) * (n + m + 1)) * np.exp(-1j * phi) * y_up
            else:
                dtheta = (m / np.tan(theta)) * y
            dphi = 1j * m * y
            parts = [np.real] if m == 0 else [np.real, np.imag]
            for part in parts:
                rows_r.append(part(y).sum())
                rows_jt.append(part(dtheta))
                rows_jp.append(part(dphi))
    r = np.array(rows_r)
    jac = np.hstack([np.array(rows_jt), np.array(rows_jp)])
    return r, jac


def solve(t, max_iter=200):
    count = (t + 1) ** 2
    theta, phi = spiral(count)
    # Keep points away from the poles where the parameterization degenerates.
    theta = np.clip(theta, 1e-3, np.pi - 1e-3)
    r, jac = residual_and_jacobian(t, theta, phi)
    norm = np.linalg.norm(r)
    for _ in range(max_iter):
        if norm < 1e-14:
            break
        step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        scale = 1.0
        while scale > 1e-6:
            th = theta + scale * step[:count]
            ph = phi + scale * step[count:]
            r_new, jac_new = residual_and_jacobian(t, th, ph)
            norm_new = np.linalg.norm(r_new)
            if norm_new < norm:
                break
            scale *= 0.5
        else:
            break
        theta, phi, r, jac, norm = th, ph, r_new, jac_new, norm_new
    return theta, phi, norm


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "designs"))
    parser.add_argument("--tmin", type=int, default=2)
    parser.add_argument("--tmax", type=int, default=13)
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for t in range(args.tmin, args.tmax + 1):
        theta, phi, norm = solve(t)
        x = np.sin(theta) * np.cos(phi)
        y = np.sin(theta) * np.sin(phi)
        z = np.cos(theta)
        path = os.path.join(args.out, f"tdesign_t{t}_n{(t + 1) ** 2}.txt")
        with open(path, "w") as f:
            for xi, yi, zi in zip(x, y, z):
                f.write(f"{xi:.17e} {yi:.17e} {zi:.17e}\n")
        print(f"t={t:2d} points={(t + 1) ** 2:3d} residual={norm:.3e}")


if __name__ == "__main__":
    main()
