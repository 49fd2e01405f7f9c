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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "hrtfup/dataset.h"
#include "hrtfup/error.h"

namespace hrtfup {
namespace {

struct Ratio {
  std::int64_t up = 1;
  std::int64_t down = 1;
};

// Best rational approximation with denominator <= 1e6, accepted only if it
// matches the ratio to 1e-9 relative.
Ratio RationalRatio(double target, double source) {
  const double ratio = target / source;
  const double r_int_t = std::round(target);
  const double r_int_s = std::round(source);
  if (std::abs(target - r_int_t) < 1e-9 && std::abs(source - r_int_s) < 1e-9) {
    const auto t = static_cast<std::int64_t>(r_int_t);
    const auto s = static_cast<std::int64_t>(r_int_s);
    const std::int64_t g = std::gcd(t, s);
    return {t / g, s / g};
  }
  // Continued-fraction convergents.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = ratio;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > 1000000) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - ratio) <= 1e-9 * ratio) {
      return {h1, k1};
    }
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  throw Error(ErrorCode::kUnsupportedRatio, "rates " + std::to_string(source) + " -> " +
                                                std::to_string(target) +
                                                " are not rationally related");
}

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Polyphase table of a Kaiser-windowed sinc low-pass. Phase j serves output
// samples whose input-domain time has fractional part j / up.
class PolyphaseFilter {
 public:
  PolyphaseFilter(Ratio ratio) : up_(ratio.up), down_(ratio.down) {
    // Cutoff 15/16 of the output Nyquist, ~2/16 transition, ~90 dB stopband.
    const double rel = static_cast<double>(up_) / static_cast<double>(down_);
    cutoff_ = 0.5 * rel * (15.0 / 16.0);  // cycles per input sample
    const double transition = 2.0 * std::numbers::pi * 0.5 * rel * (2.0 / 16.0);
    const double atten = 90.0;
    beta_ = 0.1102 * (atten - 8.7);
    half_width_ = static_cast<int>(std::ceil((atten - 8.0) / (2.285 * transition) / 2.0)) + 1;
    table_.resize(static_cast<std::size_t>(up_) * 2 * half_width_);
    const double i0_beta = std::cyl_bessel_i(0.0, beta_);
    for (std::int64_t j = 0; j < up_; ++j) {
      const double frac = static_cast<double>(j) / static_cast<double>(up_);
      for (int tap = 0; tap < 2 * half_width_; ++tap) {
        // Input sample floor(t) - half_width + 1 + tap sits at offset tau.
        const double tau = frac + half_width_ - 1 - tap;
        const double u = tau / half_width_;
        double w = 0.0;
        if (std::abs(u) < 1.0) w = std::cyl_bessel_i(0.0, beta_ * std::sqrt(1.0 - u * u)) / i0_beta;
        table_[static_cast<std::size_t>(j) * 2 * half_width_ + tap] =
            2.0 * cutoff_ * Sinc(2.0 * cutoff_ * tau) * w;
      }
    }
  }

  std::vector<double> Apply(const double* x, std::size_t n_in) const {
    const auto n_out = static_cast<std::size_t>(
        std::llround(static_cast<double>(n_in) * static_cast<double>(up_) / static_cast<double>(down_)));
    std::vector<double> y(n_out, 0.0);
    for (std::size_t n = 0; n < n_out; ++n) {
      const std::int64_t num = static_cast<std::int64_t>(n) * down_;
      const std::int64_t base = num / up_;
      const std::int64_t phase = num % up_;
      const double* h = table_.data() + static_cast<std::size_t>(phase) * 2 * half_width_;
      double acc = 0.0;
      for (int tap = 0; tap < 2 * half_width_; ++tap) {
        const std::int64_t i = base - half_width_ + 1 + tap;
        if (i < 0 || i >= static_cast<std::int64_t>(n_in)) continue;
        acc += h[tap] * x[i];
      }
      y[n] = acc;
    }
    return y;
  }

 private:
  std::int64_t up_;
  std::int64_t down_;
  double cutoff_ = 0.0;
  double beta_ = 0.0;
  int half_width_ = 0;
  std::vector<double> table_;
};

}  // namespace

HrirBundle ResampleHrirs(const HrirBundle& bundle, double target_rate) {
  bundle.Validate();
  if (!(target_rate > 0.0)) throw Error(ErrorCode::kInvalidArgument, "target rate must be positive");
  if (target_rate == bundle.sample_rate) return bundle;
  if (target_rate > bundle.sample_rate) {
    throw Error(ErrorCode::kUnsupportedRatio, "upsampling from " + std::to_string(bundle.sample_rate) +
                                                  " to " + std::to_string(target_rate));
  }
  const Ratio ratio = RationalRatio(target_rate, bundle.sample_rate);
  const PolyphaseFilter filter(ratio);

  HrirBundle out;
  out.subjects = bundle.subjects;
  out.positions = bundle.positions;
  out.sample_rate = target_rate;
  out.channels = bundle.channels;
  out.taps = static_cast<std::size_t>(std::llround(
      static_cast<double>(bundle.taps) * static_cast<double>(ratio.up) / static_cast<double>(ratio.down)));
  out.hrirs.resize(out.subjects.size() * out.positions.size() * out.channels * out.taps);
  for (std::size_t s = 0; s < bundle.subjects.size(); ++s) {
    for (std::size_t b = 0; b < bundle.positions.size(); ++b) {
      for (std::size_t ch = 0; ch < bundle.channels; ++ch) {
        const std::vector<double> y = filter.Apply(bundle.hrirs.data() + bundle.Offset(s, b, ch), bundle.taps);
        std::copy(y.begin(), y.end(), out.hrirs.begin() + static_cast<std::ptrdiff_t>(out.Offset(s, b, ch)));
      }
    }
  }
  return out;
}

}  // namespace hrtfup
