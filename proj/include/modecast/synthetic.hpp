#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "modecast/rng.hpp"
#include "modecast/series.hpp"

// Synthetic load series: base level + linear trend + sinusoidal components +
// Gaussian noise. Stands in for metered 15-minute load data; the default
// shape carries a daily (96-sample) cycle plus a short-period ripple.

namespace modecast {

struct SinusoidComponent {
  double amplitude = 0.0;
  double period = 1.0;  // in samples
  double phase = 0.0;   // radians
};

struct SyntheticSpec {
  int length = 1096;
  double base_level = 500.0;
  double trend_slope = 0.02;  // per sample
  std::vector<SinusoidComponent> components{{120.0, 96.0, 0.0}, {35.0, 12.0, 1.3}};
  double noise_std = 4.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (length < 2) throw std::invalid_argument("SyntheticSpec: length must be >= 2");
    if (noise_std < 0.0) throw std::invalid_argument("SyntheticSpec: noise_std must be >= 0");
    double amplitude_sum = 0.0;
    for (const auto& c : components) {
      if (!(c.period > 0.0)) throw std::invalid_argument("SyntheticSpec: period must be > 0");
      amplitude_sum += std::abs(c.amplitude);
    }
    const double worst_trend = std::min(0.0, trend_slope * static_cast<double>(length - 1));
    if (!(base_level + worst_trend - amplitude_sum - 6.0 * noise_std > 0.0))
      throw std::invalid_argument(
          "SyntheticSpec: base_level too small to keep the series positive "
          "(needs base > sum of amplitudes + 6*noise_std, net of trend)");
  }
};

/// Deterministic under spec.seed. Throws if any generated value is not
/// strictly positive (percentage error metrics need nonzero actuals).
inline TimeSeries generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  RandomStream noise(derive_seed(spec.seed, StreamId::synth_noise));
  TimeSeries series;
  series.values.resize(static_cast<std::size_t>(spec.length));
  for (int t = 0; t < spec.length; ++t) {
    double v = spec.base_level + spec.trend_slope * static_cast<double>(t);
    for (const auto& c : spec.components)
      v += c.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / c.period + c.phase);
    if (spec.noise_std > 0.0) v += spec.noise_std * noise.normal();
    if (!(v > 0.0))
      throw std::runtime_error("generate_synthetic: non-positive value at sample " + std::to_string(t));
    series.values[static_cast<std::size_t>(t)] = v;
  }
  return series;
}

}  // namespace modecast
