#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>

// Seeded randomness for the whole toolkit. One master seed fans out into
// named substreams so independent consumers (initialization, per-particle
// step noise, chaos perturbation, synthetic noise) never share a sequence
// and parallel evaluation cannot perturb any of them. Distribution samplers
// are pinned here because the standard library's are not bit-portable.

namespace modecast {

/// splitmix64 finalizer (Steele/Lea/Flood); used only to derive stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class StreamId : std::uint64_t {
  elm_init = 1,
  pso_init = 2,
  pso_step = 3,
  chaos_beta = 4,
  synth_noise = 5,
  branch_low = 6,
  branch_high = 7,
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = mix64(master);
  s = mix64(s ^ mix64(a ^ 0x632be59bd9b4e019ULL));
  s = mix64(s ^ mix64(b ^ 0xd1b54a32d192ed03ULL));
  return s;
}

inline std::uint64_t derive_seed(std::uint64_t master, StreamId id, std::uint64_t index = 0) {
  return derive_seed(master, static_cast<std::uint64_t>(id), index);
}

/// One independent random substream. mt19937_64 is fully specified by the
/// standard, so identical seeds give identical draws everywhere.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  double uniform_in(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Standard normal via Box-Muller; the second draw of each pair is cached.
  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    return r * std::cos(t);
  }

  /// Gamma(shape, 1) by Marsaglia-Tsang squeeze; shape < 1 via the boost
  /// Gamma(shape+1) * U^(1/shape).
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
    if (shape < 1.0) {
      const double u = uniform_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// Beta(a, b) on [0, 1] as the two-gamma ratio X / (X + Y).
  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    const double s = x + y;
    if (s <= 0.0) return a / (a + b);  // both underflowed; fall back to the mean
    return x / s;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace modecast
