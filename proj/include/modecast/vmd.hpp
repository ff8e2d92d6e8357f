#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "modecast/fft.hpp"
#include "modecast/io.hpp"

// Variational mode decomposition. The signal is mirror-extended, moved to
// the frequency domain, and split into K band-limited modes by alternating
// Wiener-filter mode updates, power-centroid center-frequency updates, and
// dual ascent on the reconstruction constraint, until the relative update
// norm drops below tolerance.

namespace modecast {

struct VmdConfig {
  int mode_count = 7;
  double bandwidth_penalty = 2000.0;  // alpha
  double ascent_rate = 0.1;           // dual-ascent step (tau)
  double tolerance = 1e-7;
  int max_iterations = 500;
  enum class OmegaInit { uniform_spaced, zero } omega_init = OmegaInit::uniform_spaced;

  void validate() const {
    if (mode_count < 1) throw std::invalid_argument("VmdConfig: mode_count must be >= 1");
    if (!(bandwidth_penalty > 0.0)) throw std::invalid_argument("VmdConfig: bandwidth_penalty must be positive");
    if (!(ascent_rate >= 0.0)) throw std::invalid_argument("VmdConfig: ascent_rate must be >= 0");
    if (!(tolerance > 0.0)) throw std::invalid_argument("VmdConfig: tolerance must be positive");
    if (max_iterations < 1) throw std::invalid_argument("VmdConfig: max_iterations must be >= 1");
  }
};

struct ModeSet {
  Eigen::MatrixXd modes;                    // K x T, same units as the input
  std::vector<double> center_frequencies;   // cycles per sample, ascending, in [0, 0.5]
  int iterations_used = 0;
  double final_update_norm = 0.0;
  double reconstruction_residual = 0.0;     // ||sum(modes) - signal||_2 / ||signal||_2
};

struct VmdNumericError : std::runtime_error {
  VmdNumericError(const std::string& msg, int at_iteration)
      : std::runtime_error(msg), iteration(at_iteration) {}
  int iteration;
};

/// Even extension by half the signal on each side; the central T samples of
/// the result equal the input.
inline std::vector<double> mirror_extend(std::span<const double> signal) {
  const std::size_t t = signal.size();
  if (t < 2) throw std::invalid_argument("mirror_extend: signal too short");
  const std::size_t half = t / 2;
  std::vector<double> out;
  out.reserve(2 * t);
  for (std::size_t i = half; i-- > 0;) out.push_back(signal[i]);
  out.insert(out.end(), signal.begin(), signal.end());
  for (std::size_t i = t; i-- > half;) out.push_back(signal[i]);
  return out;
}

inline std::vector<double> reconstruct(const ModeSet& set) {
  if (set.modes.rows() < 1) throw std::invalid_argument("reconstruct: empty mode set");
  std::vector<double> sum(static_cast<std::size_t>(set.modes.cols()), 0.0);
  for (Eigen::Index k = 0; k < set.modes.rows(); ++k)
    for (Eigen::Index j = 0; j < set.modes.cols(); ++j) sum[static_cast<std::size_t>(j)] += set.modes(k, j);
  return sum;
}

inline ModeSet decompose(std::span<const double> signal, const VmdConfig& config) {
  config.validate();
  const std::size_t t = signal.size();
  const std::size_t k_count = static_cast<std::size_t>(config.mode_count);
  if (t < 4 * k_count) throw std::invalid_argument("decompose: signal shorter than 4K samples");
  for (double v : signal)
    if (!std::isfinite(v)) throw std::invalid_argument("decompose: non-finite sample");

  const auto extended = mirror_extend(signal);
  const std::size_t n = extended.size();  // 2T
  const std::size_t f_count = n / 2 + 1;  // half-spectrum bins, Nyquist included

  const auto signal_spectrum_full = dft(std::span<const double>(extended));
  std::vector<std::complex<double>> signal_half(signal_spectrum_full.begin(),
                                                signal_spectrum_full.begin() + static_cast<long>(f_count));

  std::vector<double> freq(f_count);
  for (std::size_t j = 0; j < f_count; ++j) freq[j] = static_cast<double>(j) / static_cast<double>(n);

  std::vector<std::vector<std::complex<double>>> mode_spectra(
      k_count, std::vector<std::complex<double>>(f_count, {0.0, 0.0}));
  std::vector<std::complex<double>> multiplier(f_count, {0.0, 0.0});
  std::vector<std::complex<double>> mode_sum(f_count, {0.0, 0.0});

  std::vector<double> omega(k_count, 0.0);
  if (config.omega_init == VmdConfig::OmegaInit::uniform_spaced)
    for (std::size_t k = 0; k < k_count; ++k)
      omega[k] = 0.5 * (static_cast<double>(k) + 0.5) / static_cast<double>(k_count);

  const double alpha = config.bandwidth_penalty;
  const double tau = config.ascent_rate;

  int iterations = 0;
  double update_norm = std::numeric_limits<double>::infinity();
  auto previous = mode_spectra;

  while (iterations < config.max_iterations) {
    previous = mode_spectra;

    for (std::size_t k = 0; k < k_count; ++k) {
      auto& mode = mode_spectra[k];
      // Wiener-filter update against the residual of all other modes
      for (std::size_t j = 0; j < f_count; ++j) {
        const std::complex<double> others = mode_sum[j] - mode[j];
        const double d = freq[j] - omega[k];
        const std::complex<double> updated =
            (signal_half[j] - others + 0.5 * multiplier[j]) / (1.0 + 2.0 * alpha * d * d);
        mode_sum[j] += updated - mode[j];
        mode[j] = updated;
      }
      // power-weighted spectral centroid
      double num = 0.0;
      double den = 0.0;
      for (std::size_t j = 0; j < f_count; ++j) {
        const double power = std::norm(mode[j]);
        num += freq[j] * power;
        den += power;
      }
      if (den > 1e-300) omega[k] = num / den;
    }

    for (std::size_t j = 0; j < f_count; ++j)
      multiplier[j] += tau * (signal_half[j] - mode_sum[j]);

    update_norm = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      double diff = 0.0;
      double ref = 0.0;
      for (std::size_t j = 0; j < f_count; ++j) {
        diff += std::norm(mode_spectra[k][j] - previous[k][j]);
        ref += std::norm(previous[k][j]);
      }
      update_norm += diff / std::max(ref, 1e-30);
    }
    ++iterations;
    if (!std::isfinite(update_norm))
      throw VmdNumericError("decompose diverged (non-finite update norm) at iteration " +
                                format_integer(iterations),
                            iterations);
    if (update_norm < config.tolerance) break;
  }

  // canonical order: ascending center frequency, ties by original index
  std::vector<std::size_t> order(k_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return omega[a] < omega[b]; });

  ModeSet set;
  set.iterations_used = iterations;
  set.final_update_norm = update_norm;
  set.modes.resize(static_cast<Eigen::Index>(k_count), static_cast<Eigen::Index>(t));
  set.center_frequencies.resize(k_count);

  const std::size_t start = t / 2;  // input occupies [t/2, t/2 + t) of the extension
  for (std::size_t row = 0; row < k_count; ++row) {
    const auto& half = mode_spectra[order[row]];
    set.center_frequencies[row] = omega[order[row]];

    std::vector<std::complex<double>> full(n, {0.0, 0.0});
    for (std::size_t j = 0; j < f_count; ++j) full[j] = half[j];
    for (std::size_t j = 1; j + 1 < f_count; ++j) full[n - j] = std::conj(half[j]);
    const auto time_domain = idft_real(std::span<const std::complex<double>>(full));
    for (std::size_t i = 0; i < t; ++i)
      set.modes(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i)) = time_domain[start + i];
  }

  const auto sum = reconstruct(set);
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    err += (sum[i] - signal[i]) * (sum[i] - signal[i]);
    ref += signal[i] * signal[i];
  }
  set.reconstruction_residual = ref > 0.0 ? std::sqrt(err / ref) : std::sqrt(err);
  return set;
}

}  // namespace modecast
