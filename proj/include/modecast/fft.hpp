#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

// Thin DFT wrappers over Eigen's FFT (kissfft backend). Forward is the plain
// unnormalized sum; inverse carries the 1/n factor, so idft(dft(x)) == x.
// Arbitrary lengths are supported.

namespace modecast {

inline std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x) {
  if (x.empty()) throw std::invalid_argument("dft: empty input");
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in(x.begin(), x.end());
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  return out;
}

inline std::vector<std::complex<double>> dft(std::span<const double> x) {
  std::vector<std::complex<double>> in(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) in[i] = std::complex<double>(x[i], 0.0);
  return dft(std::span<const std::complex<double>>(in));
}

inline std::vector<std::complex<double>> idft(std::span<const std::complex<double>> x) {
  if (x.empty()) throw std::invalid_argument("idft: empty input");
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in(x.begin(), x.end());
  std::vector<std::complex<double>> out;
  fft.inv(out, in);
  return out;
}

/// Inverse transform keeping only the real part (for spectra that are
/// Hermitian by construction).
inline std::vector<double> idft_real(std::span<const std::complex<double>> x) {
  const auto full = idft(x);
  std::vector<double> out(full.size());
  for (std::size_t i = 0; i < full.size(); ++i) out[i] = full[i].real();
  return out;
}

}  // namespace modecast
