#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "modecast/vmd.hpp"

// Histogram entropy and adjacent-mode mutual information, used to split a
// mode set into low- and high-frequency branch series at the first MI
// minimum. Entropies use the base-10 logarithm.

namespace modecast {

struct HistogramSpec {
  int bin_count = 32;
  enum class Range { data_min_max, explicit_range } range = Range::data_min_max;
  double lo = 0.0;
  double hi = 1.0;

  void validate() const {
    if (bin_count < 2) throw std::invalid_argument("HistogramSpec: bin_count must be >= 2");
    if (range == Range::explicit_range && !(hi > lo))
      throw std::invalid_argument("HistogramSpec: explicit range must have hi > lo");
  }

  /// Square-root rule: ceil(sqrt(n)) equal-width bins over the data range.
  static HistogramSpec sqrt_rule(std::size_t n) {
    HistogramSpec spec;
    spec.bin_count = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
    return spec;
  }
};

namespace detail {

struct BinAxis {
  double lo;
  double width;  // 0 when the data is constant: everything lands in bin 0
  int bins;

  int index(double v) const {
    if (width <= 0.0) return 0;
    int b = static_cast<int>((v - lo) / width);
    return std::clamp(b, 0, bins - 1);
  }
};

inline BinAxis make_axis(std::span<const double> x, const HistogramSpec& spec) {
  double lo;
  double hi;
  if (spec.range == HistogramSpec::Range::explicit_range) {
    lo = spec.lo;
    hi = spec.hi;
  } else {
    lo = x[0];
    hi = x[0];
    for (double v : x) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double width = hi > lo ? (hi - lo) / spec.bin_count : 0.0;
  return BinAxis{lo, width, spec.bin_count};
}

inline double entropy_of_counts(std::span<const std::int64_t> counts, double total) {
  double h = 0.0;
  for (std::int64_t c : counts) {
    if (c <= 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log10(p);
  }
  return h;
}

}  // namespace detail

inline double entropy(std::span<const double> x, const HistogramSpec& spec) {
  spec.validate();
  if (x.size() < 2) throw std::invalid_argument("entropy: need at least 2 samples");
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("entropy: non-finite sample");
  const auto axis = detail::make_axis(x, spec);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(spec.bin_count), 0);
  for (double v : x) ++counts[static_cast<std::size_t>(axis.index(v))];
  return detail::entropy_of_counts(counts, static_cast<double>(x.size()));
}

inline double joint_entropy(std::span<const double> x, std::span<const double> y, const HistogramSpec& spec) {
  spec.validate();
  if (x.size() != y.size()) throw std::invalid_argument("joint_entropy: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("joint_entropy: need at least 2 samples");
  const auto ax = detail::make_axis(x, spec);
  const auto ay = detail::make_axis(y, spec);
  const std::size_t b = static_cast<std::size_t>(spec.bin_count);
  std::vector<std::int64_t> counts(b * b, 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    ++counts[static_cast<std::size_t>(ax.index(x[i])) * b + static_cast<std::size_t>(ay.index(y[i]))];
  return detail::entropy_of_counts(counts, static_cast<double>(x.size()));
}

inline double mutual_information(std::span<const double> x, std::span<const double> y,
                                 const HistogramSpec& spec) {
  const double mi = entropy(x, spec) + entropy(y, spec) - joint_entropy(x, y, spec);
  return std::max(0.0, mi);
}

struct FrequencyPartition {
  int boundary_index = 0;           // modes [0, b] are low-frequency, (b, K) high
  std::vector<double> adjacent_mi;  // MI(mode_n, mode_{n+1}), n = 0..K-2
  std::vector<double> low_series;
  std::vector<double> high_series;
  bool single_mode = false;         // K == 1: everything in low_series
};

/// Boundary at the first interior local minimum of adjacent-mode MI, falling
/// back to the global minimum when the sequence is monotone.
inline FrequencyPartition find_boundary(const ModeSet& set, const HistogramSpec& spec) {
  const auto k = static_cast<std::size_t>(set.modes.rows());
  const auto t = static_cast<std::size_t>(set.modes.cols());
  if (k == 0) throw std::invalid_argument("find_boundary: empty mode set");

  FrequencyPartition part;
  part.low_series.assign(t, 0.0);
  part.high_series.assign(t, 0.0);

  if (k == 1) {
    part.single_mode = true;
    part.boundary_index = 0;
    for (std::size_t j = 0; j < t; ++j) part.low_series[j] = set.modes(0, static_cast<Eigen::Index>(j));
    return part;
  }

  std::vector<std::vector<double>> rows(k, std::vector<double>(t));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < t; ++j)
      rows[i][j] = set.modes(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));

  part.adjacent_mi.resize(k - 1);
  for (std::size_t i = 0; i + 1 < k; ++i)
    part.adjacent_mi[i] = mutual_information(rows[i], rows[i + 1], spec);

  const auto& mi = part.adjacent_mi;
  int boundary = -1;
  for (std::size_t i = 1; i + 1 < mi.size(); ++i) {
    if (mi[i] < mi[i - 1] && mi[i] < mi[i + 1]) {
      boundary = static_cast<int>(i);
      break;
    }
  }
  if (boundary < 0)
    boundary = static_cast<int>(std::min_element(mi.begin(), mi.end()) - mi.begin());
  part.boundary_index = boundary;

  for (std::size_t i = 0; i < k; ++i) {
    auto& branch = (static_cast<int>(i) <= boundary) ? part.low_series : part.high_series;
    for (std::size_t j = 0; j < t; ++j) branch[j] += rows[i][j];
  }
  return part;
}

}  // namespace modecast
