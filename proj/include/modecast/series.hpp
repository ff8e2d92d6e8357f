#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modecast/io.hpp"

// Load-series ingestion and supervised-learning preparation: CSV loading,
// min-max scaling, lag windowing, chronological splitting. Everything here
// is a pure function of its inputs.

namespace modecast {

struct TimeSeries {
  std::vector<double> values;              // load, kW.h per sample
  double sample_interval_minutes = 15.0;
  std::optional<std::string> origin_timestamp;

  void validate() const {
    if (values.empty()) throw std::invalid_argument("TimeSeries: empty");
    for (double v : values)
      if (!std::isfinite(v)) throw std::invalid_argument("TimeSeries: non-finite value");
    if (!(sample_interval_minutes > 0.0))
      throw std::invalid_argument("TimeSeries: sample interval must be positive");
  }
};

struct CsvError : std::runtime_error {
  CsvError(const std::string& msg, std::size_t row_index) : std::runtime_error(msg), row(row_index) {}
  std::size_t row;  // 1-based data row; 0 for file-level errors
};

/// Read one numeric column. `column` is a 0-based index or a header name; a
/// header row is detected by the first row's selected cell failing to parse.
inline TimeSeries load_csv(const std::filesystem::path& path, const std::string& column = "0") {
  if (!std::filesystem::exists(path)) throw CsvError("missing file: " + path.string(), 0);
  const auto lines = read_lines(path);

  std::vector<std::vector<std::string>> rows;
  for (const auto& line : lines) {
    if (trim(line).empty()) continue;
    rows.push_back(split(line, ','));
  }
  if (rows.empty()) throw CsvError("empty file: " + path.string(), 0);

  std::size_t col = 0;
  std::size_t first_data = 0;
  const auto index = parse_integer(column);
  if (index && *index >= 0) {
    col = static_cast<std::size_t>(*index);
    if (col >= rows[0].size()) throw CsvError("column index out of range: " + column, 0);
    if (!parse_real(rows[0][col])) first_data = 1;  // header row
  } else {
    // Named column: the first row is the header by definition.
    bool found = false;
    for (std::size_t i = 0; i < rows[0].size(); ++i) {
      if (rows[0][i] == column) {
        col = i;
        found = true;
        break;
      }
    }
    if (!found) throw CsvError("no column named '" + column + "' in header", 0);
    first_data = 1;
  }

  TimeSeries series;
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    const std::size_t data_row = r - first_data + 1;
    if (col >= rows[r].size())
      throw CsvError("row " + format_integer(static_cast<long long>(data_row)) + ": missing column", data_row);
    const auto value = parse_real(rows[r][col]);
    if (!value)
      throw CsvError("row " + format_integer(static_cast<long long>(data_row)) + ": cannot parse '" +
                         rows[r][col] + "' as a real number",
                     data_row);
    series.values.push_back(*value);
  }
  if (series.values.empty()) throw CsvError("no data rows in " + path.string(), 0);

  // timestamp,value layout: carry the first row's timestamp, never model it
  if (col > 0 && !parse_real(rows[first_data][0])) series.origin_timestamp = rows[first_data][0];
  return series;
}

struct ScalingParams {
  double min = 0.0;
  double max = 1.0;

  void validate() const {
    if (!(max > min)) throw std::invalid_argument("ScalingParams: max must exceed min");
  }
};

inline ScalingParams minmax_fit(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("minmax_fit: empty input");
  double lo = values[0];
  double hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) throw std::invalid_argument("minmax_fit: constant series has degenerate scale");
  return ScalingParams{lo, hi};
}

inline ScalingParams minmax_fit(const TimeSeries& series) { return minmax_fit(std::span<const double>(series.values)); }

inline double minmax_apply(double value, const ScalingParams& p) {
  p.validate();
  return (value - p.min) / (p.max - p.min);
}

inline double minmax_invert(double value, const ScalingParams& p) {
  p.validate();
  return value * (p.max - p.min) + p.min;
}

inline std::vector<double> minmax_apply(std::span<const double> values, const ScalingParams& p) {
  p.validate();
  std::vector<double> out(values.size());
  const double range = p.max - p.min;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - p.min) / range;
  return out;
}

inline std::vector<double> minmax_invert(std::span<const double> values, const ScalingParams& p) {
  p.validate();
  std::vector<double> out(values.size());
  const double range = p.max - p.min;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] * range + p.min;
  return out;
}

inline TimeSeries minmax_apply(const TimeSeries& series, const ScalingParams& p) {
  TimeSeries out = series;
  out.values = minmax_apply(std::span<const double>(series.values), p);
  return out;
}

inline TimeSeries minmax_invert(const TimeSeries& series, const ScalingParams& p) {
  TimeSeries out = series;
  out.values = minmax_invert(std::span<const double>(series.values), p);
  return out;
}

///// Lag-window dataset: row i holds values [i, i+lag), its target is the
/// value at i + lag + horizon - 1.
struct SupervisedDataset {
  Eigen::MatrixXd features;  // N x lag_count
  Eigen::VectorXd targets;   // N
  int lag_count = 0;
  int horizon = 1;

  Eigen::Index rows() const { return features.rows(); }
};

inline SupervisedDataset make_lag_dataset(std::span<const double> values, int lag_count = 7, int horizon = 1) {
  if (lag_count < 1) throw std::invalid_argument("make_lag_dataset: lag_count must be >= 1");
  if (horizon < 1) throw std::invalid_argument("make_lag_dataset: horizon must be >= 1");
  const auto len = static_cast<long long>(values.size());
  const long long n = len - lag_count - horizon + 1;
  if (n < 1) throw std::invalid_argument("make_lag_dataset: series too short for lag window");

  SupervisedDataset ds;
  ds.lag_count = lag_count;
  ds.horizon = horizon;
  ds.features.resize(n, lag_count);
  ds.targets.resize(n);
  for (long long i = 0; i < n; ++i) {
    for (int j = 0; j < lag_count; ++j) ds.features(i, j) = values[static_cast<std::size_t>(i + j)];
    ds.targets(i) = values[static_cast<std::size_t>(i + lag_count + horizon - 1)];
  }
  return ds;
}

inline SupervisedDataset make_lag_dataset(const TimeSeries& series, int lag_count = 7, int horizon = 1) {
  return make_lag_dataset(std::span<const double>(series.values), lag_count, horizon);
}

struct SplitSpec {
  double train_fraction = 0.75;

  void validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      throw std::invalid_argument("SplitSpec: train_fraction must lie in (0,1)");
  }
};

/// Number of training rows a split yields.
inline Eigen::Index split_index(Eigen::Index n, const SplitSpec& spec) {
  spec.validate();
  return static_cast<Eigen::Index>(std::floor(spec.train_fraction * static_cast<double>(n)));
}

inline std::pair<SupervisedDataset, SupervisedDataset> chrono_split(const SupervisedDataset& ds,
                                                                    const SplitSpec& spec) {
  const Eigen::Index n = ds.rows();
  const Eigen::Index n_train = split_index(n, spec);
  if (n_train < 1 || n_train >= n)
    throw std::invalid_argument("chrono_split: fraction produces an empty partition");

  SupervisedDataset train{ds.features.topRows(n_train), ds.targets.head(n_train), ds.lag_count, ds.horizon};
  SupervisedDataset test{ds.features.bottomRows(n - n_train), ds.targets.tail(n - n_train), ds.lag_count,
                         ds.horizon};
  return {std::move(train), std::move(test)};
}

}  // namespace modecast
