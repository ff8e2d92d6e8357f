#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Forecast error metrics and their summary over repeated runs. Percentage
// error is undefined at zero actuals, so mape throws rather than returning
// an infinity that would poison a mean.

namespace modecast {

inline void check_metric_inputs(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size())
    throw std::invalid_argument("metrics: actual/predicted length mismatch");
  if (actual.empty()) throw std::invalid_argument("metrics: empty input");
  for (std::size_t i = 0; i < actual.size(); ++i)
    if (!std::isfinite(actual[i]) || !std::isfinite(predicted[i]))
      throw std::invalid_argument("metrics: non-finite value");
}

/// Mean absolute percentage error, in percent.
inline double mape(std::span<const double> actual, std::span<const double> predicted) {
  check_metric_inputs(actual, predicted);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0)
      throw std::invalid_argument("mape: actual value is zero at index " + std::to_string(i));
    sum += std::abs(actual[i] - predicted[i]) / std::abs(actual[i]);
  }
  return 100.0 * sum / static_cast<double>(actual.size());
}

/// Root mean square error.
inline double rmse(std::span<const double> actual, std::span<const double> predicted) {
  check_metric_inputs(actual, predicted);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = actual[i] - predicted[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(actual.size()));
}

struct ForecastMetrics {
  double mape = 0.0;
  double rmse = 0.0;
};

inline ForecastMetrics score(std::span<const double> actual, std::span<const double> predicted) {
  return ForecastMetrics{mape(actual, predicted), rmse(actual, predicted)};
}

inline ForecastMetrics score(const Eigen::VectorXd& actual, const Eigen::VectorXd& predicted) {
  return score(std::span<const double>(actual.data(), static_cast<std::size_t>(actual.size())),
               std::span<const double>(predicted.data(), static_cast<std::size_t>(predicted.size())));
}

/// Spread of the percentage error across repeated runs, plus the mean RMSE.
struct RunSummary {
  double mape_max = 0.0;
  double mape_min = 0.0;
  double mape_mean = 0.0;
  double rmse_mean = 0.0;
  int run_count = 0;
  std::vector<ForecastMetrics> per_run;
};

inline RunSummary summarize(std::span<const ForecastMetrics> runs) {
  if (runs.empty()) throw std::invalid_argument("summarize: no runs");
  RunSummary s;
  s.mape_max = runs[0].mape;
  s.mape_min = runs[0].mape;
  for (const auto& r : runs) {
    s.mape_max = std::max(s.mape_max, r.mape);
    s.mape_min = std::min(s.mape_min, r.mape);
    s.mape_mean += r.mape;
    s.rmse_mean += r.rmse;
  }
  s.mape_mean /= static_cast<double>(runs.size());
  s.rmse_mean /= static_cast<double>(runs.size());
  s.run_count = static_cast<int>(runs.size());
  s.per_run.assign(runs.begin(), runs.end());
  return s;
}

}  // namespace modecast
