#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "modecast/config.hpp"
#include "modecast/elm.hpp"
#include "modecast/io.hpp"
#include "modecast/metrics.hpp"
#include "modecast/mutual_information.hpp"
#include "modecast/pso.hpp"
#include "modecast/rng.hpp"
#include "modecast/series.hpp"
#include "modecast/synthetic.hpp"
#include "modecast/vmd.hpp"

// End-to-end forecasting flows. Four model variants share one split of the
// data: a plain random-hidden-layer regressor, the same regressor with its
// hidden layer found by swarm search (uniform or chaotic initialization),
// and a combined flow that first decomposes the series into low- and
// high-frequency branches and forecasts each branch independently.
//
// Leakage rule: everything a training or fitness path reads derives from the
// first n_train supervised rows, i.e. from the series prefix of length
// n_train + lag + horizon - 1. The one documented exception is the combined
// flow's decomposition, which (matching the published procedure) runs over
// the full series before splitting; every report of that flow carries a
// warning saying so.

namespace modecast {

enum class ModelKind { elm, pso_elm, ipso_elm, vmd_ipso_elm };

inline std::string model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::elm: return "elm";
    case ModelKind::pso_elm: return "pso_elm";
    case ModelKind::ipso_elm: return "ipso_elm";
    case ModelKind::vmd_ipso_elm: return "vmd_ipso_elm";
  }
  throw std::logic_error("model_name: unreachable");
}

inline ModelKind parse_model_name(const std::string& name) {
  if (name == "elm") return ModelKind::elm;
  if (name == "pso_elm") return ModelKind::pso_elm;
  if (name == "ipso_elm") return ModelKind::ipso_elm;
  if (name == "vmd_ipso_elm") return ModelKind::vmd_ipso_elm;
  throw ConfigError("unknown model '" + name + "' (expected elm, pso_elm, ipso_elm or vmd_ipso_elm)");
}

struct ExperimentConfig {
  std::vector<ModelKind> models{ModelKind::vmd_ipso_elm};
  std::string data_source = "synthetic";  // "synthetic" or a CSV path
  std::string data_column = "0";
  SyntheticSpec synthetic;
  int lag_count = 7;
  int horizon = 1;
  double train_fraction = 0.75;
  double fitness_holdout_fraction = 0.2;  // tail share of the training rows scored by the search
  int run_count = 30;
  std::uint64_t base_seed = 1;
  ElmConfig elm;
  PsoConfig pso;  // bounds are filled per search from the elm ranges
  ChaosConfig chaos;
  VmdConfig vmd;
  int histogram_bins = 0;  // 0 = ceil(sqrt(series length))

  void validate() const {
    if (models.empty()) throw std::invalid_argument("ExperimentConfig: models must be non-empty");
    if (data_source.empty()) throw std::invalid_argument("ExperimentConfig: data_source must be non-empty");
    if (lag_count < 1) throw std::invalid_argument("ExperimentConfig: lag_count must be >= 1");
    if (horizon < 1) throw std::invalid_argument("ExperimentConfig: horizon must be >= 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      throw std::invalid_argument("ExperimentConfig: train_fraction must be in (0, 1)");
    if (!(fitness_holdout_fraction > 0.0 && fitness_holdout_fraction < 1.0))
      throw std::invalid_argument("ExperimentConfig: fitness_holdout_fraction must be in (0, 1)");
    if (run_count < 1) throw std::invalid_argument("ExperimentConfig: run_count must be >= 1");
    if (histogram_bins < 0) throw std::invalid_argument("ExperimentConfig: histogram_bins must be >= 0");
    elm.validate();
    pso.validate_scalars();
    chaos.validate();
    vmd.validate();
  }
};

/// The series a config points at: generated when data_source is
/// "synthetic", loaded from CSV otherwise.
inline TimeSeries load_experiment_series(const ExperimentConfig& config) {
  if (config.data_source == "synthetic") return generate_synthetic(config.synthetic);
  return load_csv(config.data_source, config.data_column);
}

// --- scale -> window -> split preparation ---

struct PreparedData {
  ScalingParams scaling;       // fitted on the training prefix only
  std::vector<double> scaled;  // full series mapped through that scaling
  int n_train = 0;             // supervised rows available for training/fitness
  int n_test = 0;              // supervised rows reserved for final scoring
  int prefix_len = 0;          // samples the first n_train rows draw from
};

inline PreparedData prepare(std::span<const double> values, int lag_count, int horizon,
                            double train_fraction) {
  const long long total_rows =
      static_cast<long long>(values.size()) - lag_count - horizon + 1;
  if (total_rows < 2) throw std::invalid_argument("prepare: series too short to split");
  const auto n_train =
      static_cast<int>(split_index(static_cast<Eigen::Index>(total_rows), SplitSpec{train_fraction}));
  const int n_test = static_cast<int>(total_rows) - n_train;
  if (n_train < 1 || n_test < 1) throw std::invalid_argument("prepare: empty train or test partition");

  PreparedData prep;
  prep.n_train = n_train;
  prep.n_test = n_test;
  prep.prefix_len = n_train + lag_count + horizon - 1;
  prep.scaling = minmax_fit(values.subspan(0, static_cast<std::size_t>(prep.prefix_len)));
  prep.scaled = minmax_apply(values, prep.scaling);
  return prep;
}

// --- one branch: train (optionally search) on the first n_train rows ---

/// Train one forecaster over one value stream (the whole scaled series, or
/// one frequency branch). Only the first n_train supervised rows are read.
/// With search on, the hidden layer comes from a swarm search whose fitness
/// is percentage error on the last fitness_holdout_fraction of the training
/// rows (inverted through fitness_scaling when given); the output weights
/// are then refit on all n_train rows.
inline ElmModel fit_branch(std::span<const double> values, int n_train, const ExperimentConfig& config,
                           PsoConfig::InitMode init_mode, bool search,
                           const std::optional<ScalingParams>& fitness_scaling, std::uint64_t seed,
                           PsoResult* search_trace = nullptr) {
  const SupervisedDataset dataset = make_lag_dataset(values, config.lag_count, config.horizon);
  if (n_train < 1 || n_train > dataset.rows())
    throw std::invalid_argument("fit_branch: n_train out of range");
  const Eigen::MatrixXd train_x = dataset.features.topRows(n_train);
  const Eigen::VectorXd train_y = dataset.targets.head(n_train);

  if (!search) {
    auto [weights, biases] = init_random(config.elm, config.lag_count, seed);
    return train(train_x, train_y, weights, biases);
  }

  const int holdout =
      std::max(1, static_cast<int>(std::floor(config.fitness_holdout_fraction * n_train)));
  const int fit_rows = n_train - holdout;
  if (fit_rows < 1) throw std::invalid_argument("fit_branch: too few rows for a fitness holdout");
  const Eigen::MatrixXd fit_x = train_x.topRows(fit_rows);
  const Eigen::VectorXd fit_y = train_y.head(fit_rows);
  const Eigen::MatrixXd validation_x = train_x.bottomRows(holdout);
  const Eigen::VectorXd validation_y = train_y.tail(holdout);

  PsoConfig pso = config.pso;
  pso.init_mode = init_mode;
  elm_search_bounds(config.elm, config.lag_count, pso);
  const ElmFitness fitness{fit_x, fit_y, validation_x, validation_y, config.elm.hidden_count,
                           fitness_scaling};
  const PsoResult found = optimize(fitness, pso, config.chaos, seed);
  if (search_trace != nullptr) *search_trace = found;
  auto [weights, biases] = decode_elm(found.best_position, config.elm.hidden_count, config.lag_count);
  return train(train_x, train_y, weights, biases);
}

/// Predictions for supervised rows [first_row, first_row + row_count) of the
/// lag dataset over `values`.
inline Eigen::VectorXd predict_rows(const ElmModel& model, std::span<const double> values, int lag_count,
                                    int first_row, int row_count) {
  Eigen::MatrixXd features(row_count, lag_count);
  for (int r = 0; r < row_count; ++r)
    for (int j = 0; j < lag_count; ++j)
      features(r, j) = values[static_cast<std::size_t>(first_row + r + j)];
  return predict(model, features);
}

// --- single run ---

struct SingleRunResult {
  Eigen::VectorXd predictions;  // raw units over the test partition
  Eigen::VectorXd actuals;      // raw units
  ForecastMetrics metrics;
  Eigen::VectorXd low_predictions;   // branch flow only, raw units
  Eigen::VectorXd high_predictions;  // branch flow only, raw units
  int boundary_index = -1;           // branch flow only
  std::vector<std::string> warnings;
};

inline PsoConfig::InitMode init_mode_for(ModelKind kind) {
  return kind == ModelKind::pso_elm ? PsoConfig::InitMode::uniform_random
                                    : PsoConfig::InitMode::tent_chaos;
}

inline SingleRunResult run_single(ModelKind kind, const TimeSeries& series, const ExperimentConfig& config,
                                  std::uint64_t seed, const ModeSet* precomputed_modes = nullptr) {
  config.validate();
  series.validate();
  const PreparedData prep = prepare(series.values, config.lag_count, config.horizon, config.train_fraction);

  SingleRunResult out;
  out.actuals.resize(prep.n_test);
  for (int j = 0; j < prep.n_test; ++j)
    out.actuals(j) =
        series.values[static_cast<std::size_t>(prep.n_train + j + config.lag_count + config.horizon - 1)];

  if (kind == ModelKind::vmd_ipso_elm) {
    ModeSet local;
    const ModeSet* modes = precomputed_modes;
    if (modes == nullptr) {
      local = decompose(series.values, config.vmd);
      modes = &local;
    }
    HistogramSpec hist = HistogramSpec::sqrt_rule(series.values.size());
    if (config.histogram_bins > 0) hist.bin_count = config.histogram_bins;
    const FrequencyPartition part = find_boundary(*modes, hist);
    out.boundary_index = part.boundary_index;
    out.warnings.push_back(
        "decomposition ran over the full series before the train/test split; "
        "mode shapes can carry test-period information");
    if (part.low_series.size() != series.values.size())
      throw std::logic_error("run_single: low branch length mismatch");
    if (!part.single_mode && part.high_series.size() != part.low_series.size())
      throw std::logic_error("run_single: branch misalignment");

    const auto forecast_one = [&](const std::vector<double>& branch, StreamId stream) {
      const ScalingParams branch_scale =
          minmax_fit(std::span<const double>(branch.data(), static_cast<std::size_t>(prep.prefix_len)));
      const std::vector<double> branch_scaled = minmax_apply(branch, branch_scale);
      const ElmModel model = fit_branch(branch_scaled, prep.n_train, config,
                                        PsoConfig::InitMode::tent_chaos, true, branch_scale,
                                        derive_seed(seed, stream));
      Eigen::VectorXd pred =
          predict_rows(model, branch_scaled, config.lag_count, prep.n_train, prep.n_test);
      for (Eigen::Index i = 0; i < pred.size(); ++i) pred(i) = minmax_invert(pred(i), branch_scale);
      return pred;
    };

    out.low_predictions = forecast_one(part.low_series, StreamId::branch_low);
    if (part.single_mode) {
      out.high_predictions = Eigen::VectorXd::Zero(prep.n_test);
      out.warnings.push_back("single-mode decomposition: no high-frequency branch");
    } else {
      out.high_predictions = forecast_one(part.high_series, StreamId::branch_high);
    }
    out.predictions = out.low_predictions + out.high_predictions;
  } else {
    const bool search = kind != ModelKind::elm;
    const ElmModel model =
        fit_branch(prep.scaled, prep.n_train, config, init_mode_for(kind), search, prep.scaling, seed);
    Eigen::VectorXd pred = predict_rows(model, prep.scaled, config.lag_count, prep.n_train, prep.n_test);
    out.predictions.resize(prep.n_test);
    for (Eigen::Index i = 0; i < pred.size(); ++i)
      out.predictions(i) = minmax_invert(pred(i), prep.scaling);
  }

  out.metrics = score(out.actuals, out.predictions);
  return out;
}

// --- repeated runs and model comparison ---

struct ForecastReport {
  ModelKind model = ModelKind::elm;
  RunSummary summary;
  Eigen::VectorXd predictions_last_run;
  Eigen::VectorXd actuals;
  ExperimentConfig config_echo;
  std::vector<std::string> warnings;
};

namespace detail {

inline void merge_warnings(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& w : from)
    if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
}

}  // namespace detail

/// run_count independent runs with seeds base_seed + 0 .. base_seed +
/// run_count - 1. Runs are scheduled over `threads` workers; each run
/// depends only on its own seed, so the outputs are identical for any
/// thread count.
inline ForecastReport run_repeated(ModelKind kind, const TimeSeries& series, const ExperimentConfig& config,
                                   int threads = 1, const ModeSet* precomputed_modes = nullptr) {
  config.validate();
  ModeSet local;
  const ModeSet* modes = precomputed_modes;
  if (kind == ModelKind::vmd_ipso_elm && modes == nullptr) {
    local = decompose(series.values, config.vmd);
    modes = &local;
  }

  const int run_count = config.run_count;
  std::vector<SingleRunResult> results(static_cast<std::size_t>(run_count));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(run_count));
  std::atomic<int> next{0};
  const auto worker = [&]() {
    while (true) {
      const int r = next.fetch_add(1);
      if (r >= run_count) return;
      try {
        results[static_cast<std::size_t>(r)] =
            run_single(kind, series, config, config.base_seed + static_cast<std::uint64_t>(r), modes);
      } catch (...) {
        failures[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };

  const int worker_count = std::clamp(threads, 1, run_count);
  if (worker_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(worker_count - 1));
    for (int i = 1; i < worker_count; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  for (int r = 0; r < run_count; ++r) {
    if (!failures[static_cast<std::size_t>(r)]) continue;
    try {
      std::rethrow_exception(failures[static_cast<std::size_t>(r)]);
    } catch (const std::exception& e) {
      throw std::runtime_error("run with seed " +
                               format_integer(config.base_seed + static_cast<std::uint64_t>(r)) +
                               " failed: " + e.what());
    }
  }

  ForecastReport report;
  report.model = kind;
  std::vector<ForecastMetrics> per_run;
  per_run.reserve(results.size());
  for (const auto& r : results) {
    per_run.push_back(r.metrics);
    detail::merge_warnings(report.warnings, r.warnings);
  }
  report.summary = summarize(per_run);
  report.predictions_last_run = results.back().predictions;
  report.actuals = results.front().actuals;
  report.config_echo = config;
  return report;
}

/// run_repeated per model kind, all on the same series and split. The
/// decomposition is shared across kinds that need it.
inline std::vector<ForecastReport> compare(const std::vector<ModelKind>& kinds, const TimeSeries& series,
                                           const ExperimentConfig& config, int threads = 1) {
  if (kinds.empty()) throw std::invalid_argument("compare: no model kinds");
  config.validate();
  ModeSet shared_modes;
  const ModeSet* modes = nullptr;
  if (std::find(kinds.begin(), kinds.end(), ModelKind::vmd_ipso_elm) != kinds.end()) {
    shared_modes = decompose(series.values, config.vmd);
    modes = &shared_modes;
  }
  std::vector<ForecastReport> reports;
  reports.reserve(kinds.size());
  for (const auto kind : kinds) reports.push_back(run_repeated(kind, series, config, threads, modes));
  return reports;
}

// --- report and config serialization ---

inline std::string metrics_csv(std::span<const ForecastReport> reports) {
  std::string out = "model,mape_max,mape_min,mape_mean,rmse_mean\n";
  for (const auto& r : reports) {
    out += model_name(r.model) + ',' + format_real(r.summary.mape_max) + ',' +
           format_real(r.summary.mape_min) + ',' + format_real(r.summary.mape_mean) + ',' +
           format_real(r.summary.rmse_mean) + '\n';
  }
  return out;
}

inline std::string predictions_csv(const ForecastReport& report) {
  std::string out = "index,actual,predicted\n";
  for (Eigen::Index i = 0; i < report.actuals.size(); ++i) {
    out += format_integer(i) + ',' + format_real(report.actuals(i)) + ',' +
           format_real(report.predictions_last_run(i)) + '\n';
  }
  return out;
}

/// Human-readable key-value block per report, one blank line between models.
inline std::string report_text(std::span<const ForecastReport> reports) {
  std::string out;
  for (const auto& r : reports) {
    out += "model=" + model_name(r.model) + "\n";
    out += "run_count=" + format_integer(r.summary.run_count) + "\n";
    out += "mape_max=" + format_real(r.summary.mape_max) + "\n";
    out += "mape_min=" + format_real(r.summary.mape_min) + "\n";
    out += "mape_mean=" + format_real(r.summary.mape_mean) + "\n";
    out += "rmse_mean=" + format_real(r.summary.rmse_mean) + "\n";
    for (const auto& w : r.warnings) out += "warning=" + w + "\n";
    out += "\n";
  }
  return out;
}

inline std::string serialize_experiment(const ExperimentConfig& config) {
  std::string out = "# experiment configuration (fully resolved)\n";
  std::string models;
  for (std::size_t i = 0; i < config.models.size(); ++i) {
    if (i) models += ',';
    models += model_name(config.models[i]);
  }
  out += "models=" + models + "\n";
  out += "data.source=" + config.data_source + "\n";
  out += "data.column=" + config.data_column + "\n";
  out += "lag_count=" + format_integer(config.lag_count) + "\n";
  out += "horizon=" + format_integer(config.horizon) + "\n";
  out += "train_fraction=" + format_real(config.train_fraction) + "\n";
  out += "fitness.holdout_fraction=" + format_real(config.fitness_holdout_fraction) + "\n";
  out += "run_count=" + format_integer(config.run_count) + "\n";
  out += "base_seed=" + format_integer(config.base_seed) + "\n";
  out += "synthetic.length=" + format_integer(config.synthetic.length) + "\n";
  out += "synthetic.base_level=" + format_real(config.synthetic.base_level) + "\n";
  out += "synthetic.trend_slope=" + format_real(config.synthetic.trend_slope) + "\n";
  std::string components;
  for (std::size_t i = 0; i < config.synthetic.components.size(); ++i) {
    if (i) components += ',';
    const auto& c = config.synthetic.components[i];
    components += format_real(c.amplitude) + ':' + format_real(c.period) + ':' + format_real(c.phase);
  }
  out += "synthetic.components=" + components + "\n";
  out += "synthetic.noise_std=" + format_real(config.synthetic.noise_std) + "\n";
  out += "synthetic.seed=" + format_integer(config.synthetic.seed) + "\n";
  out += "elm.hidden_count=" + format_integer(config.elm.hidden_count) + "\n";
  out += "elm.weight_min=" + format_real(config.elm.weight_range.first) + "\n";
  out += "elm.weight_max=" + format_real(config.elm.weight_range.second) + "\n";
  out += "elm.bias_min=" + format_real(config.elm.bias_range.first) + "\n";
  out += "elm.bias_max=" + format_real(config.elm.bias_range.second) + "\n";
  out += "pso.population=" + format_integer(config.pso.population) + "\n";
  out += "pso.iterations=" + format_integer(config.pso.iterations) + "\n";
  out += "pso.cognitive=" + format_real(config.pso.cognitive) + "\n";
  out += "pso.social=" + format_real(config.pso.social) + "\n";
  out += "pso.inertia=" + format_real(config.pso.inertia) + "\n";
  out += "pso.velocity_clamp_fraction=" + format_real(config.pso.velocity_clamp_fraction) + "\n";
  out += "chaos.chaos_coefficient=" + format_real(config.chaos.chaos_coefficient) + "\n";
  out += "chaos.shrink_factor=" + format_real(config.chaos.shrink_factor) + "\n";
  out += "chaos.beta_a=" + format_real(config.chaos.beta_a) + "\n";
  out += "chaos.beta_b=" + format_real(config.chaos.beta_b) + "\n";
  out += "vmd.mode_count=" + format_integer(config.vmd.mode_count) + "\n";
  out += "vmd.bandwidth_penalty=" + format_real(config.vmd.bandwidth_penalty) + "\n";
  out += "vmd.ascent_rate=" + format_real(config.vmd.ascent_rate) + "\n";
  out += "vmd.tolerance=" + format_real(config.vmd.tolerance) + "\n";
  out += "vmd.max_iterations=" + format_integer(config.vmd.max_iterations) + "\n";
  out += "histogram.bin_count=" + format_integer(config.histogram_bins) + "\n";
  return out;
}

/// Build an ExperimentConfig from parsed key=value text. When
/// require_search_keys is set (subcommands that run a swarm search),
/// pso.population and pso.iterations are mandatory so experiment files are
/// self-describing; everything else falls back to defaults. Unknown keys are
/// reported via KeyValueConfig::untouched_keys by the caller.
inline ExperimentConfig experiment_from_config(const KeyValueConfig& kv, bool require_search_keys = true) {
  ExperimentConfig config;

  std::string model_list = kv.get_string_or("models", "");
  if (model_list.empty() && kv.has("model")) model_list = kv.get_string("model");
  if (!model_list.empty()) {
    config.models.clear();
    for (const auto& name : split(model_list, ','))
      config.models.push_back(parse_model_name(name));
  }

  config.data_source = kv.get_string_or("data.source", config.data_source);
  config.data_column = kv.get_string_or("data.column", config.data_column);
  config.lag_count = static_cast<int>(kv.get_integer_or("lag_count", config.lag_count));
  config.horizon = static_cast<int>(kv.get_integer_or("horizon", config.horizon));
  config.train_fraction = kv.get_real_or("train_fraction", config.train_fraction);
  config.fitness_holdout_fraction =
      kv.get_real_or("fitness.holdout_fraction", config.fitness_holdout_fraction);
  config.run_count = static_cast<int>(kv.get_integer_or("run_count", config.run_count));
  config.base_seed = static_cast<std::uint64_t>(kv.get_integer_or("base_seed",
                                                                  static_cast<long long>(config.base_seed)));

  config.synthetic.length = static_cast<int>(kv.get_integer_or("synthetic.length", config.synthetic.length));
  config.synthetic.base_level = kv.get_real_or("synthetic.base_level", config.synthetic.base_level);
  config.synthetic.trend_slope = kv.get_real_or("synthetic.trend_slope", config.synthetic.trend_slope);
  config.synthetic.noise_std = kv.get_real_or("synthetic.noise_std", config.synthetic.noise_std);
  config.synthetic.seed =
      static_cast<std::uint64_t>(kv.get_integer_or("synthetic.seed", static_cast<long long>(config.synthetic.seed)));
  const std::string components = kv.get_string_or("synthetic.components", "");
  if (!components.empty()) {
    config.synthetic.components.clear();
    for (const auto& triple : split(components, ',')) {
      const auto parts = split(triple, ':');
      if (parts.size() != 3)
        throw ConfigError("synthetic.components entries must be amplitude:period:phase");
      const auto amp = parse_real(parts[0]);
      const auto period = parse_real(parts[1]);
      const auto phase = parse_real(parts[2]);
      if (!amp || !period || !phase)
        throw ConfigError("synthetic.components entry '" + triple + "' is not numeric");
      config.synthetic.components.push_back({*amp, *period, *phase});
    }
  }

  config.elm.hidden_count = static_cast<int>(kv.get_integer_or("elm.hidden_count", config.elm.hidden_count));
  config.elm.weight_range.first = kv.get_real_or("elm.weight_min", config.elm.weight_range.first);
  config.elm.weight_range.second = kv.get_real_or("elm.weight_max", config.elm.weight_range.second);
  config.elm.bias_range.first = kv.get_real_or("elm.bias_min", config.elm.bias_range.first);
  config.elm.bias_range.second = kv.get_real_or("elm.bias_max", config.elm.bias_range.second);

  if (require_search_keys) {
    config.pso.population = static_cast<int>(kv.get_integer("pso.population"));
    config.pso.iterations = static_cast<int>(kv.get_integer("pso.iterations"));
  } else {
    config.pso.population = static_cast<int>(kv.get_integer_or("pso.population", config.pso.population));
    config.pso.iterations = static_cast<int>(kv.get_integer_or("pso.iterations", config.pso.iterations));
  }
  config.pso.cognitive = kv.get_real_or("pso.cognitive", config.pso.cognitive);
  config.pso.social = kv.get_real_or("pso.social", config.pso.social);
  config.pso.inertia = kv.get_real_or("pso.inertia", config.pso.inertia);
  config.pso.velocity_clamp_fraction =
      kv.get_real_or("pso.velocity_clamp_fraction", config.pso.velocity_clamp_fraction);

  config.chaos.chaos_coefficient = kv.get_real_or("chaos.chaos_coefficient", config.chaos.chaos_coefficient);
  config.chaos.shrink_factor = kv.get_real_or("chaos.shrink_factor", config.chaos.shrink_factor);
  config.chaos.beta_a = kv.get_real_or("chaos.beta_a", config.chaos.beta_a);
  config.chaos.beta_b = kv.get_real_or("chaos.beta_b", config.chaos.beta_b);

  config.vmd.mode_count = static_cast<int>(kv.get_integer_or("vmd.mode_count", config.vmd.mode_count));
  config.vmd.bandwidth_penalty = kv.get_real_or("vmd.bandwidth_penalty", config.vmd.bandwidth_penalty);
  config.vmd.ascent_rate = kv.get_real_or("vmd.ascent_rate", config.vmd.ascent_rate);
  config.vmd.tolerance = kv.get_real_or("vmd.tolerance", config.vmd.tolerance);
  config.vmd.max_iterations =
      static_cast<int>(kv.get_integer_or("vmd.max_iterations", config.vmd.max_iterations));

  config.histogram_bins = static_cast<int>(kv.get_integer_or("histogram.bin_count", config.histogram_bins));

  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return config;
}

}  // namespace modecast
