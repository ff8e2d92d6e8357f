#pragma once

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "modecast/pipeline.hpp"
#include "modecast/svg.hpp"

// Command-line front end. Subcommands: decompose, partition, train,
// forecast, experiment, plot. Exit codes: 0 success, 1 usage error (nothing
// written), 2 runtime/numeric failure (partial outputs removed). Every
// random choice funnels through --seed; no wall clock, no OS entropy.

namespace modecast {
namespace cli_detail {

/// Files written by one subcommand, so a failing run can take its partial
/// outputs down with it.
class OutputGuard {
 public:
  void write(const std::filesystem::path& path, std::string_view content) {
    write_file(path, content);
    written_.push_back(path);
  }

  void discard_all() {
    for (const auto& path : written_) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
    written_.clear();
  }

 private:
  std::vector<std::filesystem::path> written_;
};

inline void apply_sets(KeyValueConfig& kv, const std::vector<std::string>& sets) {
  for (const auto& entry : sets) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--set expects key=value, got '" + entry + "'");
    kv.set(std::string(trim(entry.substr(0, eq))), std::string(trim(entry.substr(eq + 1))));
  }
}

inline void reject_unknown_keys(const KeyValueConfig& kv) {
  const auto unknown = kv.untouched_keys();
  if (unknown.empty()) return;
  std::string msg = "unknown config keys:";
  for (const auto& key : unknown) msg += ' ' + key;
  throw ConfigError(msg);
}

inline KeyValueConfig gather_config(const std::string& config_path, const std::vector<std::string>& sets) {
  KeyValueConfig kv;
  if (!config_path.empty()) kv = KeyValueConfig::load(config_path);
  apply_sets(kv, sets);
  return kv;
}

inline std::string join_reals(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_real(values[i]);
  }
  return out;
}

inline std::string modes_csv(const ModeSet& modes) {
  std::string out = "# center_frequencies," + join_reals(modes.center_frequencies) + "\n";
  for (Eigen::Index k = 0; k < modes.modes.rows(); ++k) {
    if (k) out += ',';
    out += "mode_" + format_integer(k + 1);
  }
  out += '\n';
  for (Eigen::Index j = 0; j < modes.modes.cols(); ++j) {
    for (Eigen::Index k = 0; k < modes.modes.rows(); ++k) {
      if (k) out += ',';
      out += format_real(modes.modes(k, j));
    }
    out += '\n';
  }
  return out;
}

inline std::string series_csv(const std::vector<double>& values) {
  std::string out = "value\n";
  for (double v : values) out += format_real(v) + '\n';
  return out;
}

inline std::string trace_csv(const PsoResult& result) {
  std::string out = "iteration,gbest_fitness\n";
  for (std::size_t i = 0; i < result.history.size(); ++i)
    out += format_integer(i + 1) + ',' + format_real(result.history[i]) + '\n';
  return out;
}

inline HistogramSpec partition_histogram(const ExperimentConfig& config, std::size_t series_length) {
  HistogramSpec hist = HistogramSpec::sqrt_rule(series_length);
  if (config.histogram_bins > 0) hist.bin_count = config.histogram_bins;
  return hist;
}

struct CommonArgs {
  std::string input;
  std::string column = "0";
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
};

inline void run_decompose(const CommonArgs& args, OutputGuard& guard) {
  KeyValueConfig kv = gather_config(args.config_path, args.sets);
  const ExperimentConfig config = experiment_from_config(kv, false);
  reject_unknown_keys(kv);
  const TimeSeries series = load_csv(args.input, args.column);
  const ModeSet modes = decompose(series.values, config.vmd);
  std::filesystem::create_directories(args.out_dir);
  guard.write(std::filesystem::path(args.out_dir) / "imf.csv", modes_csv(modes));
  std::cout << "modes=" << modes.modes.rows() << " iterations=" << modes.iterations_used
            << " residual=" << format_real(modes.reconstruction_residual) << "\n"
            << "center_frequencies=" << join_reals(modes.center_frequencies) << "\n";
}

inline void run_partition(const CommonArgs& args, OutputGuard& guard) {
  KeyValueConfig kv = gather_config(args.config_path, args.sets);
  const ExperimentConfig config = experiment_from_config(kv, false);
  reject_unknown_keys(kv);
  const TimeSeries series = load_csv(args.input, args.column);
  const ModeSet modes = decompose(series.values, config.vmd);
  const FrequencyPartition part = find_boundary(modes, partition_histogram(config, series.values.size()));

  std::string report = "mode_count=" + format_integer(modes.modes.rows()) + "\n";
  report += "boundary_index=" + format_integer(part.boundary_index) + "\n";
  report += "adjacent_mi=" + join_reals(part.adjacent_mi) + "\n";
  report += "single_mode=" + std::string(part.single_mode ? "1" : "0") + "\n";

  std::filesystem::create_directories(args.out_dir);
  guard.write(std::filesystem::path(args.out_dir) / "partition.txt", report);
  guard.write(std::filesystem::path(args.out_dir) / "low.csv", series_csv(part.low_series));
  guard.write(std::filesystem::path(args.out_dir) / "high.csv", series_csv(part.high_series));
  std::cout << report;
}

inline void run_train(const CommonArgs& args, const std::string& model_name_arg, std::uint64_t seed,
                      OutputGuard& guard) {
  const ModelKind kind = parse_model_name(model_name_arg);
  KeyValueConfig kv = gather_config(args.config_path, args.sets);
  const ExperimentConfig config = experiment_from_config(kv, kind != ModelKind::elm);
  reject_unknown_keys(kv);
  const TimeSeries series =
      args.input.empty() ? load_experiment_series(config) : load_csv(args.input, args.column);
  const PreparedData prep =
      prepare(series.values, config.lag_count, config.horizon, config.train_fraction);
  std::filesystem::create_directories(args.out_dir);
  const std::filesystem::path out_dir(args.out_dir);

  if (kind == ModelKind::vmd_ipso_elm) {
    const ModeSet modes = decompose(series.values, config.vmd);
    const FrequencyPartition part =
        find_boundary(modes, partition_histogram(config, series.values.size()));
    std::cout << "boundary_index=" << part.boundary_index << "\n";
    const auto train_branch = [&](const std::vector<double>& branch, StreamId stream,
                                  const std::string& tag) {
      const ScalingParams branch_scale = minmax_fit(
          std::span<const double>(branch.data(), static_cast<std::size_t>(prep.prefix_len)));
      const std::vector<double> branch_scaled = minmax_apply(branch, branch_scale);
      PsoResult trace;
      ElmModel model = fit_branch(branch_scaled, prep.n_train, config, PsoConfig::InitMode::tent_chaos,
                                  true, branch_scale, derive_seed(seed, stream), &trace);
      model.scaling = branch_scale;
      guard.write(out_dir / ("model_" + tag + ".txt"), serialize_model(model));
      guard.write(out_dir / ("trace_" + tag + ".csv"), trace_csv(trace));
      std::cout << tag << "_training_residual=" << format_real(model.training_residual) << " " << tag
                << "_best_fitness=" << format_real(trace.best_fitness) << "\n";
    };
    train_branch(part.low_series, StreamId::branch_low, "low");
    if (!part.single_mode) train_branch(part.high_series, StreamId::branch_high, "high");
    return;
  }

  PsoResult trace;
  const bool search = kind != ModelKind::elm;
  ElmModel model = fit_branch(prep.scaled, prep.n_train, config, init_mode_for(kind), search,
                              prep.scaling, seed, search ? &trace : nullptr);
  model.scaling = prep.scaling;
  guard.write(out_dir / "model.txt", serialize_model(model));
  if (search) guard.write(out_dir / "trace.csv", trace_csv(trace));
  std::cout << "training_residual=" << format_real(model.training_residual);
  if (search) std::cout << " best_fitness=" << format_real(trace.best_fitness);
  std::cout << "\n";
}

inline void run_forecast(const CommonArgs& args, const std::string& model_path, int horizon,
                         OutputGuard& guard) {
  if (horizon < 1) throw ConfigError("--horizon must be >= 1");
  const ElmModel model = load_model(model_path);
  const TimeSeries series = load_csv(args.input, args.column);
  const auto lag_count = static_cast<int>(model.input_weights.cols());

  std::vector<double> values = series.values;
  if (model.scaling) values = minmax_apply(values, *model.scaling);
  const SupervisedDataset dataset = make_lag_dataset(values, lag_count, horizon);
  Eigen::VectorXd predicted = predict(model, dataset.features);
  if (model.scaling)
    for (Eigen::Index i = 0; i < predicted.size(); ++i)
      predicted(i) = minmax_invert(predicted(i), *model.scaling);

  const SupervisedDataset raw = make_lag_dataset(series.values, lag_count, horizon);
  std::string csv = "index,actual,predicted\n";
  for (Eigen::Index i = 0; i < predicted.size(); ++i)
    csv += format_integer(i) + ',' + format_real(raw.targets(i)) + ',' + format_real(predicted(i)) + '\n';
  std::filesystem::create_directories(args.out_dir);
  guard.write(std::filesystem::path(args.out_dir) / "predictions.csv", csv);

  std::cout << "rows=" << predicted.size();
  try {
    const ForecastMetrics m = score(raw.targets, predicted);
    std::cout << " mape=" << format_real(m.mape) << " rmse=" << format_real(m.rmse);
  } catch (const std::invalid_argument&) {
    // zero actuals: percentage error undefined, report row count only
  }
  std::cout << "\n";
}

inline void run_experiment(const std::string& config_path, const std::vector<std::string>& sets,
                           std::uint64_t seed, int threads, const std::string& out_dir_arg,
                           OutputGuard& guard) {
  if (threads < 1) throw ConfigError("--threads must be >= 1");
  KeyValueConfig kv = gather_config(config_path, sets);
  ExperimentConfig config = experiment_from_config(kv, true);
  reject_unknown_keys(kv);
  config.base_seed = seed;

  const TimeSeries series = load_experiment_series(config);
  const std::vector<ForecastReport> reports = compare(config.models, series, config, threads);

  std::filesystem::create_directories(out_dir_arg);
  const std::filesystem::path out_dir(out_dir_arg);
  guard.write(out_dir / "metrics.csv", metrics_csv(reports));
  guard.write(out_dir / "predictions.csv", predictions_csv(reports.front()));
  for (const auto& report : reports)
    guard.write(out_dir / ("predictions_" + model_name(report.model) + ".csv"), predictions_csv(report));
  guard.write(out_dir / "report.txt", report_text(reports));
  guard.write(out_dir / "config_echo.cfg", serialize_experiment(config));

  std::string warnings;
  for (const auto& report : reports)
    for (const auto& w : report.warnings) warnings += model_name(report.model) + ": " + w + "\n";
  if (!warnings.empty()) guard.write(out_dir / "warnings.txt", warnings);

  const auto& first = reports.front();
  std::vector<ChartSeries> chart{
      {"actual", "#1f77b4",
       std::vector<double>(first.actuals.data(), first.actuals.data() + first.actuals.size())},
      {"predicted", "#d62728",
       std::vector<double>(first.predictions_last_run.data(),
                           first.predictions_last_run.data() + first.predictions_last_run.size())}};
  guard.write(out_dir / "forecast.svg",
              line_chart_svg(model_name(first.model) + " forecast", "test sample", "load", chart));

  std::cout << metrics_csv(reports);
}

inline void run_plot(const std::string& input, const std::string& out_file, const std::string& title,
                     OutputGuard& guard) {
  const auto lines = read_lines(input);
  if (lines.empty() || trim(lines[0]) != "index,actual,predicted")
    throw std::runtime_error("plot: expected a predictions CSV with header index,actual,predicted");
  std::vector<double> actual;
  std::vector<double> predicted;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto cells = split(lines[i], ',');
    if (cells.size() != 3)
      throw std::runtime_error("plot: malformed row " + std::to_string(i + 1));
    const auto a = parse_real(cells[1]);
    const auto p = parse_real(cells[2]);
    if (!a || !p) throw std::runtime_error("plot: non-numeric row " + std::to_string(i + 1));
    actual.push_back(*a);
    predicted.push_back(*p);
  }
  const std::vector<ChartSeries> chart{{"actual", "#1f77b4", actual},
                                       {"predicted", "#d62728", predicted}};
  const auto parent = std::filesystem::path(out_file).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  guard.write(out_file, line_chart_svg(title, "test sample", "load", chart));
  std::cout << "points=" << actual.size() << " out=" << out_file << "\n";
}

}  // namespace cli_detail

inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"decomposition-based short-term load forecasting toolkit"};
  app.require_subcommand(1);

  cli_detail::CommonArgs dec_args;
  auto* dec = app.add_subcommand("decompose", "split a series into band-limited modes");
  dec->add_option("--input", dec_args.input, "input series CSV")->required();
  dec->add_option("--column", dec_args.column, "CSV column (index or name)");
  dec->add_option("--config", dec_args.config_path, "key=value config file");
  dec->add_option("--set", dec_args.sets, "config override key=value");
  dec->add_option("--out", dec_args.out_dir, "output directory")->required();

  cli_detail::CommonArgs part_args;
  auto* part = app.add_subcommand("partition", "split modes into low/high-frequency branches");
  part->add_option("--input", part_args.input, "input series CSV")->required();
  part->add_option("--column", part_args.column, "CSV column (index or name)");
  part->add_option("--config", part_args.config_path, "key=value config file");
  part->add_option("--set", part_args.sets, "config override key=value");
  part->add_option("--out", part_args.out_dir, "output directory")->required();

  cli_detail::CommonArgs train_args;
  std::string train_model = "ipso_elm";
  std::uint64_t train_seed = 0;
  auto* train_cmd = app.add_subcommand("train", "train one forecaster and save it");
  train_cmd->add_option("--input", train_args.input, "input series CSV (default: config data source)");
  train_cmd->add_option("--column", train_args.column, "CSV column (index or name)");
  train_cmd->add_option("--config", train_args.config_path, "key=value config file");
  train_cmd->add_option("--set", train_args.sets, "config override key=value");
  train_cmd->add_option("--model", train_model, "elm | pso_elm | ipso_elm | vmd_ipso_elm");
  train_cmd->add_option("--seed", train_seed, "master random seed")->required();
  train_cmd->add_option("--out", train_args.out_dir, "output directory")->required();

  cli_detail::CommonArgs fc_args;
  std::string fc_model_path;
  int fc_horizon = 1;
  auto* fc = app.add_subcommand("forecast", "apply a saved model to a series");
  fc->add_option("--input", fc_args.input, "input series CSV")->required();
  fc->add_option("--column", fc_args.column, "CSV column (index or name)");
  fc->add_option("--model-file", fc_model_path, "saved model file")->required();
  fc->add_option("--horizon", fc_horizon, "forecast horizon in samples");
  fc->add_option("--out", fc_args.out_dir, "output directory")->required();

  std::string exp_config;
  std::vector<std::string> exp_sets;
  std::uint64_t exp_seed = 0;
  int exp_threads = 1;
  std::string exp_out;
  auto* exp = app.add_subcommand("experiment", "repeated-run model comparison with report artifacts");
  exp->add_option("--config", exp_config, "key=value config file");
  exp->add_option("--set", exp_sets, "config override key=value");
  exp->add_option("--seed", exp_seed, "base seed; run i uses base+i")->required();
  exp->add_option("--threads", exp_threads, "worker threads for repeated runs");
  exp->add_option("--out", exp_out, "output directory")->required();

  std::string plot_input;
  std::string plot_out;
  std::string plot_title = "forecast";
  auto* plot = app.add_subcommand("plot", "render a predictions CSV as an SVG chart");
  plot->add_option("--input", plot_input, "predictions CSV (index,actual,predicted)")->required();
  plot->add_option("--out", plot_out, "output SVG file")->required();
  plot->add_option("--title", plot_title, "chart title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 1;
  }

  cli_detail::OutputGuard guard;
  try {
    if (*dec) cli_detail::run_decompose(dec_args, guard);
    else if (*part) cli_detail::run_partition(part_args, guard);
    else if (*train_cmd) cli_detail::run_train(train_args, train_model, train_seed, guard);
    else if (*fc) cli_detail::run_forecast(fc_args, fc_model_path, fc_horizon, guard);
    else if (*exp) cli_detail::run_experiment(exp_config, exp_sets, exp_seed, exp_threads, exp_out, guard);
    else if (*plot) cli_detail::run_plot(plot_input, plot_out, plot_title, guard);
    return 0;
  } catch (const ConfigError& e) {
    guard.discard_all();
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    guard.discard_all();
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace modecast
