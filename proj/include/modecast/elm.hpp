#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modecast/io.hpp"
#include "modecast/rng.hpp"
#include "modecast/series.hpp"

// Single-hidden-layer extreme learning machine. Input weights and biases are
// random (or supplied by a search); only the output weights are learned, as
// the minimum-norm least-squares solution of H * beta = T via SVD.

namespace modecast {

struct ElmConfig {
  int hidden_count = 40;
  enum class Activation { sigmoid } activation = Activation::sigmoid;
  std::pair<double, double> weight_range{-1.0, 1.0};
  std::pair<double, double> bias_range{0.0, 1.0};

  void validate() const {
    if (hidden_count < 1) throw std::invalid_argument("ElmConfig: hidden_count must be >= 1");
    if (!(weight_range.first < weight_range.second))
      throw std::invalid_argument("ElmConfig: weight_range must have lo < hi");
    if (!(bias_range.first < bias_range.second))
      throw std::invalid_argument("ElmConfig: bias_range must have lo < hi");
  }
};

struct ElmModel {
  Eigen::MatrixXd input_weights;   // M x d
  Eigen::VectorXd biases;          // M
  Eigen::VectorXd output_weights;  // M, set by train
  ElmConfig::Activation activation = ElmConfig::Activation::sigmoid;
  double training_residual = std::numeric_limits<double>::quiet_NaN();  // ||H*beta - T||_2
  std::optional<ScalingParams> scaling;  // carried so a saved model can forecast stand-alone

  bool trained() const { return output_weights.size() > 0; }
};

/// Weights then biases, uniform over their configured ranges, from a seeded
/// stream. Same seed, same matrices.
inline std::pair<Eigen::MatrixXd, Eigen::VectorXd> init_random(const ElmConfig& config, int input_dim,
                                                               std::uint64_t seed) {
  config.validate();
  if (input_dim < 1) throw std::invalid_argument("init_random: input_dim must be >= 1");
  RandomStream stream(derive_seed(seed, StreamId::elm_init));
  Eigen::MatrixXd weights(config.hidden_count, input_dim);
  for (Eigen::Index i = 0; i < weights.rows(); ++i)
    for (Eigen::Index j = 0; j < weights.cols(); ++j)
      weights(i, j) = stream.uniform_in(config.weight_range.first, config.weight_range.second);
  Eigen::VectorXd biases(config.hidden_count);
  for (Eigen::Index i = 0; i < biases.size(); ++i)
    biases(i) = stream.uniform_in(config.bias_range.first, config.bias_range.second);
  return {std::move(weights), std::move(biases)};
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// H[j][i] = sigmoid(w_i . x_j + b_i) for sample j, neuron i.
inline Eigen::MatrixXd hidden_matrix(const Eigen::MatrixXd& weights, const Eigen::VectorXd& biases,
                                     const Eigen::MatrixXd& features) {
  if (weights.cols() != features.cols())
    throw std::invalid_argument("hidden_matrix: feature dimension mismatch");
  if (weights.rows() != biases.size())
    throw std::invalid_argument("hidden_matrix: bias count mismatch");
  Eigen::MatrixXd h = features * weights.transpose();
  h.rowwise() += biases.transpose();
  return h.unaryExpr([](double z) { return sigmoid(z); });
}

/// Minimum-norm least-squares output weights via SVD; singular values below
/// max(N, M) * eps * sigma_max count as zero.
inline ElmModel train(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                      const Eigen::MatrixXd& weights, const Eigen::VectorXd& biases) {
  if (features.rows() != targets.size()) throw std::invalid_argument("train: row count mismatch");
  if (features.rows() < 1) throw std::invalid_argument("train: empty training set");
  if (!features.allFinite() || !targets.allFinite())
    throw std::invalid_argument("train: non-finite training data");

  const Eigen::MatrixXd h = hidden_matrix(weights, biases, features);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw std::runtime_error("train: SVD failed");

  const auto& sv = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(h.rows(), h.cols())) *
                        std::numeric_limits<double>::epsilon() * (sv.size() > 0 ? sv(0) : 0.0);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(h.cols());
  double captured = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cutoff || sv(i) <= 0.0) continue;
    const double coeff = svd.matrixU().col(i).dot(targets) / sv(i);
    beta += coeff * svd.matrixV().col(i);
    const double projected = svd.matrixU().col(i).dot(targets);
    captured += projected * projected;
  }

  ElmModel model;
  model.input_weights = weights;
  model.biases = biases;
  model.output_weights = std::move(beta);
  model.training_residual = std::sqrt(std::max(0.0, targets.squaredNorm() - captured));
  return model;
}

inline Eigen::VectorXd predict(const ElmModel& model, const Eigen::MatrixXd& features) {
  if (!model.trained()) throw std::invalid_argument("predict: model is untrained");
  if (features.cols() != model.input_weights.cols())
    throw std::invalid_argument("predict: feature dimension mismatch");
  return hidden_matrix(model.input_weights, model.biases, features) * model.output_weights;
}

// --- model file format: key=value header, then comma-separated weight rows ---

inline std::string serialize_model(const ElmModel& model) {
  std::string out;
  out += "# modecast elm model\n";
  out += "hidden_count=" + format_integer(model.input_weights.rows()) + "\n";
  out += "input_dim=" + format_integer(model.input_weights.cols()) + "\n";
  out += "activation=sigmoid\n";
  out += "trained=" + std::string(model.trained() ? "1" : "0") + "\n";
  if (std::isfinite(model.training_residual))
    out += "training_residual=" + format_real(model.training_residual) + "\n";
  if (model.scaling) {
    out += "scale_min=" + format_real(model.scaling->min) + "\n";
    out += "scale_max=" + format_real(model.scaling->max) + "\n";
  }
  const auto row_csv = [](const auto& row) {
    std::string line;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
      if (j) line += ',';
      line += format_real(row(j));
    }
    return line;
  };
  out += "input_weights:\n";
  for (Eigen::Index i = 0; i < model.input_weights.rows(); ++i)
    out += row_csv(model.input_weights.row(i)) + "\n";
  out += "biases:\n" + row_csv(model.biases) + "\n";
  if (model.trained()) out += "output_weights:\n" + row_csv(model.output_weights) + "\n";
  return out;
}

inline void save_model(const ElmModel& model, const std::filesystem::path& path) {
  write_file(path, serialize_model(model));
}

inline ElmModel load_model(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  ElmModel model;
  long long hidden = -1;
  long long input_dim = -1;
  bool trained_flag = false;
  std::optional<double> scale_min;
  std::optional<double> scale_max;

  std::size_t i = 0;
  const auto fail = [&](const std::string& why) -> std::runtime_error {
    return std::runtime_error("load_model: " + why + " (" + path.string() + ")");
  };
  for (; i < lines.size(); ++i) {
    const auto line = std::string(trim(lines[i]));
    if (line.empty() || line[0] == '#') continue;
    if (line == "input_weights:") break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail("malformed header line '" + line + "'");
    const std::string key = std::string(trim(line.substr(0, eq)));
    const std::string value = std::string(trim(line.substr(eq + 1)));
    if (key == "hidden_count") hidden = parse_integer(value).value_or(-1);
    else if (key == "input_dim") input_dim = parse_integer(value).value_or(-1);
    else if (key == "activation" && value != "sigmoid") throw fail("unknown activation '" + value + "'");
    else if (key == "trained") trained_flag = value == "1";
    else if (key == "training_residual") model.training_residual = parse_real(value).value_or(model.training_residual);
    else if (key == "scale_min") scale_min = parse_real(value);
    else if (key == "scale_max") scale_max = parse_real(value);
  }
  if (hidden < 1 || input_dim < 1) throw fail("missing dimensions");
  if (i >= lines.size()) throw fail("missing input_weights section");
  if (scale_min && scale_max) model.scaling = ScalingParams{*scale_min, *scale_max};

  const auto parse_row = [&](const std::string& line, Eigen::Index expected) {
    const auto cells = split(line, ',');
    if (static_cast<Eigen::Index>(cells.size()) != expected) throw fail("wrong row width");
    Eigen::VectorXd row(expected);
    for (Eigen::Index j = 0; j < expected; ++j) {
      const auto v = parse_real(cells[static_cast<std::size_t>(j)]);
      if (!v) throw fail("unparseable number '" + cells[static_cast<std::size_t>(j)] + "'");
      row(j) = *v;
    }
    return row;
  };

  model.input_weights.resize(hidden, input_dim);
  ++i;  // past "input_weights:"
  for (long long r = 0; r < hidden; ++r, ++i) {
    if (i >= lines.size()) throw fail("truncated input_weights");
    model.input_weights.row(r) = parse_row(lines[i], input_dim).transpose();
  }
  if (i >= lines.size() || trim(lines[i]) != "biases:") throw fail("missing biases section");
  ++i;
  if (i >= lines.size()) throw fail("truncated biases");
  model.biases = parse_row(lines[i], hidden);
  ++i;
  if (trained_flag) {
    if (i >= lines.size() || trim(lines[i]) != "output_weights:") throw fail("missing output_weights section");
    ++i;
    if (i >= lines.size()) throw fail("truncated output_weights");
    model.output_weights = parse_row(lines[i], hidden);
  }
  return model;
}

}  // namespace modecast
