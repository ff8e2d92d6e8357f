#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modecast/elm.hpp"
#include "modecast/metrics.hpp"
#include "modecast/rng.hpp"

// Particle swarm optimizer with an optional chaotic initializer: instead of
// i.i.d. uniform starting positions, each dimension runs a tent-map orbit
// perturbed by Beta noise, which spreads the initial population more evenly
// across the box. Initialization is the ONLY difference between the two
// schemes; the step update is shared.

namespace modecast {

struct ChaosConfig {
  double chaos_coefficient = 2.0;  // tent slope
  double shrink_factor = 0.1;      // weight of the Beta perturbation
  double beta_a = 3.0;
  double beta_b = 4.0;

  void validate() const {
    if (!(chaos_coefficient > 0.0))
      throw std::invalid_argument("ChaosConfig: chaos_coefficient must be > 0");
    if (shrink_factor < 0.0) throw std::invalid_argument("ChaosConfig: shrink_factor must be >= 0");
    if (!(beta_a > 0.0) || !(beta_b > 0.0))
      throw std::invalid_argument("ChaosConfig: beta shape parameters must be > 0");
  }
};

struct PsoConfig {
  int population = 30;
  int iterations = 100;
  double cognitive = 1.5;  // pull toward the particle's own best
  double social = 1.5;     // pull toward the swarm best
  double inertia = 0.8;
  std::vector<double> bounds_low;
  std::vector<double> bounds_high;
  double velocity_clamp_fraction = 0.5;  // v_max = fraction * (high - low), per dimension
  enum class InitMode { uniform_random, tent_chaos } init_mode = InitMode::tent_chaos;

  /// Everything except the bounds, which some callers fill in just before
  /// the search once the problem dimension is known.
  void validate_scalars() const {
    if (population < 2) throw std::invalid_argument("PsoConfig: population must be >= 2");
    if (iterations < 1) throw std::invalid_argument("PsoConfig: iterations must be >= 1");
    if (!(inertia >= 0.0) || !(cognitive >= 0.0) || !(social >= 0.0))
      throw std::invalid_argument("PsoConfig: coefficients must be non-negative");
    if (!(velocity_clamp_fraction > 0.0) || velocity_clamp_fraction > 1.0)
      throw std::invalid_argument("PsoConfig: velocity_clamp_fraction must be in (0, 1]");
  }

  void validate() const {
    validate_scalars();
    if (bounds_low.empty() || bounds_low.size() != bounds_high.size())
      throw std::invalid_argument("PsoConfig: bounds must be non-empty and of equal length");
    for (std::size_t j = 0; j < bounds_low.size(); ++j) {
      if (!std::isfinite(bounds_low[j]) || !std::isfinite(bounds_high[j]) ||
          !(bounds_low[j] < bounds_high[j]))
        throw std::invalid_argument("PsoConfig: bounds must be finite with low < high");
    }
  }

  int dimension() const { return static_cast<int>(bounds_low.size()); }
};

/// One Beta(m, n) draw on [0,1].
inline double beta_sample(double m, double n, RandomStream& rng) { return rng.beta(m, n); }

/// One step of the perturbed tent map on [0,1): stretch the current value
/// away from 0.5, add Beta-distributed noise, wrap back into the unit
/// interval.
inline double tent_next(double y, const ChaosConfig& chaos, RandomStream& rng) {
  const double kick = chaos.shrink_factor * beta_sample(chaos.beta_a, chaos.beta_b, rng);
  const double raw = (y < 0.5) ? chaos.chaos_coefficient * y + kick
                               : chaos.chaos_coefficient * (1.0 - y) + kick;
  return raw - std::floor(raw);
}

/// Initial positions from per-dimension tent-map orbits mapped into the
/// bounds: chain j starts at a random point in (0,1) and contributes the
/// j-th coordinate of every particle.
inline Eigen::MatrixXd tent_init(int population, const PsoConfig& config, const ChaosConfig& chaos,
                                 std::uint64_t seed) {
  chaos.validate();
  if (population < 1) throw std::invalid_argument("tent_init: population must be >= 1");
  const auto dim_count = static_cast<Eigen::Index>(config.bounds_low.size());
  Eigen::MatrixXd positions(population, dim_count);
  for (Eigen::Index d = 0; d < dim_count; ++d) {
    RandomStream start(derive_seed(seed, StreamId::pso_init, static_cast<std::uint64_t>(d)));
    RandomStream noise(derive_seed(seed, StreamId::chaos_beta, static_cast<std::uint64_t>(d)));
    double y = 0.0;
    do {
      y = start.uniform();
    } while (y <= 0.0);
    const double lo = config.bounds_low[static_cast<std::size_t>(d)];
    const double hi = config.bounds_high[static_cast<std::size_t>(d)];
    for (int p = 0; p < population; ++p) {
      y = tent_next(y, chaos, noise);
      positions(p, d) = lo + y * (hi - lo);
    }
  }
  return positions;
}

/// Plain i.i.d. uniform initial positions (dimension-major draw order, so the
/// two initializers consume seeds the same way).
inline Eigen::MatrixXd uniform_init(int population, const PsoConfig& config, std::uint64_t seed) {
  if (population < 1) throw std::invalid_argument("uniform_init: population must be >= 1");
  const auto dim_count = static_cast<Eigen::Index>(config.bounds_low.size());
  Eigen::MatrixXd positions(population, dim_count);
  for (Eigen::Index d = 0; d < dim_count; ++d) {
    RandomStream draw(derive_seed(seed, StreamId::pso_init, static_cast<std::uint64_t>(d)));
    const double lo = config.bounds_low[static_cast<std::size_t>(d)];
    const double hi = config.bounds_high[static_cast<std::size_t>(d)];
    for (int p = 0; p < population; ++p) positions(p, d) = draw.uniform_in(lo, hi);
  }
  return positions;
}

struct Swarm {
  Eigen::MatrixXd positions;        // population x dim
  Eigen::MatrixXd velocities;       // population x dim
  Eigen::MatrixXd pbest_positions;  // population x dim
  Eigen::VectorXd pbest_values;     // population
  Eigen::VectorXd gbest_position;   // dim
  double gbest_value = std::numeric_limits<double>::infinity();
  std::vector<double> history;  // swarm-best fitness appended after every step
  int non_finite_warnings = 0;  // fitness evaluations that returned a non-finite value
  std::vector<RandomStream> step_streams;  // one per particle
};

template <typename Fitness>
Swarm init_swarm(Fitness&& fitness, const PsoConfig& config, const ChaosConfig& chaos, std::uint64_t seed) {
  config.validate();
  Swarm swarm;
  swarm.positions = (config.init_mode == PsoConfig::InitMode::tent_chaos)
                        ? tent_init(config.population, config, chaos, seed)
                        : uniform_init(config.population, config, seed);
  swarm.velocities = Eigen::MatrixXd::Zero(swarm.positions.rows(), swarm.positions.cols());
  swarm.pbest_positions = swarm.positions;
  swarm.pbest_values.resize(config.population);
  for (int p = 0; p < config.population; ++p) {
    double value = fitness(Eigen::VectorXd(swarm.positions.row(p).transpose()));
    if (!std::isfinite(value)) {
      value = std::numeric_limits<double>::infinity();
      ++swarm.non_finite_warnings;
    }
    swarm.pbest_values(p) = value;
    if (value < swarm.gbest_value) {
      swarm.gbest_value = value;
      swarm.gbest_position = swarm.positions.row(p).transpose();
    }
  }
  if (!(swarm.gbest_value < std::numeric_limits<double>::infinity()))
    throw std::runtime_error("init_swarm: no particle produced a finite fitness");
  swarm.step_streams.reserve(static_cast<std::size_t>(config.population));
  for (int p = 0; p < config.population; ++p)
    swarm.step_streams.emplace_back(derive_seed(seed, StreamId::pso_step, static_cast<std::uint64_t>(p)));
  return swarm;
}

/// One synchronous sweep with caller-supplied randomness: uniform_fn(p, d,
/// which) supplies r1 (which = 0) and r2 (which = 1) for particle p,
/// dimension d. All particles move against the current swarm best, then
/// bests are refreshed and the swarm best is appended to the history.
/// A non-finite fitness value counts as +inf: the particle keeps its new
/// position but its bests stay put, and a warning is tallied.
template <typename Fitness, typename UniformFn>
void step_with(Swarm& swarm, Fitness&& fitness, const PsoConfig& config, UniformFn&& uniform_fn) {
  const auto population = swarm.positions.rows();
  const auto dim_count = swarm.positions.cols();
  for (Eigen::Index p = 0; p < population; ++p) {
    for (Eigen::Index d = 0; d < dim_count; ++d) {
      const double lo = config.bounds_low[static_cast<std::size_t>(d)];
      const double hi = config.bounds_high[static_cast<std::size_t>(d)];
      const double v_max = config.velocity_clamp_fraction * (hi - lo);
      const double r1 = uniform_fn(p, d, 0);
      const double r2 = uniform_fn(p, d, 1);
      const double x = swarm.positions(p, d);
      double v = config.inertia * swarm.velocities(p, d) +
                 config.cognitive * r1 * (swarm.pbest_positions(p, d) - x) +
                 config.social * r2 * (swarm.gbest_position(d) - x);
      v = std::clamp(v, -v_max, v_max);
      swarm.velocities(p, d) = v;
      swarm.positions(p, d) = std::clamp(x + v, lo, hi);
    }
  }
  for (Eigen::Index p = 0; p < population; ++p) {
    double value = fitness(Eigen::VectorXd(swarm.positions.row(p).transpose()));
    if (!std::isfinite(value)) {
      value = std::numeric_limits<double>::infinity();
      ++swarm.non_finite_warnings;
      continue;
    }
    if (value < swarm.pbest_values(p)) {
      swarm.pbest_values(p) = value;
      swarm.pbest_positions.row(p) = swarm.positions.row(p);
    }
    if (value < swarm.gbest_value) {
      swarm.gbest_value = value;
      swarm.gbest_position = swarm.positions.row(p).transpose();
    }
  }
  swarm.history.push_back(swarm.gbest_value);
}

/// One sweep drawing r1/r2 from each particle's own stream (two draws per
/// dimension, r1 before r2).
template <typename Fitness>
void step(Swarm& swarm, Fitness&& fitness, const PsoConfig& config) {
  auto from_streams = [&swarm](Eigen::Index p, Eigen::Index, int) {
    return swarm.step_streams[static_cast<std::size_t>(p)].uniform();
  };
  step_with(swarm, fitness, config, from_streams);
}

struct PsoResult {
  Eigen::VectorXd best_position;
  double best_fitness = std::numeric_limits<double>::infinity();
  std::vector<double> history;  // swarm-best fitness after each iteration
  int non_finite_warnings = 0;
};

template <typename Fitness>
PsoResult optimize(Fitness&& fitness, const PsoConfig& config, const ChaosConfig& chaos, std::uint64_t seed) {
  Swarm swarm = init_swarm(fitness, config, chaos, seed);
  for (int it = 0; it < config.iterations; ++it) step(swarm, fitness, config);
  PsoResult result;
  result.best_position = swarm.gbest_position;
  result.best_fitness = swarm.gbest_value;
  result.history = std::move(swarm.history);
  result.non_finite_warnings = swarm.non_finite_warnings;
  return result;
}

// --- coupling to the regression model: the swarm searches over the hidden
// layer's input weights and biases, flattened row-major ---

inline void elm_search_bounds(const ElmConfig& elm, int input_dim, PsoConfig& pso) {
  elm.validate();
  if (input_dim < 1) throw std::invalid_argument("elm_search_bounds: input_dim must be >= 1");
  const std::size_t weight_count =
      static_cast<std::size_t>(elm.hidden_count) * static_cast<std::size_t>(input_dim);
  const std::size_t total = weight_count + static_cast<std::size_t>(elm.hidden_count);
  pso.bounds_low.assign(total, elm.weight_range.first);
  pso.bounds_high.assign(total, elm.weight_range.second);
  for (std::size_t i = weight_count; i < total; ++i) {
    pso.bounds_low[i] = elm.bias_range.first;
    pso.bounds_high[i] = elm.bias_range.second;
  }
}

inline Eigen::VectorXd encode_elm(const Eigen::MatrixXd& weights, const Eigen::VectorXd& biases) {
  Eigen::VectorXd flat(weights.size() + biases.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < weights.rows(); ++i)
    for (Eigen::Index j = 0; j < weights.cols(); ++j) flat(k++) = weights(i, j);
  for (Eigen::Index i = 0; i < biases.size(); ++i) flat(k++) = biases(i);
  return flat;
}

inline std::pair<Eigen::MatrixXd, Eigen::VectorXd> decode_elm(const Eigen::VectorXd& flat, int hidden_count,
                                                              int input_dim) {
  if (flat.size() != static_cast<Eigen::Index>(hidden_count) * (input_dim + 1))
    throw std::invalid_argument("decode_elm: flat vector has wrong length");
  Eigen::MatrixXd weights(hidden_count, input_dim);
  Eigen::Index k = 0;
  for (int i = 0; i < hidden_count; ++i)
    for (int j = 0; j < input_dim; ++j) weights(i, j) = flat(k++);
  Eigen::VectorXd biases(hidden_count);
  for (int i = 0; i < hidden_count; ++i) biases(i) = flat(k++);
  return {std::move(weights), std::move(biases)};
}

/// Fitness of a candidate hidden layer: fit output weights on the training
/// rows, score mean absolute percentage error on the held-out validation
/// rows. When scaling params are given, predictions and targets are mapped
/// back to original units first, so the score is a percentage of real load.
struct ElmFitness {
  const Eigen::MatrixXd& train_features;
  const Eigen::VectorXd& train_targets;
  const Eigen::MatrixXd& validation_features;
  const Eigen::VectorXd& validation_targets;
  int hidden_count;
  std::optional<ScalingParams> scaling;

  double operator()(const Eigen::VectorXd& flat) const {
    auto [weights, biases] = decode_elm(flat, hidden_count, static_cast<int>(train_features.cols()));
    const ElmModel model = train(train_features, train_targets, weights, biases);
    Eigen::VectorXd predicted = predict(model, validation_features);
    Eigen::VectorXd actual = validation_targets;
    if (scaling) {
      for (Eigen::Index i = 0; i < predicted.size(); ++i) predicted(i) = minmax_invert(predicted(i), *scaling);
      for (Eigen::Index i = 0; i < actual.size(); ++i) actual(i) = minmax_invert(actual(i), *scaling);
    }
    return mape(std::span<const double>(actual.data(), static_cast<std::size_t>(actual.size())),
                std::span<const double>(predicted.data(), static_cast<std::size_t>(predicted.size())));
  }
};

}  // namespace modecast
