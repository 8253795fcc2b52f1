#include "effhmm/learning.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "effhmm/errors.hpp"
#include "effhmm/inference.hpp"
#include "effhmm/random.hpp"

namespace effhmm {

void TrainConfig::check() const {
  if (num_states < 1) throw DataError("number of states must be at least 1");
  if (!(convergence_threshold > 0.0)) throw DataError("convergence threshold must be positive");
  if (max_iterations < 1) throw DataError("max iterations must be at least 1");
  if (!(smoothing >= 0.0 && smoothing <= 1e-3)) throw DataError("smoothing must lie in [0, 1e-3]");
}

SufficientStats SufficientStats::zeros(std::size_t n, std::size_t m) {
  return SufficientStats{std::vector<double>(n, 0.0),
                         Matrix(n, n),
                         std::vector<double>(n, 0.0),
                         std::vector<double>(n, 0.0),
                         Matrix(n, m),
                         Tensor3(n, m, m),
                         Matrix(n, m),
                         0,
                         0.0};
}

namespace {

void random_simplex(Rng& rng, std::span<double> row) {
  double sum = 0.0;
  for (double& x : row) {
    x = rng.uniform();
    sum += x;
  }
  for (double& x : row) x /= sum;
}

// Writes the smoothed, exactly renormalized version of `counts` into `out`.
void normalize_row(std::span<const double> counts, std::span<double> out, double smoothing) {
  const std::size_t n = counts.size();
  double sum = 0.0;
  for (double c : counts) sum += c;
  if (!(sum > 0.0)) {
    for (double& x : out) x = 1.0 / static_cast<double>(n);
    return;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = counts[k] / sum + smoothing;
    total += out[k];
  }
  for (double& x : out) x /= total;
}

void add_into(std::span<double> dst, std::span<const double> src) {
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
}

}  // namespace

Model init_model(std::size_t n, std::size_t m, Variant variant, std::uint64_t seed) {
  if (n < 1 || m < 1) throw DataError("init_model needs at least one state and one symbol");
  Rng rng(seed);
  std::vector<double> pi(n);
  random_simplex(rng, pi);
  Matrix a(n, n), b(n, m);
  for (std::size_t i = 0; i < n; ++i) random_simplex(rng, a.row(i));
  for (std::size_t i = 0; i < n; ++i) random_simplex(rng, b.row(i));
  if (variant == Variant::Standard) return Model::standard(std::move(pi), std::move(a), std::move(b));
  Tensor3 c(n, m, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t h = 0; h < m; ++h) random_simplex(rng, c.row(i, h));
  return Model(variant, std::move(pi), std::move(a), std::move(b), std::move(c));
}

SufficientStats accumulate_stats(const Model& model, const ObservationSequence& obs) {
  const PosteriorStats post = posteriors(model, obs);
  const std::size_t T = obs.size();
  const std::size_t N = model.num_states();
  SufficientStats s = SufficientStats::zeros(N, model.num_symbols());
  s.sequence_count = 1;
  s.log_likelihood = post.log_likelihood;

  for (std::size_t i = 0; i < N; ++i) s.expected_initial[i] = post.gamma(0, i);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < N; ++i) {
      const double g = post.gamma(t, i);
      s.expected_state_visits[i] += g;
      s.expected_emissions(i, obs[t]) += g;
      if (t + 1 < T) {
        s.expected_departures[i] += g;
        s.expected_obs_visits(i, obs[t]) += g;
        s.expected_obs_pairs(i, obs[t], obs[t + 1]) += g;
        for (std::size_t j = 0; j < N; ++j) s.expected_transitions(i, j) += post.xi(t, i, j);
      }
    }
  }
  return s;
}

SufficientStats accumulate_stats(const Model& model, std::span<const ObservationSequence> batch) {
  SufficientStats total = SufficientStats::zeros(model.num_states(), model.num_symbols());
  for (const auto& obs : batch) total = merge_stats(total, accumulate_stats(model, obs));
  return total;
}

SufficientStats merge_stats(const SufficientStats& a, const SufficientStats& b) {
  if (a.num_states() != b.num_states() || a.num_symbols() != b.num_symbols()) {
    throw DimensionError("cannot merge statistics of different shapes");
  }
  SufficientStats out = a;
  add_into(out.expected_initial, b.expected_initial);
  add_into(out.expected_transitions.values(), b.expected_transitions.values());
  add_into(out.expected_departures, b.expected_departures);
  add_into(out.expected_state_visits, b.expected_state_visits);
  add_into(out.expected_emissions.values(), b.expected_emissions.values());
  add_into(out.expected_obs_pairs.values(), b.expected_obs_pairs.values());
  add_into(out.expected_obs_visits.values(), b.expected_obs_visits.values());
  out.sequence_count += b.sequence_count;
  out.log_likelihood += b.log_likelihood;
  return out;
}

Model reestimate(const SufficientStats& stats, Variant variant, double smoothing) {
  if (stats.sequence_count == 0) throw DataError("re-estimation needs statistics from at least one sequence");
  const std::size_t n = stats.num_states();
  const std::size_t m = stats.num_symbols();

  std::vector<double> pi(n);
  normalize_row(stats.expected_initial, pi, smoothing);
  Matrix a(n, n), b(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    normalize_row(stats.expected_transitions.row(i), a.row(i), smoothing);
    normalize_row(stats.expected_emissions.row(i), b.row(i), smoothing);
  }
  if (variant == Variant::Standard) return Model::standard(std::move(pi), std::move(a), std::move(b));

  // The pair counts of row (i, h) sum to expected_obs_visits(i, h); dividing
  // by the row's own sum keeps the output exactly stochastic.
  Tensor3 c(n, m, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t h = 0; h < m; ++h)
      normalize_row(stats.expected_obs_pairs.row(i, h), c.row(i, h), smoothing);
  return Model(variant, std::move(pi), std::move(a), std::move(b), std::move(c));
}

double mean_log_likelihood(const Model& model, std::span<const ObservationSequence> batch) {
  if (batch.empty()) throw DataError("mean log-likelihood of an empty batch");
  double total = 0.0;
  for (const auto& obs : batch) total += forward(model, obs).log_likelihood;
  return total / static_cast<double>(batch.size());
}

TrainResult em_train(std::span<const ObservationSequence> sequences, const TrainConfig& config) {
  config.check();
  if (sequences.empty()) throw DataError("training needs at least one sequence");
  std::size_t m = 0;
  for (const auto& obs : sequences) {
    if (obs.empty()) throw DataError("training sequence is empty");
    for (Symbol s : obs) m = std::max(m, s + 1);
  }
  return em_train(sequences, config, init_model(config.num_states, m, config.variant, config.seed));
}

TrainResult em_train(std::span<const ObservationSequence> sequences, const TrainConfig& config,
                     Model initial) {
  config.check();
  if (sequences.empty()) throw DataError("training needs at least one sequence");
  for (const auto& obs : sequences) check_alphabet(obs, initial.num_symbols());

  const auto count = static_cast<double>(sequences.size());
  const Variant variant = initial.variant();
  TrainResult result{std::move(initial), {}};
  auto& report = result.report;

  SufficientStats stats = accumulate_stats(result.model, sequences);
  double previous = stats.log_likelihood / count;
  report.log_likelihood_history.push_back(previous);

  for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
    Model next = reestimate(stats, variant, config.smoothing);
    stats = accumulate_stats(next, sequences);
    const double current = stats.log_likelihood / count;
    report.log_likelihood_history.push_back(current);
    result.model = std::move(next);
    report.iterations_run = iter;
    if (!(current - previous >= config.convergence_threshold)) {
      report.converged = true;
      break;
    }
    previous = current;
  }
  return result;
}

}  // namespace effhmm
