#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "effhmm/dense.hpp"
#include "effhmm/model.hpp"

namespace effhmm {

struct TrainConfig {
  std::size_t num_states = 3;
  // Training stops once the mean per-sequence log-likelihood improves by
  // less than this between iterations.
  double convergence_threshold = 0.01;
  std::size_t max_iterations = 500;
  // Added to every re-estimated probability before renormalizing.
  double smoothing = 1e-6;
  std::uint64_t seed = 0;
  Variant variant = Variant::EvidenceFeedForward;

  // Throws DataError on out-of-range settings.
  void check() const;
};

struct TrainReport {
  // Mean per-sequence log-likelihood of the initial model followed by one
  // entry per re-estimation step.
  std::vector<double> log_likelihood_history;
  std::size_t iterations_run = 0;
  bool converged = false;
};

// Expected counts gathered from the posteriors of one or more sequences.
struct SufficientStats {
  std::vector<double> expected_initial;        // sum_seq gamma_i(1)
  Matrix expected_transitions;                 // sum_seq sum_{t<T} xi_ij(t)
  std::vector<double> expected_departures;     // sum_seq sum_{t<T} gamma_i(t)
  std::vector<double> expected_state_visits;   // sum_seq sum_t gamma_i(t)
  Matrix expected_emissions;                   // (i, k): sum gamma_i(t) [O_t = k]
  Tensor3 expected_obs_pairs;                  // (i, h, k): sum_{t<T} gamma_i(t) [O_t = h, O_{t+1} = k]
  Matrix expected_obs_visits;                  // (i, h): sum_{t<T} gamma_i(t) [O_t = h]
  std::size_t sequence_count = 0;
  double log_likelihood = 0.0;                 // sum of per-sequence log-likelihoods

  static SufficientStats zeros(std::size_t num_states, std::size_t num_symbols);
  std::size_t num_states() const { return expected_initial.size(); }
  std::size_t num_symbols() const { return expected_emissions.cols(); }
};

// Random point of each probability simplex (pi, each row of A, B and, for
// the eff variant, C). Deterministic in the seed; Standard sets C to 1.
Model init_model(std::size_t num_states, std::size_t num_symbols, Variant variant,
                 std::uint64_t seed);

SufficientStats accumulate_stats(const Model& model, const ObservationSequence& obs);
// Per-sequence stats merged in input order.
SufficientStats accumulate_stats(const Model& model, std::span<const ObservationSequence> batch);

// Componentwise sum; throws DimensionError on mismatched shapes.
SufficientStats merge_stats(const SufficientStats& a, const SufficientStats& b);

// Ratio-of-sums re-estimation of (pi, A, B, C). Every row is then smoothed
// by `smoothing` and divided by its own sum; rows without mass become
// uniform. Standard keeps C at 1.
Model reestimate(const SufficientStats& stats, Variant variant, double smoothing);

struct TrainResult {
  Model model;
  TrainReport report;
};

double mean_log_likelihood(const Model& model, std::span<const ObservationSequence> batch);

TrainResult em_train(std::span<const ObservationSequence> sequences, const TrainConfig& config);
// Same loop started from a caller-supplied model; config.num_states, seed and
// variant are ignored in favour of the model's own.
TrainResult em_train(std::span<const ObservationSequence> sequences, const TrainConfig& config,
                     Model initial);

}  // namespace effhmm
