#include <doctest.h>

#include <cmath>
#include <random>

#include "effhmm/errors.hpp"
#include "effhmm/inference.hpp"
#include "effhmm/learning.hpp"
#include "support/bridge.hpp"
#include "support/fixtures.hpp"

using namespace effhmm;
using namespace effhmm::testing;

namespace {

void check_close(std::span<const double> got, std::span<const double> want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t k = 0; k < got.size(); ++k) CHECK(std::abs(got[k] - want[k]) < tol);
}

void check_stats_close(const SufficientStats& a, const SufficientStats& b, double tol) {
  check_close(a.expected_initial, b.expected_initial, tol);
  check_close(a.expected_transitions.values(), b.expected_transitions.values(), tol);
  check_close(a.expected_departures, b.expected_departures, tol);
  check_close(a.expected_state_visits, b.expected_state_visits, tol);
  check_close(a.expected_emissions.values(), b.expected_emissions.values(), tol);
  check_close(a.expected_obs_pairs.values(), b.expected_obs_pairs.values(), tol);
  check_close(a.expected_obs_visits.values(), b.expected_obs_visits.values(), tol);
  CHECK(a.sequence_count == b.sequence_count);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

double max_param_diff(const Model& a, const Model& b) {
  return std::max({max_abs_diff(a.initial(), b.initial()),
                   max_abs_diff(a.transition().values(), b.transition().values()),
                   max_abs_diff(a.emission().values(), b.emission().values()),
                   max_abs_diff(a.evidence_link().values(), b.evidence_link().values())});
}

std::vector<ObservationSequence> random_batch(std::mt19937_64& rng, std::size_t m, std::size_t count,
                                              std::size_t min_len, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::vector<ObservationSequence> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_sequence(rng, m, len(rng)));
  return out;
}

}  // namespace

TEST_SUITE("learning") {

TEST_CASE("init_model is deterministic and valid") {
  CHECK(init_model(2, 2, Variant::EvidenceFeedForward, 7) == init_model(2, 2, Variant::EvidenceFeedForward, 7));
  CHECK_FALSE(init_model(2, 2, Variant::EvidenceFeedForward, 7) == init_model(2, 2, Variant::EvidenceFeedForward, 8));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CHECK(validate(init_model(1 + seed % 4, 1 + seed % 5, Variant::EvidenceFeedForward, seed)).ok());
    CHECK(validate(init_model(1 + seed % 4, 1 + seed % 5, Variant::Standard, seed)).ok());
  }
}

TEST_CASE("init_model on the zero-dimensional simplex") {
  const Model m = init_model(1, 1, Variant::EvidenceFeedForward, 99);
  CHECK(m.initial()[0] == 1.0);
  CHECK(m.transition()(0, 0) == 1.0);
  CHECK(m.emission()(0, 0) == 1.0);
  CHECK(m.link(0, 0, 0) == 1.0);
}

TEST_CASE("init_model standard variant has unit link") {
  const Model m = init_model(2, 3, Variant::Standard, 1);
  for (double c : m.evidence_link().values()) CHECK(c == 1.0);
}

TEST_CASE("accumulate_stats with one state gives exact counts") {
  const Model m = init_model(1, 2, Variant::EvidenceFeedForward, 3);
  const auto s = accumulate_stats(m, ObservationSequence{0, 0, 1});
  CHECK(s.expected_obs_pairs(0, 0, 0) == doctest::Approx(1.0));
  CHECK(s.expected_obs_pairs(0, 0, 1) == doctest::Approx(1.0));
  CHECK(s.expected_obs_pairs(0, 1, 0) == 0.0);
  CHECK(s.expected_obs_pairs(0, 1, 1) == 0.0);
  CHECK(s.expected_obs_visits(0, 0) == doctest::Approx(2.0));
  CHECK(s.expected_obs_visits(0, 1) == 0.0);
  CHECK(s.expected_emissions(0, 0) == doctest::Approx(2.0));
  CHECK(s.expected_emissions(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("accumulate_stats for T = 1 has no transitions") {
  std::mt19937_64 rng(1);
  const Model m = random_model(rng, 3, 2, Variant::EvidenceFeedForward);
  const auto s = accumulate_stats(m, ObservationSequence{1});
  for (double x : s.expected_transitions.values()) CHECK(x == 0.0);
  for (double x : s.expected_obs_pairs.values()) CHECK(x == 0.0);
  const auto p = posteriors(m, ObservationSequence{1});
  for (std::size_t i = 0; i < 3; ++i) CHECK(s.expected_initial[i] == p.gamma(0, i));
}

TEST_CASE("accumulate_stats matches path enumeration") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Model m = random_model(rng, 2, 2, Variant::EvidenceFeedForward);
    const auto obs = random_sequence(rng, 2, 5);
    const auto got = accumulate_stats(m, obs);
    check_stats_close(got, enumerated_stats(m, obs), 1e-10);
    // pair counts of state i add up to its visit counts
    for (std::size_t i = 0; i < 2; ++i) {
      double pairs = 0.0, visits = 0.0;
      for (std::size_t h = 0; h < 2; ++h) {
        visits += got.expected_obs_visits(i, h);
        for (std::size_t k = 0; k < 2; ++k) pairs += got.expected_obs_pairs(i, h, k);
      }
      CHECK(std::abs(pairs - visits) < 1e-9);
    }
  }
}

TEST_CASE("merge_stats: identity, commutativity, batch equivalence") {
  std::mt19937_64 rng(23);
  const Model m = random_model(rng, 3, 3, Variant::EvidenceFeedForward);
  const auto o1 = random_sequence(rng, 3, 6);
  const auto o2 = random_sequence(rng, 3, 4);
  const auto s1 = accumulate_stats(m, o1);
  const auto s2 = accumulate_stats(m, o2);

  check_stats_close(merge_stats(s1, SufficientStats::zeros(3, 3)), s1, 0.0 + 1e-300);
  check_stats_close(merge_stats(s1, s2), merge_stats(s2, s1), 1e-15);
  const std::vector<ObservationSequence> batch{o1, o2};
  const auto both = accumulate_stats(m, batch);
  check_stats_close(both, merge_stats(s1, s2), 1e-15);
  CHECK(both.sequence_count == 2);
  CHECK_THROWS_AS(merge_stats(s1, SufficientStats::zeros(2, 3)), DimensionError);
}

TEST_CASE("reestimate with one state is a relative frequency") {
  const Model m = init_model(1, 2, Variant::EvidenceFeedForward, 3);
  const Model r = reestimate(accumulate_stats(m, ObservationSequence{0, 0, 1}), Variant::EvidenceFeedForward, 0.0);
  CHECK(r.link(0, 0, 0) == doctest::Approx(0.5));
  CHECK(r.link(0, 0, 1) == doctest::Approx(0.5));
  CHECK(r.emission()(0, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(r.emission()(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(r.initial()[0] == 1.0);
  // V2 is never followed by anything: uniform row
  CHECK(r.link(0, 1, 0) == 0.5);
  CHECK(r.link(0, 1, 1) == 0.5);
}

TEST_CASE("reestimate turns an empty row uniform") {
  auto s = SufficientStats::zeros(2, 3);
  s.sequence_count = 1;
  s.expected_initial = {1.0, 0.0};
  s.expected_obs_pairs(0, 0, 1) = 2.0;
  const Model r = reestimate(s, Variant::EvidenceFeedForward, 0.0);
  for (std::size_t k = 0; k < 3; ++k) CHECK(r.link(1, 0, k) == 1.0 / 3.0);
  CHECK(r.link(0, 0, 1) == 1.0);
  CHECK(validate(r).ok());
}

TEST_CASE("reestimate smoothing keeps every entry positive") {
  auto s = SufficientStats::zeros(1, 2);
  s.sequence_count = 1;
  s.expected_initial = {1.0};
  s.expected_transitions(0, 0) = 1.0;
  s.expected_emissions(0, 0) = 3.0;
  s.expected_obs_pairs(0, 0, 0) = 2.0;
  const Model r = reestimate(s, Variant::EvidenceFeedForward, 1e-6);
  CHECK(r.emission()(0, 1) > 0.0);
  CHECK(r.emission()(0, 1) == doctest::Approx(1e-6 / (1.0 + 2e-6)));
  CHECK(validate(r).ok());
}

TEST_CASE("reestimate on standard statistics keeps the unit link") {
  std::mt19937_64 rng(4);
  const Model m = random_model(rng, 2, 2, Variant::Standard);
  const Model r = reestimate(accumulate_stats(m, random_sequence(rng, 2, 8)), Variant::Standard, 1e-6);
  CHECK(r.variant() == Variant::Standard);
  CHECK(validate(r).ok());
}

TEST_CASE("one EM step is valid and does not lower the likelihood") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 3, m = 2 + trial % 2;
    const Model model = random_model(rng, n, m, Variant::EvidenceFeedForward);
    const auto batch = random_batch(rng, m, 1 + trial % 4, 1, 8);
    const auto stats = accumulate_stats(model, batch);
    const Model next = reestimate(stats, Variant::EvidenceFeedForward, 0.0);
    CHECK(validate(next).ok());
    CHECK(accumulate_stats(next, batch).log_likelihood >= stats.log_likelihood - 1e-9);
  }
}

TEST_CASE("one-state EM recovers empirical bigram frequencies exactly") {
  const std::vector<ObservationSequence> batch{{0, 1, 1, 2, 0}, {2, 2, 1}};
  TrainConfig cfg;
  cfg.num_states = 1;
  cfg.smoothing = 0.0;
  cfg.max_iterations = 1;
  const auto r = em_train(batch, cfg, init_model(1, 3, Variant::EvidenceFeedForward, 5));
  // emissions: 0 x2, 1 x3, 2 x3 of 8
  CHECK(r.model.emission()(0, 0) == doctest::Approx(2.0 / 8));
  CHECK(r.model.emission()(0, 1) == doctest::Approx(3.0 / 8));
  // bigrams from 1: (1,1),(1,2) ; from 2: (2,0),(2,2),(2,1)
  CHECK(r.model.link(0, 1, 1) == doctest::Approx(0.5));
  CHECK(r.model.link(0, 1, 2) == doctest::Approx(0.5));
  CHECK(r.model.link(0, 2, 0) == doctest::Approx(1.0 / 3));
  CHECK(r.model.link(0, 0, 1) == doctest::Approx(1.0));
}

TEST_CASE("deterministic model of deterministic data is a fixed point") {
  Matrix a(2, 2, 0.0), b(2, 2, 0.0);
  a(0, 1) = a(1, 0) = 1.0;
  b(0, 0) = b(1, 1) = 1.0;
  Tensor3 c(2, 2, 2, 0.5);
  c(0, 0, 0) = 0.0;
  c(0, 0, 1) = 1.0;
  c(1, 1, 0) = 1.0;
  c(1, 1, 1) = 0.0;
  const Model truth(Variant::EvidenceFeedForward, {1.0, 0.0}, a, b, c);
  const std::vector<ObservationSequence> data(5, ObservationSequence{0, 1, 0, 1, 0});

  TrainConfig cfg;
  cfg.smoothing = 0.0;
  const auto r = em_train(data, cfg, truth);
  CHECK(r.report.converged);
  CHECK(r.report.iterations_run == 1);
  CHECK(max_param_diff(r.model, truth) <= 1e-12);
  CHECK(r.report.log_likelihood_history.front() == doctest::Approx(0.0));
}

TEST_CASE("EM log-likelihood history never decreases") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 2;
    const auto batch = random_batch(rng, m, 2 + trial % 5, 2, 12);
    TrainConfig cfg;
    cfg.num_states = 1 + trial % 3;
    cfg.smoothing = 0.0;
    cfg.convergence_threshold = 1e-300;
    cfg.max_iterations = 15;
    cfg.seed = static_cast<std::uint64_t>(trial);
    cfg.variant = trial % 3 == 0 ? Variant::Standard : Variant::EvidenceFeedForward;
    const auto r = em_train(batch, cfg);
    const auto& h = r.report.log_likelihood_history;
    for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] >= h[k - 1] - 1e-9);
  }
}

TEST_CASE("em_train stops on the threshold and is reproducible") {
  std::mt19937_64 rng(41);
  const auto batch = random_batch(rng, 3, 10, 3, 10);
  TrainConfig cfg;
  cfg.seed = 12;
  const auto a = em_train(batch, cfg);
  const auto b = em_train(batch, cfg);
  CHECK(a.model == b.model);
  CHECK(a.report.log_likelihood_history == b.report.log_likelihood_history);
  CHECK(a.report.converged);
  const auto& h = a.report.log_likelihood_history;
  REQUIRE(h.size() >= 2);
  CHECK(h[h.size() - 1] - h[h.size() - 2] < cfg.convergence_threshold);
  CHECK(validate(a.model).ok());

  cfg.max_iterations = 2;
  cfg.convergence_threshold = 1e-300;
  const auto capped = em_train(batch, cfg);
  CHECK(capped.report.iterations_run == 2);
  CHECK(capped.report.log_likelihood_history.size() == 3);
}

TEST_CASE("em_train input errors") {
  TrainConfig cfg;
  CHECK_THROWS_AS(em_train(std::vector<ObservationSequence>{}, cfg), DataError);
  cfg.convergence_threshold = 0.0;
  CHECK_THROWS_AS(em_train(std::vector<ObservationSequence>{{0, 1}}, cfg), DataError);
  cfg = TrainConfig{};
  cfg.smoothing = 0.01;
  CHECK_THROWS_AS(cfg.check(), DataError);
  cfg = TrainConfig{};
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.check(), DataError);
}

TEST_CASE("standard-variant EM follows textbook Baum-Welch") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3, m = 2 + trial % 2;
    const Model init = random_model(rng, n, m, Variant::Standard);
    const auto batch = random_batch(rng, m, 3, 2, 8);
    std::vector<std::vector<int>> ints;
    for (const auto& o : batch) ints.push_back(to_ints(o));

    auto ref = to_textbook(init);
    Model model = init;
    for (int iter = 0; iter < 5; ++iter) {
      model = reestimate(accumulate_stats(model, batch), Variant::Standard, 0.0);
      ref = textbook::baum_welch_step(ref, ints);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(model.initial()[i] - ref.pi[i]) < 1e-10);
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(model.transition()(i, j) - ref.a[i][j]) < 1e-10);
        for (std::size_t k = 0; k < m; ++k) CHECK(std::abs(model.emission()(i, k) - ref.b[i][k]) < 1e-10);
      }
    }
  }
}

}
