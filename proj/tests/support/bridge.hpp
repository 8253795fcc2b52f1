#pragma once

// Conversions between effhmm types and the test-only references, plus
// unscaled EFF recursions and path-enumerated expected counts.

#include <vector>

#include "effhmm/learning.hpp"
#include "effhmm/model.hpp"
#include "textbook_hmm.hpp"

namespace effhmm::testing {

inline textbook::Hmm to_textbook(const Model& m) {
  textbook::Hmm h;
  h.pi.assign(m.initial().begin(), m.initial().end());
  for (std::size_t i = 0; i < m.num_states(); ++i) {
    h.a.emplace_back(m.transition().row(i).begin(), m.transition().row(i).end());
    h.b.emplace_back(m.emission().row(i).begin(), m.emission().row(i).end());
  }
  return h;
}

inline std::vector<int> to_ints(const ObservationSequence& o) {
  return std::vector<int>(o.begin(), o.end());
}

// Unscaled alpha and beta of the EFF recursion.
struct Unscaled {
  textbook::Mat alpha;
  textbook::Mat beta;
  double likelihood = 0.0;
};

inline Unscaled unscaled_eff(const Model& m, const ObservationSequence& o) {
  const std::size_t n = m.num_states(), T = o.size();
  Unscaled u{textbook::Mat(T, textbook::Vec(n, 0.0)), textbook::Mat(T, textbook::Vec(n, 1.0)), 0.0};
  for (std::size_t i = 0; i < n; ++i) u.alpha[0][i] = m.initial()[i] * m.emission()(i, o[0]);
  for (std::size_t t = 1; t < T; ++t)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += u.alpha[t - 1][i] * m.transition()(i, j) * m.link(i, o[t - 1], o[t]);
      u.alpha[t][j] = s * m.emission()(j, o[t]);
    }
  for (std::size_t t = T - 1; t-- > 0;)
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m.transition()(i, j) * m.emission()(j, o[t + 1]) * u.beta[t + 1][j];
      u.beta[t][i] = s * m.link(i, o[t], o[t + 1]);
    }
  for (double x : u.alpha.back()) u.likelihood += x;
  return u;
}

// Expected counts by explicit enumeration of every state path.
inline SufficientStats enumerated_stats(const Model& m, const ObservationSequence& o) {
  const std::size_t n = m.num_states(), T = o.size();
  SufficientStats s = SufficientStats::zeros(n, m.num_symbols());
  s.sequence_count = 1;
  std::vector<State> q(T, 0);
  double total = 0.0;
  std::vector<std::pair<std::vector<State>, double>> paths;
  while (true) {
    double mass = m.initial()[q[0]] * m.emission()(q[0], o[0]);
    for (std::size_t t = 0; t + 1 < T; ++t)
      mass *= m.transition()(q[t], q[t + 1]) * m.emission()(q[t + 1], o[t + 1]) * m.link(q[t], o[t], o[t + 1]);
    paths.emplace_back(q, mass);
    total += mass;
    std::size_t pos = T;
    bool done = true;
    while (pos-- > 0) {
      if (++q[pos] < n) {
        done = false;
        break;
      }
      q[pos] = 0;
    }
    if (done) break;
  }
  for (const auto& [path, mass] : paths) {
    const double w = mass / total;
    s.expected_initial[path[0]] += w;
    for (std::size_t t = 0; t < T; ++t) {
      s.expected_state_visits[path[t]] += w;
      s.expected_emissions(path[t], o[t]) += w;
      if (t + 1 < T) {
        s.expected_departures[path[t]] += w;
        s.expected_transitions(path[t], path[t + 1]) += w;
        s.expected_obs_visits(path[t], o[t]) += w;
        s.expected_obs_pairs(path[t], o[t], o[t + 1]) += w;
      }
    }
  }
  s.log_likelihood = std::log(total);
  return s;
}

}  // namespace effhmm::testing
