#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <random>
#include <vector>

#include "effhmm/model.hpp"

namespace effhmm::testing {

// Random strictly positive stochastic rows. Occasional near-zero entries
// keep the fixtures away from the uniform interior.
inline void random_row(std::mt19937_64& rng, std::span<double> row) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double sum = 0.0;
  for (double& x : row) {
    x = u(rng);
    if (u(rng) < 0.1) x *= 1e-3;
    sum += x;
  }
  for (double& x : row) x /= sum;
}

inline Model random_model(std::mt19937_64& rng, std::size_t n, std::size_t m, Variant variant) {
  std::vector<double> pi(n);
  random_row(rng, pi);
  Matrix a(n, n), b(n, m);
  for (std::size_t i = 0; i < n; ++i) random_row(rng, a.row(i));
  for (std::size_t i = 0; i < n; ++i) random_row(rng, b.row(i));
  if (variant == Variant::Standard) return Model::standard(std::move(pi), std::move(a), std::move(b));
  Tensor3 c(n, m, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t h = 0; h < m; ++h) random_row(rng, c.row(i, h));
  return Model(variant, std::move(pi), std::move(a), std::move(b), std::move(c));
}

inline ObservationSequence random_sequence(std::mt19937_64& rng, std::size_t m, std::size_t length) {
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::vector<Symbol> s(length);
  for (auto& x : s) x = pick(rng);
  return ObservationSequence(std::move(s));
}

inline double relative_error(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Uniform model: every row [1/n ...], C rows [1/m ...].
inline Model uniform_model(std::size_t n, std::size_t m) {
  std::vector<double> pi(n, 1.0 / n);
  return Model(Variant::EvidenceFeedForward, pi, Matrix(n, n, 1.0 / n), Matrix(n, m, 1.0 / m),
               Tensor3(n, m, m, 1.0 / m));
}

// Log score of one state path, summed in log space.
inline double path_log_score(const Model& m, const ObservationSequence& o, std::span<const State> q) {
  double s = std::log(m.initial()[q[0]]) + std::log(m.emission()(q[0], o[0]));
  for (std::size_t t = 1; t < o.size(); ++t)
    s += std::log(m.transition()(q[t - 1], q[t])) + std::log(m.link(q[t - 1], o[t - 1], o[t])) +
         std::log(m.emission()(q[t], o[t]));
  return s;
}

}  // namespace effhmm::testing
