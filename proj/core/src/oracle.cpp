#include "effhmm/oracle.hpp"

#include <cmath>
#include <limits>

#include "effhmm/errors.hpp"

namespace effhmm::oracle {

namespace {

// Compensated running sum.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

void guard(const Model& model, const ObservationSequence& obs) {
  check_alphabet(obs, model.num_symbols());
  const double paths = std::pow(static_cast<double>(model.num_states()), static_cast<double>(obs.size()));
  if (paths > kMaxPaths) {
    throw DegenerateError("oracle enumeration of " + std::to_string(paths) + " paths exceeds the guard");
  }
}

double path_mass(const Model& model, const ObservationSequence& obs, const std::vector<State>& q) {
  double mass = model.initial()[q[0]] * model.emission()(q[0], obs[0]);
  for (std::size_t t = 0; t + 1 < obs.size(); ++t) {
    mass *= model.transition()(q[t], q[t + 1]) * model.emission()(q[t + 1], obs[t + 1]) *
            model.link(q[t], obs[t], obs[t + 1]);
  }
  return mass;
}

// Visits every path in lexicographic order (position 0 most significant).
template <typename Visit>
void for_each_path(std::size_t n, std::size_t T, Visit&& visit) {
  std::vector<State> q(T, 0);
  while (true) {
    visit(q);
    std::size_t pos = T;
    while (pos > 0) {
      --pos;
      if (++q[pos] < n) break;
      q[pos] = 0;
      if (pos == 0) return;
    }
    if (T == 0) return;
  }
}

}  // namespace

double enumerate_likelihood(const Model& model, const ObservationSequence& obs) {
  guard(model, obs);
  KahanSum total;
  for_each_path(model.num_states(), obs.size(),
                [&](const std::vector<State>& q) { total.add(path_mass(model, obs, q)); });
  return total.value();
}

StatePath enumerate_best_path(const Model& model, const ObservationSequence& obs) {
  guard(model, obs);
  double best = -1.0;
  std::vector<State> arg;
  for_each_path(model.num_states(), obs.size(), [&](const std::vector<State>& q) {
    const double mass = path_mass(model, obs, q);
    if (mass > best) {
      best = mass;
      arg = q;
    }
  });
  const double log_p = best > 0.0 ? std::log(best) : -std::numeric_limits<double>::infinity();
  return StatePath{std::move(arg), log_p};
}

Matrix enumerate_posterior_gamma(const Model& model, const ObservationSequence& obs) {
  guard(model, obs);
  const std::size_t T = obs.size();
  const std::size_t N = model.num_states();
  std::vector<KahanSum> cell(T * N);
  KahanSum total;
  for_each_path(N, T, [&](const std::vector<State>& q) {
    const double mass = path_mass(model, obs, q);
    total.add(mass);
    for (std::size_t t = 0; t < T; ++t) cell[t * N + q[t]].add(mass);
  });
  if (!(total.value() > 0.0)) throw DegenerateError("oracle posterior: total path mass is zero");
  Matrix gamma(T, N);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < N; ++i) gamma(t, i) = cell[t * N + i].value() / total.value();
  return gamma;
}

}  // namespace effhmm::oracle
