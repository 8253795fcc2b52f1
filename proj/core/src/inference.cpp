#include "effhmm/inference.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "effhmm/errors.hpp"

namespace effhmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : -kInf; }

}  // namespace

bool TrellisResult::impossible() const { return std::isinf(log_likelihood) && log_likelihood < 0; }

TrellisResult forward(const Model& model, const ObservationSequence& obs) {
  check_alphabet(obs, model.num_symbols());
  const std::size_t T = obs.size();
  const std::size_t N = model.num_states();
  const auto& A = model.transition();
  const auto& B = model.emission();

  TrellisResult out{Matrix(T, N), std::vector<double>(T, kInf), 0.0};
  auto& alpha = out.alpha_hat;

  // Normalizes row t in place; false if the row has no mass.
  auto rescale = [&](std::size_t t) {
    double norm = 0.0;
    for (std::size_t i = 0; i < N; ++i) norm += alpha(t, i);
    if (!(norm > 0.0)) {
      for (std::size_t i = 0; i < N; ++i) alpha(t, i) = 0.0;
      return false;
    }
    const double s = 1.0 / norm;
    for (std::size_t i = 0; i < N; ++i) alpha(t, i) *= s;
    out.scaling[t] = s;
    out.log_likelihood += std::log(norm);
    return true;
  };

  for (std::size_t i = 0; i < N; ++i) alpha(0, i) = model.initial()[i] * B(i, obs[0]);
  if (!rescale(0)) {
    out.log_likelihood = -kInf;
    return out;
  }

  for (std::size_t t = 1; t < T; ++t) {
    const Symbol prev = obs[t - 1];
    const Symbol cur = obs[t];
    for (std::size_t j = 0; j < N; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        acc += alpha(t - 1, i) * A(i, j) * model.link(i, prev, cur);
      }
      alpha(t, j) = acc * B(j, cur);
    }
    if (!rescale(t)) {
      out.log_likelihood = -kInf;
      return out;
    }
  }
  return out;
}

BackwardResult backward(const Model& model, const ObservationSequence& obs,
                        const TrellisResult& trellis) {
  check_alphabet(obs, model.num_symbols());
  const std::size_t T = obs.size();
  const std::size_t N = model.num_states();
  if (trellis.alpha_hat.rows() != T || trellis.alpha_hat.cols() != N) {
    throw DimensionError("trellis does not match the model and sequence");
  }
  const auto& A = model.transition();
  const auto& B = model.emission();

  BackwardResult out{Matrix(T, N, 0.0)};
  auto& beta = out.beta_hat;
  for (std::size_t i = 0; i < N; ++i) beta(T - 1, i) = 1.0;

  std::vector<double> row(N);
  for (std::size_t t = T - 1; t-- > 0;) {
    const Symbol cur = obs[t];
    const Symbol next = obs[t + 1];
    double row_sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < N; ++j) acc += A(i, j) * B(j, next) * beta(t + 1, j);
      row[i] = acc * model.link(i, cur, next);
      row_sum += row[i];
    }
    double factor = trellis.scaling[t + 1];
    if (!std::isfinite(factor)) factor = row_sum > 0.0 ? 1.0 / row_sum : 1.0;
    for (std::size_t i = 0; i < N; ++i) beta(t, i) = row[i] * factor;
  }
  return out;
}

BackwardResult backward(const Model& model, const ObservationSequence& obs) {
  return backward(model, obs, forward(model, obs));
}

double backward_log_likelihood(const Model& model, const ObservationSequence& obs,
                               const TrellisResult& trellis, const BackwardResult& beta) {
  if (trellis.impossible()) return -kInf;
  double v = 0.0;
  for (std::size_t i = 0; i < model.num_states(); ++i) {
    v += model.initial()[i] * model.emission()(i, obs[0]) * beta.beta_hat(0, i);
  }
  double ll = safe_log(v);
  for (std::size_t t = 1; t < obs.size(); ++t) ll -= std::log(trellis.scaling[t]);
  return ll;
}

PosteriorStats posteriors(const Model& model, const ObservationSequence& obs) {
  const TrellisResult trellis = forward(model, obs);
  if (trellis.impossible()) throw DegenerateError("degenerate posterior: sequence has zero likelihood");
  const BackwardResult bwd = backward(model, obs, trellis);

  const std::size_t T = obs.size();
  const std::size_t N = model.num_states();
  const auto& A = model.transition();
  const auto& B = model.emission();
  const auto& alpha = trellis.alpha_hat;
  const auto& beta = bwd.beta_hat;

  PosteriorStats out{Matrix(T, N), Tensor3(T > 0 ? T - 1 : 0, N, N), trellis.log_likelihood};

  for (std::size_t t = 0; t < T; ++t) {
    double norm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      out.gamma(t, i) = alpha(t, i) * beta(t, i);
      norm += out.gamma(t, i);
    }
    if (!(norm > 0.0)) throw DegenerateError("degenerate posterior at t=" + std::to_string(t + 1));
    for (std::size_t i = 0; i < N; ++i) out.gamma(t, i) /= norm;
  }

  for (std::size_t t = 0; t + 1 < T; ++t) {
    const Symbol cur = obs[t];
    const Symbol next = obs[t + 1];
    double norm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double left = alpha(t, i) * model.link(i, cur, next);
      for (std::size_t j = 0; j < N; ++j) {
        const double v = left * A(i, j) * B(j, next) * beta(t + 1, j);
        out.xi(t, i, j) = v;
        norm += v;
      }
    }
    if (!(norm > 0.0)) throw DegenerateError("degenerate posterior at t=" + std::to_string(t + 1));
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) out.xi(t, i, j) /= norm;
  }
  return out;
}

StatePath viterbi(const Model& model, const ObservationSequence& obs) {
  check_alphabet(obs, model.num_symbols());
  const std::size_t T = obs.size();
  const std::size_t N = model.num_states();

  auto log_of = [](std::span<const double> v) {
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = safe_log(v[k]);
    return out;
  };
  const auto log_pi = log_of(model.initial());
  const auto log_a = log_of(model.transition().values());
  const auto log_b = log_of(model.emission().values());
  const auto log_c = log_of(model.evidence_link().values());
  const std::size_t M = model.num_symbols();

  Matrix delta(T, N);
  std::vector<State> back(T * N, 0);

  for (std::size_t i = 0; i < N; ++i) delta(0, i) = log_pi[i] + log_b[i * M + obs[0]];
  for (std::size_t t = 1; t < T; ++t) {
    const Symbol prev = obs[t - 1];
    const Symbol cur = obs[t];
    for (std::size_t j = 0; j < N; ++j) {
      double best = -kInf;
      State arg = 0;
      for (std::size_t i = 0; i < N; ++i) {
        const double v = delta(t - 1, i) + log_a[i * N + j] + log_c[(i * M + prev) * M + cur];
        if (v > best) {
          best = v;
          arg = i;
        }
      }
      delta(t, j) = best + log_b[j * M + cur];
      back[t * N + j] = arg;
    }
  }

  StatePath path{std::vector<State>(T, 0), -kInf};
  State last = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (delta(T - 1, i) > path.log_probability) {
      path.log_probability = delta(T - 1, i);
      last = i;
    }
  }
  path.states[T - 1] = last;
  for (std::size_t t = T - 1; t > 0; --t) path.states[t - 1] = back[t * N + path.states[t]];
  return path;
}

}  // namespace effhmm
