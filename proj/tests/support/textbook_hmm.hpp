#pragma once

// Plain discrete HMM written straight from the classic tutorial formulas,
// with nested std::vector storage and unscaled probabilities. Only used as a
// reference for the baseline variant; keep it free of effhmm internals.

#include <cmath>
#include <limits>
#include <vector>

namespace effhmm::testing::textbook {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

struct Hmm {
  Vec pi;
  Mat a;
  Mat b;
};

inline Mat forward(const Hmm& h, const std::vector<int>& o) {
  const std::size_t n = h.pi.size(), T = o.size();
  Mat alpha(T, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) alpha[0][i] = h.pi[i] * h.b[i][o[0]];
  for (std::size_t t = 1; t < T; ++t)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += alpha[t - 1][i] * h.a[i][j];
      alpha[t][j] = s * h.b[j][o[t]];
    }
  return alpha;
}

inline Mat backward(const Hmm& h, const std::vector<int>& o) {
  const std::size_t n = h.pi.size(), T = o.size();
  Mat beta(T, Vec(n, 1.0));
  for (std::size_t t = T - 1; t-- > 0;)
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += h.a[i][j] * h.b[j][o[t + 1]] * beta[t + 1][j];
      beta[t][i] = s;
    }
  return beta;
}

inline double likelihood(const Hmm& h, const std::vector<int>& o) {
  const Mat alpha = forward(h, o);
  double p = 0.0;
  for (double x : alpha.back()) p += x;
  return p;
}

// Returns (path, log probability); ties keep the lowest index.
inline std::pair<std::vector<int>, double> viterbi(const Hmm& h, const std::vector<int>& o) {
  const std::size_t n = h.pi.size(), T = o.size();
  Mat delta(T, Vec(n));
  std::vector<std::vector<int>> psi(T, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) delta[0][i] = h.pi[i] * h.b[i][o[0]];
  for (std::size_t t = 1; t < T; ++t)
    for (std::size_t j = 0; j < n; ++j) {
      double best = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = delta[t - 1][i] * h.a[i][j];
        if (v > best) {
          best = v;
          psi[t][j] = static_cast<int>(i);
        }
      }
      delta[t][j] = best * h.b[j][o[t]];
    }
  std::vector<int> path(T);
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i)
    if (delta[T - 1][i] > best) {
      best = delta[T - 1][i];
      path[T - 1] = static_cast<int>(i);
    }
  for (std::size_t t = T - 1; t > 0; --t) path[t - 1] = psi[t][path[t]];
  return {path, std::log(best)};
}

// One multi-sequence Baum-Welch step (sums of numerators over sums of
// denominators).
inline Hmm baum_welch_step(const Hmm& h, const std::vector<std::vector<int>>& data) {
  const std::size_t n = h.pi.size(), m = h.b[0].size();
  Vec pi_num(n, 0.0), a_den(n, 0.0), b_den(n, 0.0);
  Mat a_num(n, Vec(n, 0.0)), b_num(n, Vec(m, 0.0));
  for (const auto& o : data) {
    const std::size_t T = o.size();
    const Mat alpha = forward(h, o);
    const Mat beta = backward(h, o);
    double p = 0.0;
    for (double x : alpha.back()) p += x;
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t i = 0; i < n; ++i) {
        const double g = alpha[t][i] * beta[t][i] / p;
        if (t == 0) pi_num[i] += g;
        b_num[i][o[t]] += g;
        b_den[i] += g;
        if (t + 1 < T) {
          a_den[i] += g;
          for (std::size_t j = 0; j < n; ++j)
            a_num[i][j] += alpha[t][i] * h.a[i][j] * h.b[j][o[t + 1]] * beta[t + 1][j] / p;
        }
      }
  }
  Hmm out{Vec(n), Mat(n, Vec(n)), Mat(n, Vec(m))};
  for (std::size_t i = 0; i < n; ++i) {
    out.pi[i] = pi_num[i] / static_cast<double>(data.size());
    for (std::size_t j = 0; j < n; ++j) out.a[i][j] = a_den[i] > 0 ? a_num[i][j] / a_den[i] : 1.0 / n;
    for (std::size_t k = 0; k < m; ++k) out.b[i][k] = b_den[i] > 0 ? b_num[i][k] / b_den[i] : 1.0 / m;
  }
  return out;
}

}  // namespace effhmm::testing::textbook
