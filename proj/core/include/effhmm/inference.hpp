#pragma once

#include <vector>

#include "effhmm/dense.hpp"
#include "effhmm/model.hpp"

namespace effhmm {

// Scaled forward trellis.
//
// alpha_hat(t, i) is alpha_i(t) multiplied by prod_{u<=t} scaling[u], where
// scaling[t] is the reciprocal of the unnormalized column sum at t. Each row
// of alpha_hat therefore sums to 1 and
//   log P(O | model) = -sum_t log scaling[t].
//
// If the sequence is impossible under the model, the first zero column and
// every later one are left at zero with scaling = +inf, and
// log_likelihood = -inf.
struct TrellisResult {
  Matrix alpha_hat;
  std::vector<double> scaling;
  double log_likelihood = 0.0;

  bool impossible() const;
};

// Scaled backward variables. With the forward scaling,
//   beta_hat(t, i) = beta_i(t) * prod_{u>t} scaling[u],
// so beta_hat(T, .) = 1 and sum_i alpha_hat(t,i) * beta_hat(t,i) = 1 for all t.
struct BackwardResult {
  Matrix beta_hat;
};

struct PosteriorStats {
  Matrix gamma;  // T x N
  Tensor3 xi;    // (T-1) x N x N; xi(t, i, j)
  double log_likelihood = 0.0;
};

struct StatePath {
  std::vector<State> states;
  double log_probability = 0.0;
};

// alpha_i(1)     = pi_i b_i(O_1)
// alpha_j(t+1)   = [sum_i alpha_i(t) a_ij c_i(O_t, O_{t+1})] b_j(O_{t+1})
// Throws DataError on a symbol outside the model alphabet.
TrellisResult forward(const Model& model, const ObservationSequence& obs);

// beta_i(T) = 1
// beta_i(t) = [sum_j a_ij b_j(O_{t+1}) beta_j(t+1)] c_i(O_t, O_{t+1})
// Scaled with the forward factors. For impossible sequences the factors
// past the break are replaced by per-row normalization.
BackwardResult backward(const Model& model, const ObservationSequence& obs,
                        const TrellisResult& trellis);
BackwardResult backward(const Model& model, const ObservationSequence& obs);

// log sum_i pi_i b_i(O_1) beta_i(1), recovered from the scaled backward pass.
double backward_log_likelihood(const Model& model, const ObservationSequence& obs,
                               const TrellisResult& trellis, const BackwardResult& beta);

// gamma and xi as self-normalizing ratios. Throws DegenerateError
// ("degenerate posterior") when the sequence has zero likelihood.
PosteriorStats posteriors(const Model& model, const ObservationSequence& obs);

// Max-product decoding in log space; ties go to the lowest state index.
// An impossible sequence yields log_probability = -inf and the all-first-state path.
StatePath viterbi(const Model& model, const ObservationSequence& obs);

}  // namespace effhmm
