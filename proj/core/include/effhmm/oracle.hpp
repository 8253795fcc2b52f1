#pragma once

#include "effhmm/dense.hpp"
#include "effhmm/inference.hpp"
#include "effhmm/model.hpp"

// Exponential-time references that enumerate every state path. They share no
// code with the dynamic-programming routines and exist to check them.
namespace effhmm::oracle {

// Largest N^T the enumerators accept.
inline constexpr double kMaxPaths = 1e7;

// Sum over all N^T paths of
//   pi_{q1} b_{q1}(O_1) prod_t a_{q_t q_{t+1}} b_{q_{t+1}}(O_{t+1}) c_{q_t}(O_t, O_{t+1}).
double enumerate_likelihood(const Model& model, const ObservationSequence& obs);

// Highest-mass path; ties go to the lexicographically smallest path.
StatePath enumerate_best_path(const Model& model, const ObservationSequence& obs);

// gamma(t, i) = mass of paths with q_t = i over total mass. Throws
// DegenerateError when the total mass is zero.
Matrix enumerate_posterior_gamma(const Model& model, const ObservationSequence& obs);

}  // namespace effhmm::oracle
