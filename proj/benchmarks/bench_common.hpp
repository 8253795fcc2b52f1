#pragma once

#include <cstdint>
#include <vector>

#include "effhmm/learning.hpp"
#include "effhmm/random.hpp"

namespace bench {

inline effhmm::ObservationSequence random_sequence(std::size_t m, std::size_t length, std::uint64_t seed) {
  effhmm::Rng rng(seed);
  std::vector<effhmm::Symbol> s(length);
  for (auto& x : s) x = rng.below(m);
  return effhmm::ObservationSequence(std::move(s));
}

}  // namespace bench
