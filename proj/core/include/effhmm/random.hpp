#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace effhmm {

// Seeded generator whose outputs are identical on every standard library.
// std::mt19937_64's sequence is fixed by the standard; the distributions in
// <random> are not, so the draws below are written out by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1).
  double uniform();

  // Uniform integer in [0, n).
  std::size_t below(std::size_t n);

  // Index drawn with probability proportional to weights; the weights must
  // have positive total.
  std::size_t categorical(std::span<const double> weights);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace effhmm
