#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

namespace acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  std::filesystem::path data_dir;
  std::filesystem::path cli;
};

Outcome oracle_equivalence(const Context&);
Outcome forward_backward_consistency(const Context&);
Outcome standard_reduction(const Context&);
Outcome constraint_preservation(const Context&);
Outcome em_monotonicity(const Context&);
Outcome fixed_point(const Context&);
Outcome synthetic_recoverability(const Context&);
Outcome iris_experiment(const Context&);
Outcome action_benchmark(const Context&);
Outcome cli_reproducibility(const Context&);

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double x, int precision = 3);
std::string sci(double x);

}  // namespace acceptance
