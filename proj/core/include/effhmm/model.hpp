#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "effhmm/dense.hpp"

namespace effhmm {

// EvidenceFeedForward carries a learned per-state observation-to-observation
// table. Standard is the baseline HMM, encoded with that table fixed at 1.
enum class Variant { EvidenceFeedForward, Standard };

std::string_view to_string(Variant v);
// Accepts "eff" and "standard".
Variant parse_variant(std::string_view text);

// Symbol and state indices are 0-based in memory. Everything a user sees
// (files, messages, CLI output) is 1-based.
using Symbol = std::size_t;
using State = std::size_t;

// Parameter bundle (pi, A, B, C).
//
//   initial[i]            P(first state i)
//   transition(i, j)      P(next state j | state i)
//   emission(j, h)        P(observe symbol h | state j)
//   evidence_link(i,h,k)  P(next observation k | state i, current observation h)
//
// The constructor checks shapes only; stochastic constraints are reported by
// validate() so that broken models can still be loaded and inspected.
class Model {
 public:
  Model(Variant variant, std::vector<double> initial, Matrix transition, Matrix emission,
        Tensor3 evidence_link);

  // Baseline model with the link table set to all ones.
  static Model standard(std::vector<double> initial, Matrix transition, Matrix emission);

  Variant variant() const { return variant_; }
  std::size_t num_states() const { return initial_.size(); }
  std::size_t num_symbols() const { return emission_.cols(); }

  std::span<const double> initial() const { return initial_; }
  const Matrix& transition() const { return transition_; }
  const Matrix& emission() const { return emission_; }
  const Tensor3& evidence_link() const { return evidence_link_; }

  double link(State i, Symbol h, Symbol k) const { return evidence_link_(i, h, k); }

  friend bool operator==(const Model&, const Model&) = default;

 private:
  Variant variant_;
  std::vector<double> initial_;
  Matrix transition_;
  Matrix emission_;
  Tensor3 evidence_link_;
};

// A finite string of discrete symbols, T >= 1.
class ObservationSequence {
 public:
  ObservationSequence() = default;
  explicit ObservationSequence(std::vector<Symbol> zero_based);
  ObservationSequence(std::initializer_list<Symbol> zero_based);

  // Builds from 1-based symbol numbers as they appear in files; 0 is rejected.
  static ObservationSequence from_one_based(std::span<const long long> symbols);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  Symbol operator[](std::size_t t) const { return symbols_[t]; }
  std::span<const Symbol> symbols() const { return symbols_; }

  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }

  friend bool operator==(const ObservationSequence&, const ObservationSequence&) = default;

 private:
  std::vector<Symbol> symbols_;
};

// Throws DataError if obs is empty or uses a symbol outside [0, num_symbols).
void check_alphabet(const ObservationSequence& obs, std::size_t num_symbols);

class ClassLabel {
 public:
  explicit ClassLabel(std::string name);
  const std::string& name() const { return name_; }
  friend auto operator<=>(const ClassLabel&, const ClassLabel&) = default;

 private:
  std::string name_;
};

struct LabeledSequence {
  ObservationSequence sequence;
  ClassLabel label;
};

class LabeledDataset {
 public:
  LabeledDataset(std::vector<LabeledSequence> items, std::size_t num_symbols);

  std::span<const LabeledSequence> items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  std::size_t num_symbols() const { return num_symbols_; }

  // Distinct labels in lexicographic order.
  std::vector<ClassLabel> labels() const;
  // Subset by item index, in the order given.
  LabeledDataset subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<LabeledSequence> items_;
  std::size_t num_symbols_;
};

// Tolerance on every probability row sum.
inline constexpr double kRowSumTolerance = 1e-12;

struct Violation {
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Checks every stochastic constraint of the model and reports each violated
// row with 1-based coordinates. Never throws.
ValidationReport validate(const Model& model);

}  // namespace effhmm
