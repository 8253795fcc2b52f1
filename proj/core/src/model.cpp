#include "effhmm/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "effhmm/errors.hpp"
#include "format.hpp"

namespace effhmm {

using detail::format_number;

std::string_view to_string(Variant v) {
  return v == Variant::EvidenceFeedForward ? "eff" : "standard";
}

Variant parse_variant(std::string_view text) {
  if (text == "eff") return Variant::EvidenceFeedForward;
  if (text == "standard") return Variant::Standard;
  throw ParseError("unknown variant '" + std::string(text) + "' (expected eff or standard)");
}

Model::Model(Variant variant, std::vector<double> initial, Matrix transition, Matrix emission,
             Tensor3 evidence_link)
    : variant_(variant),
      initial_(std::move(initial)),
      transition_(std::move(transition)),
      emission_(std::move(emission)),
      evidence_link_(std::move(evidence_link)) {
  const std::size_t n = initial_.size();
  if (n == 0) throw DimensionError("model needs at least one state");
  if (transition_.rows() != n || transition_.cols() != n) {
    throw DimensionError("transition must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (emission_.rows() != n || emission_.cols() == 0) {
    throw DimensionError("emission must be " + std::to_string(n) + "xM with M >= 1");
  }
  const std::size_t m = emission_.cols();
  if (evidence_link_.dim0() != n || evidence_link_.dim1() != m || evidence_link_.dim2() != m) {
    throw DimensionError("evidence link must be " + std::to_string(n) + "x" + std::to_string(m) +
                         "x" + std::to_string(m));
  }
}

Model Model::standard(std::vector<double> initial, Matrix transition, Matrix emission) {
  const std::size_t n = initial.size();
  const std::size_t m = emission.cols();
  return Model(Variant::Standard, std::move(initial), std::move(transition), std::move(emission),
               Tensor3(n, m, m, 1.0));
}

ObservationSequence::ObservationSequence(std::vector<Symbol> zero_based)
    : symbols_(std::move(zero_based)) {}

ObservationSequence::ObservationSequence(std::initializer_list<Symbol> zero_based)
    : symbols_(zero_based) {}

ObservationSequence ObservationSequence::from_one_based(std::span<const long long> symbols) {
  std::vector<Symbol> out;
  out.reserve(symbols.size());
  for (std::size_t t = 0; t < symbols.size(); ++t) {
    if (symbols[t] < 1) {
      throw DataError("symbol " + std::to_string(symbols[t]) + " at position " +
                      std::to_string(t + 1) + " is not a 1-based symbol index");
    }
    out.push_back(static_cast<Symbol>(symbols[t] - 1));
  }
  return ObservationSequence(std::move(out));
}

void check_alphabet(const ObservationSequence& obs, std::size_t num_symbols) {
  if (obs.empty()) throw DataError("observation sequence is empty");
  for (std::size_t t = 0; t < obs.size(); ++t) {
    if (obs[t] >= num_symbols) {
      throw DataError("symbol " + std::to_string(obs[t] + 1) + " at position " +
                      std::to_string(t + 1) + " is outside the alphabet 1.." +
                      std::to_string(num_symbols));
    }
  }
}

ClassLabel::ClassLabel(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw DataError("class label must be nonempty");
}

LabeledDataset::LabeledDataset(std::vector<LabeledSequence> items, std::size_t num_symbols)
    : items_(std::move(items)), num_symbols_(num_symbols) {
  if (num_symbols_ == 0) throw DataError("dataset alphabet must have at least one symbol");
  for (std::size_t i = 0; i < items_.size(); ++i) {
    try {
      check_alphabet(items_[i].sequence, num_symbols_);
    } catch (const DataError& e) {
      throw DataError("item " + std::to_string(i + 1) + " (" + items_[i].label.name() +
                      "): " + e.what());
    }
  }
}

std::vector<ClassLabel> LabeledDataset::labels() const {
  std::set<ClassLabel> seen;
  for (const auto& item : items_) seen.insert(item.label);
  return {seen.begin(), seen.end()};
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<LabeledSequence> out;
  out.reserve(indices.size());
  for (std::size_t idx : indices) {
    if (idx >= items_.size()) throw DimensionError("dataset index out of range");
    out.push_back(items_[idx]);
  }
  return LabeledDataset(std::move(out), num_symbols_);
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << '\n';
    os << violations[i].message;
  }
  return os.str();
}

namespace {

bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

// Validates one stochastic row; `where` names it in messages.
void check_row(std::span<const double> row, const std::string& where,
               std::vector<Violation>& out) {
  double sum = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (!is_probability(row[k])) {
      out.push_back({where + " entry " + std::to_string(k + 1) + " is " +
                     format_number(row[k]) + ", outside [0,1]"});
    }
    sum += row[k];
  }
  if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
    out.push_back({where + " sums to " + format_number(sum)});
  }
}

}  // namespace

ValidationReport validate(const Model& model) {
  ValidationReport report;
  auto& out = report.violations;
  const std::size_t n = model.num_states();
  const std::size_t m = model.num_symbols();

  check_row(model.initial(), "initial", out);
  for (std::size_t i = 0; i < n; ++i) {
    check_row(model.transition().row(i), "A row " + std::to_string(i + 1), out);
  }
  for (std::size_t j = 0; j < n; ++j) {
    check_row(model.emission().row(j), "B row " + std::to_string(j + 1), out);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t h = 0; h < m; ++h) {
      const std::string where =
          "C row (state " + std::to_string(i + 1) + ", symbol " + std::to_string(h + 1) + ")";
      const auto row = model.evidence_link().row(i, h);
      if (model.variant() == Variant::EvidenceFeedForward) {
        check_row(row, where, out);
        continue;
      }
      for (std::size_t k = 0; k < m; ++k) {
        if (row[k] != 1.0) {
          out.push_back({where + " entry " + std::to_string(k + 1) + " is " +
                         format_number(row[k]) + " but the standard variant requires 1"});
        }
      }
    }
  }
  return report;
}

}  // namespace effhmm
