#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "effhmm/learning.hpp"
#include "effhmm/model.hpp"

namespace effhmm {

// Raw compares total log-likelihoods; LengthNormalized divides by T first.
enum class ScoreMode { Raw, LengthNormalized };

// One trained model per class, all over the same alphabet and variant.
class Classifier {
 public:
  // Throws DataError with fewer than two classes or mismatched models.
  Classifier(std::map<ClassLabel, Model> models, TrainConfig config,
             std::map<ClassLabel, TrainReport> reports = {});

  const std::map<ClassLabel, Model>& models() const { return models_; }
  const TrainConfig& config() const { return config_; }
  const std::map<ClassLabel, TrainReport>& reports() const { return reports_; }
  std::vector<ClassLabel> labels() const;
  std::size_t num_symbols() const { return models_.begin()->second.num_symbols(); }
  Variant variant() const { return models_.begin()->second.variant(); }

 private:
  std::map<ClassLabel, Model> models_;
  TrainConfig config_;
  std::map<ClassLabel, TrainReport> reports_;
};

// Seed used for the class at position `ordinal` in label order.
inline std::uint64_t class_seed(std::uint64_t master, std::size_t ordinal) { return master + ordinal; }

// EM per class on that class's sequences, seeded with class_seed.
Classifier train_classifier(const LabeledDataset& dataset, const TrainConfig& config);

struct Classification {
  ClassLabel label;
  std::map<ClassLabel, double> scores;
  // Every class scored -inf; label is then the first class in order.
  bool all_impossible = false;
};

// Argmax of per-class forward log-likelihoods; ties go to the
// lexicographically first label.
Classification classify_sequence(const Classifier& classifier, const ObservationSequence& obs,
                                 ScoreMode mode = ScoreMode::Raw);

struct ItemResult {
  std::size_t index = 0;  // position in the evaluated set
  ClassLabel truth;
  Classification result;
};

struct EvalReport {
  std::vector<ClassLabel> labels;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::vector<std::size_t> class_counts;
  std::vector<double> per_class_accuracy;           // percent; NaN for an absent class
  double overall_accuracy = 0.0;                    // percent
  ScoreMode mode = ScoreMode::Raw;
  Variant variant = Variant::EvidenceFeedForward;
  std::vector<ItemResult> items;
};

// Classifies every item of a nonempty test set. DataError on a label the
// classifier was not trained on.
EvalReport evaluate(const Classifier& classifier, const LabeledDataset& test,
                    ScoreMode mode = ScoreMode::Raw);

// Confusion as nested arrays, accuracies in percent rounded to 2 decimals,
// item scores by class (-inf written as null).
std::string eval_report_to_json(const EvalReport& report);
// Class / accuracy table.
std::string eval_report_to_table(const EvalReport& report);
// Two-column HMM vs EFF-HMM table for reports over the same labels.
std::string comparison_table(const EvalReport& standard, const EvalReport& eff);

struct Split {
  std::vector<std::size_t> train;  // ascending item indices
  std::vector<std::size_t> test;
  std::vector<std::string> warnings;
};

// Seeded per-class shuffle; the first `train_per_class` items of each class
// train and the rest test. A class with fewer items trains on all of them
// and records a warning.
Split split_per_class(const LabeledDataset& dataset, std::size_t train_per_class, std::uint64_t seed);

// Directory layout: classifier.json indexing one model JSON per class.
void save_classifier(const Classifier& classifier, const std::filesystem::path& dir);
Classifier load_classifier(const std::filesystem::path& dir);

}  // namespace effhmm
