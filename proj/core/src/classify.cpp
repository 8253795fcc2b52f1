#include "effhmm/classify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "effhmm/errors.hpp"
#include "effhmm/inference.hpp"
#include "effhmm/model_io.hpp"
#include "effhmm/random.hpp"

namespace effhmm {

using nlohmann::json;

Classifier::Classifier(std::map<ClassLabel, Model> models, TrainConfig config,
                       std::map<ClassLabel, TrainReport> reports)
    : models_(std::move(models)), config_(config), reports_(std::move(reports)) {
  if (models_.size() < 2) throw DataError("a classifier needs at least two classes");
  const Model& first = models_.begin()->second;
  for (const auto& [label, model] : models_) {
    if (model.num_symbols() != first.num_symbols()) {
      throw DataError("class '" + label.name() + "' uses a different alphabet size");
    }
    if (model.variant() != first.variant()) {
      throw DataError("class '" + label.name() + "' uses a different model variant");
    }
  }
}

std::vector<ClassLabel> Classifier::labels() const {
  std::vector<ClassLabel> out;
  for (const auto& entry : models_) out.push_back(entry.first);
  return out;
}

Classifier train_classifier(const LabeledDataset& dataset, const TrainConfig& config) {
  config.check();
  const auto labels = dataset.labels();
  if (labels.size() < 2) throw DataError("training data must contain at least two classes");

  std::map<ClassLabel, Model> models;
  std::map<ClassLabel, TrainReport> reports;
  for (std::size_t ordinal = 0; ordinal < labels.size(); ++ordinal) {
    const ClassLabel& label = labels[ordinal];
    std::vector<ObservationSequence> seqs;
    for (const auto& item : dataset.items())
      if (item.label == label) seqs.push_back(item.sequence);
    if (seqs.empty()) throw DataError("class '" + label.name() + "' has no training sequences");

    const std::uint64_t seed = class_seed(config.seed, ordinal);
    auto trained = em_train(seqs, config,
                            init_model(config.num_states, dataset.num_symbols(), config.variant, seed));
    models.emplace(label, std::move(trained.model));
    reports.emplace(label, std::move(trained.report));
  }
  return Classifier(std::move(models), config, std::move(reports));
}

Classification classify_sequence(const Classifier& classifier, const ObservationSequence& obs,
                                 ScoreMode mode) {
  check_alphabet(obs, classifier.num_symbols());
  const double inf = std::numeric_limits<double>::infinity();
  Classification out{classifier.models().begin()->first, {}, false};
  double best = -inf;
  bool found = false;
  for (const auto& [label, model] : classifier.models()) {
    double score = forward(model, obs).log_likelihood;
    if (mode == ScoreMode::LengthNormalized) score /= static_cast<double>(obs.size());
    out.scores.emplace(label, score);
    if (score > best) {
      best = score;
      out.label = label;
      found = true;
    }
  }
  out.all_impossible = !found;
  return out;
}

EvalReport evaluate(const Classifier& classifier, const LabeledDataset& test, ScoreMode mode) {
  if (test.size() == 0) throw DataError("evaluation set is empty");
  EvalReport r;
  r.labels = classifier.labels();
  r.mode = mode;
  r.variant = classifier.variant();
  const std::size_t k = r.labels.size();
  r.confusion.assign(k, std::vector<std::size_t>(k, 0));
  r.class_counts.assign(k, 0);

  auto position = [&](const ClassLabel& label) {
    auto it = std::lower_bound(r.labels.begin(), r.labels.end(), label);
    if (it == r.labels.end() || *it != label) {
      throw DataError("test label '" + label.name() + "' has no trained model");
    }
    return static_cast<std::size_t>(it - r.labels.begin());
  };

  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& item = test.items()[i];
    const std::size_t truth = position(item.label);
    Classification c = classify_sequence(classifier, item.sequence, mode);
    const std::size_t predicted = position(c.label);
    ++r.confusion[truth][predicted];
    ++r.class_counts[truth];
    if (truth == predicted) ++correct;
    r.items.push_back({i, item.label, std::move(c)});
  }
  for (std::size_t c = 0; c < k; ++c) {
    r.per_class_accuracy.push_back(r.class_counts[c] == 0
                                       ? std::numeric_limits<double>::quiet_NaN()
                                       : 100.0 * static_cast<double>(r.confusion[c][c]) /
                                             static_cast<double>(r.class_counts[c]));
  }
  r.overall_accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(test.size());
  return r;
}

namespace {

json percent(double x) {
  if (std::isnan(x)) return nullptr;
  return std::round(x * 100.0) / 100.0;
}

json score_value(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string percent_text(double x) {
  if (std::isnan(x)) return "n/a";
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << x;
  return os.str();
}

std::size_t label_width(const std::vector<ClassLabel>& labels, std::size_t minimum) {
  std::size_t w = minimum;
  for (const auto& l : labels) w = std::max(w, l.name().size());
  return w;
}

}  // namespace

std::string eval_report_to_json(const EvalReport& report) {
  json doc;
  doc["variant"] = std::string(to_string(report.variant));
  doc["score_mode"] = report.mode == ScoreMode::Raw ? "raw" : "length_normalized";
  json labels = json::array();
  for (const auto& l : report.labels) labels.push_back(l.name());
  doc["labels"] = labels;
  doc["confusion"] = report.confusion;
  doc["class_counts"] = report.class_counts;
  json per_class = json::array();
  for (double a : report.per_class_accuracy) per_class.push_back(percent(a));
  doc["per_class_accuracy"] = per_class;
  doc["overall_accuracy"] = percent(report.overall_accuracy);
  json items = json::array();
  for (const auto& item : report.items) {
    json scores = json::object();
    for (const auto& [label, s] : item.result.scores) scores[label.name()] = score_value(s);
    items.push_back({{"index", item.index + 1},
                     {"true", item.truth.name()},
                     {"predicted", item.result.label.name()},
                     {"all_impossible", item.result.all_impossible},
                     {"scores", scores}});
  }
  doc["items"] = items;
  return doc.dump(2) + "\n";
}

std::string eval_report_to_table(const EvalReport& report) {
  const std::size_t w = label_width(report.labels, 8);
  const std::string column = report.variant == Variant::Standard ? "HMM" : "EFF-HMM";
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "Class" << "  " << std::right << std::setw(8)
     << column << "  " << std::setw(6) << "n" << '\n';
  for (std::size_t c = 0; c < report.labels.size(); ++c) {
    os << std::left << std::setw(static_cast<int>(w)) << report.labels[c].name() << "  " << std::right
       << std::setw(8) << percent_text(report.per_class_accuracy[c]) << "  " << std::setw(6)
       << report.class_counts[c] << '\n';
  }
  std::size_t total = 0;
  for (auto n : report.class_counts) total += n;
  os << std::left << std::setw(static_cast<int>(w)) << "Overall" << "  " << std::right << std::setw(8)
     << percent_text(report.overall_accuracy) << "  " << std::setw(6) << total << '\n';
  return os.str();
}

std::string comparison_table(const EvalReport& standard, const EvalReport& eff) {
  if (standard.labels != eff.labels) throw DataError("reports cover different classes");
  const std::size_t w = label_width(standard.labels, 8);
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "Class" << "  " << std::right << std::setw(8)
     << "HMM" << "  " << std::setw(8) << "EFF-HMM" << '\n';
  for (std::size_t c = 0; c < standard.labels.size(); ++c) {
    os << std::left << std::setw(static_cast<int>(w)) << standard.labels[c].name() << "  " << std::right
       << std::setw(8) << percent_text(standard.per_class_accuracy[c]) << "  " << std::setw(8)
       << percent_text(eff.per_class_accuracy[c]) << '\n';
  }
  os << std::left << std::setw(static_cast<int>(w)) << "Overall" << "  " << std::right << std::setw(8)
     << percent_text(standard.overall_accuracy) << "  " << std::setw(8)
     << percent_text(eff.overall_accuracy) << '\n';
  return os.str();
}

Split split_per_class(const LabeledDataset& dataset, std::size_t train_per_class, std::uint64_t seed) {
  if (train_per_class < 1) throw DataError("need at least one training item per class");
  Split split;
  const auto labels = dataset.labels();
  for (std::size_t ordinal = 0; ordinal < labels.size(); ++ordinal) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < dataset.size(); ++i)
      if (dataset.items()[i].label == labels[ordinal]) members.push_back(i);
    Rng rng(class_seed(seed, ordinal));
    rng.shuffle(members);
    if (members.size() < train_per_class) {
      split.warnings.push_back("class '" + labels[ordinal].name() + "' has only " +
                               std::to_string(members.size()) + " items; training on all of them");
    }
    const std::size_t take = std::min(train_per_class, members.size());
    split.train.insert(split.train.end(), members.begin(), members.begin() + static_cast<long>(take));
    split.test.insert(split.test.end(), members.begin() + static_cast<long>(take), members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

namespace {

std::string model_file_name(std::size_t ordinal, const ClassLabel& label) {
  std::string safe;
  for (char c : label.name()) {
    safe += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  }
  return "model_" + std::to_string(ordinal + 1) + "_" + safe + ".json";
}

json config_to_json(const TrainConfig& c) {
  return {{"num_states", c.num_states},
          {"convergence_threshold", c.convergence_threshold},
          {"max_iterations", c.max_iterations},
          {"smoothing", c.smoothing},
          {"seed", c.seed},
          {"variant", std::string(to_string(c.variant))}};
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  c.num_states = j.at("num_states").get<std::size_t>();
  c.convergence_threshold = j.at("convergence_threshold").get<double>();
  c.max_iterations = j.at("max_iterations").get<std::size_t>();
  c.smoothing = j.at("smoothing").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.variant = parse_variant(j.at("variant").get<std::string>());
  return c;
}

}  // namespace

void save_classifier(const Classifier& classifier, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json classes = json::array();
  std::size_t ordinal = 0;
  for (const auto& [label, model] : classifier.models()) {
    const std::string file = model_file_name(ordinal, label);
    save_model(model, dir / file);
    json entry = {{"label", label.name()}, {"model", file}, {"seed", class_seed(classifier.config().seed, ordinal)}};
    if (auto it = classifier.reports().find(label); it != classifier.reports().end()) {
      entry["train_report"] = {{"log_likelihood_history", it->second.log_likelihood_history},
                               {"iterations_run", it->second.iterations_run},
                               {"converged", it->second.converged},
                               {"criterion", "mean per-sequence log-likelihood"}};
    }
    classes.push_back(std::move(entry));
    ++ordinal;
  }
  json doc = {{"format", "effhmm-classifier"},
              {"variant", std::string(to_string(classifier.variant()))},
              {"n_symbols", classifier.num_symbols()},
              {"train_config", config_to_json(classifier.config())},
              {"classes", classes}};
  std::ofstream out(dir / "classifier.json", std::ios::binary);
  if (!out) throw DataError("cannot write '" + (dir / "classifier.json").string() + "'");
  out << doc.dump(2) << '\n';
}

Classifier load_classifier(const std::filesystem::path& dir) {
  const auto index = dir / "classifier.json";
  std::ifstream in(index, std::ios::binary);
  if (!in) throw DataError("cannot open '" + index.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
    std::map<ClassLabel, Model> models;
    std::map<ClassLabel, TrainReport> reports;
    for (const auto& entry : doc.at("classes")) {
      ClassLabel label(entry.at("label").get<std::string>());
      models.emplace(label, load_model_file(dir / entry.at("model").get<std::string>()));
      if (entry.contains("train_report")) {
        const auto& tr = entry["train_report"];
        TrainReport report;
        for (const auto& v : tr.at("log_likelihood_history"))
          report.log_likelihood_history.push_back(v.is_number() ? v.get<double>()
                                                                : -std::numeric_limits<double>::infinity());
        report.iterations_run = tr.at("iterations_run").get<std::size_t>();
        report.converged = tr.at("converged").get<bool>();
        reports.emplace(label, std::move(report));
      }
    }
    return Classifier(std::move(models), config_from_json(doc.at("train_config")), std::move(reports));
  } catch (const json::exception& e) {
    throw ParseError(index.string() + ": " + e.what());
  }
}

}  // namespace effhmm
