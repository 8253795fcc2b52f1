#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "effhmm/classify.hpp"
#include "effhmm/errors.hpp"
#include "effhmm/model_io.hpp"
#include "effhmm/pipelines.hpp"
#include "manifest.hpp"

namespace effhmm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

// Prefixes parse errors with the file name; other errors pass through.
template <typename F>
auto reading(const fs::path& path, F&& read) {
  try {
    return read();
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string class_counts(const LabeledDataset& data) {
  std::map<ClassLabel, std::size_t> counts;
  for (const auto& item : data.items()) ++counts[item.label];
  std::ostringstream os;
  for (const auto& [label, n] : counts) os << "  " << label.name() << ": " << n << '\n';
  return os.str();
}

void write_sequences(const fs::path& path, const LabeledDataset& data) {
  auto out = open_output(path);
  write_sequence_file(out, data);
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

std::vector<std::size_t> one_based(const std::vector<std::size_t>& indices) {
  std::vector<std::size_t> out;
  for (auto i : indices) out.push_back(i + 1);
  return out;
}

}  // namespace

int run_iris_prep(const IrisPrepOptions& o) {
  auto in = open_input(o.input);
  const auto records = reading(o.input, [&] { return read_iris_csv(in); });
  if (records.empty()) throw DataError("'" + o.input.string() + "' holds no records");

  std::vector<IrisRecord> fit_on = records;
  if (o.train_only_bins) {
    if (o.train_per_class < 1) throw UsageError("--train-per-class must be at least 1");
    std::vector<LabeledSequence> labels;
    for (const auto& r : records) labels.push_back({ObservationSequence{0}, r.species});
    const Split split = split_per_class(LabeledDataset(labels, 1), o.train_per_class, o.seed);
    for (const auto& w : split.warnings) std::cerr << "warning: " << w << '\n';
    fit_on.clear();
    for (auto i : split.train) fit_on.push_back(records[i]);
  }
  const BinSpec spec = fit_bins(fit_on);

  std::vector<LabeledSequence> items;
  for (const auto& r : records) items.push_back({iris_trend_sequence(r, spec), r.species});
  const LabeledDataset data(std::move(items), kTrendAlphabetSize);
  write_sequences(o.output, data);

  std::cout << bin_spec_to_string(spec) << "wrote " << data.size() << " sequences to "
            << o.output.generic_string() << '\n'
            << class_counts(data);

  Manifest m("iris-prep");
  m.flag("input", o.input.generic_string());
  m.flag("output", o.output.generic_string());
  m.flag("train-only-bins", o.train_only_bins);
  m.flag("train-per-class", o.train_per_class);
  m.seed(o.seed);
  m.input(o.input);
  m.artifact(o.output);
  m.write(manifest_path_for(o.output));
  return 0;
}

int run_track_prep(const TrackPrepOptions& o) {
  auto in = open_input(o.input);
  const auto activities = reading(o.input, [&] {
    return o.mode == "ratios" ? read_ratio_csv(in) : read_track_csv(in);
  });
  if (activities.empty()) throw DataError("'" + o.input.string() + "' holds no activities");

  std::vector<LabeledSequence> items;
  for (const auto& a : activities) {
    if (a.ratios.size() < 2) {
      throw DataError("activity '" + a.label.name() + "' starting on line " + std::to_string(a.first_line) +
                      " has " + std::to_string(a.ratios.size()) + " frame; at least 2 are needed");
    }
    items.push_back({ratio_trend_sequence(a.ratios), a.label});
  }
  const LabeledDataset data(std::move(items), kTrendAlphabetSize);
  write_sequences(o.output, data);
  std::cout << "wrote " << data.size() << " sequences to " << o.output.generic_string() << '\n'
            << class_counts(data);

  Manifest m("track-prep");
  m.flag("input", o.input.generic_string());
  m.flag("mode", o.mode);
  m.flag("output", o.output.generic_string());
  m.input(o.input);
  m.artifact(o.output);
  m.write(manifest_path_for(o.output));
  return 0;
}

int run_train(const TrainOptions& o) {
  TrainConfig config;
  config.variant = parse_variant(o.variant);
  config.num_states = o.states;
  config.convergence_threshold = o.threshold;
  config.max_iterations = o.max_iters;
  config.smoothing = o.epsilon;
  config.seed = o.seed;
  try {
    config.check();
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
  if (o.train_per_class < 1) throw UsageError("--train-per-class must be at least 1");

  const LabeledDataset data = reading(o.data, [&] { return read_sequence_file(o.data); });
  if (data.labels().size() < 2) throw DataError("training data must contain at least two classes");
  const Split split = split_per_class(data, o.train_per_class, o.seed);
  for (const auto& w : split.warnings) std::cerr << "warning: " << w << '\n';

  const Classifier classifier = train_classifier(data.subset(split.train), config);
  save_classifier(classifier, o.out);

  const std::string digest = sha256_file(o.data);
  const json split_doc = {{"data", o.data.generic_string()},
                          {"data_sha256", digest},
                          {"seed", o.seed},
                          {"train_per_class", o.train_per_class},
                          {"train", one_based(split.train)},
                          {"test", one_based(split.test)}};
  {
    auto out = open_output(o.out / "split.json");
    out << split_doc.dump(2) << '\n';
  }

  std::cout << "variant " << to_string(config.variant) << ", " << config.num_states << " states, "
            << data.num_symbols() << " symbols; " << split.train.size() << " train / " << split.test.size()
            << " test\n";
  for (const auto& [label, report] : classifier.reports()) {
    std::cout << "  " << label.name() << ": " << report.iterations_run << " iterations, "
              << (report.converged ? "converged" : "hit the iteration cap") << ", mean log-likelihood "
              << std::setprecision(10) << report.log_likelihood_history.back() << '\n';
  }

  Manifest m("train");
  m.flag("data", o.data.generic_string());
  m.flag("variant", o.variant);
  m.flag("states", o.states);
  m.flag("threshold", o.threshold);
  m.flag("max-iters", o.max_iters);
  m.flag("epsilon", o.epsilon);
  m.flag("train-per-class", o.train_per_class);
  m.flag("out", o.out.generic_string());
  m.seed(o.seed);
  m.input(o.data);
  m.artifact(o.out / "classifier.json");
  {
    auto in = open_input(o.out / "classifier.json");
    const json index = json::parse(in);
    for (const auto& entry : index.at("classes")) m.artifact(o.out / entry.at("model").get<std::string>());
  }
  m.artifact(o.out / "split.json");
  m.write(o.out / "manifest.json");
  return 0;
}

int run_eval(const EvalOptions& o) {
  const Classifier classifier = load_classifier(o.models);
  const LabeledDataset data = reading(o.data, [&] { return read_sequence_file(o.data); });

  const fs::path split_path = o.split.value_or(o.models / "split.json");
  json split_doc;
  {
    auto in = open_input(split_path);
    try {
      split_doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ParseError(split_path.string() + ": " + e.what());
    }
  }
  if (split_doc.value("data_sha256", "") != sha256_file(o.data)) {
    throw DataError("split file '" + split_path.string() + "' was made for different data");
  }
  std::vector<std::size_t> test;
  for (const auto& v : split_doc.at("test")) {
    const auto i = v.get<std::size_t>();
    if (i < 1 || i > data.size()) throw DataError("split item " + std::to_string(i) + " is out of range");
    test.push_back(i - 1);
  }
  if (test.empty()) throw DataError("split file lists no test items");

  const ScoreMode mode = o.normalized ? ScoreMode::LengthNormalized : ScoreMode::Raw;
  const EvalReport report = evaluate(classifier, data.subset(test), mode);
  const fs::path report_path =
      o.report.value_or(o.models / (o.normalized ? "eval_normalized.json" : "eval.json"));
  {
    auto out = open_output(report_path);
    out << eval_report_to_json(report);
  }
  std::cout << eval_report_to_table(report);

  Manifest m("eval");
  m.flag("models", o.models.generic_string());
  m.flag("data", o.data.generic_string());
  m.flag("split", split_path.generic_string());
  m.flag("normalized", o.normalized);
  m.flag("report", report_path.generic_string());
  m.seed(classifier.config().seed);
  m.input(o.data);
  m.input(split_path);
  m.input(o.models / "classifier.json");
  m.artifact(report_path);
  m.write(manifest_path_for(report_path));
  return 0;
}

int run_sample(const SampleOptions& o) {
  if (o.length < 1) throw UsageError("--length must be at least 1");
  if (o.count < 1) throw UsageError("--count must be at least 1");
  const Model model = load_model_file(o.model);
  const ClassLabel label(o.model.stem().string());

  std::vector<LabeledSequence> items;
  for (std::size_t i = 0; i < o.count; ++i) {
    items.push_back({sample_sequence(model, o.length, o.seed + i).observations, label});
  }
  const LabeledDataset data(std::move(items), model.num_symbols());
  write_sequences(o.out, data);
  std::cout << "wrote " << o.count << " sequences of length " << o.length << " to " << o.out.generic_string()
            << '\n';

  Manifest m("sample");
  m.flag("model", o.model.generic_string());
  m.flag("length", o.length);
  m.flag("count", o.count);
  m.flag("out", o.out.generic_string());
  m.seed(o.seed);
  m.input(o.model);
  m.artifact(o.out);
  m.write(manifest_path_for(o.out));
  return 0;
}

namespace {

void print_row(std::ostream& os, std::span<const double> row) {
  double sum = 0.0;
  for (double x : row) {
    os << ' ' << std::setw(10) << x;
    sum += x;
  }
  os << "   | sum " << std::setprecision(15) << sum << std::setprecision(6) << '\n';
}

void print_range(std::ostream& os, std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  os << "  min " << *lo << ", max " << *hi << '\n';
}

}  // namespace

int run_inspect(const InspectOptions& o) {
  auto in = open_input(o.model);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const Model model = reading(o.model, [&] { return parse_model(text); });
  const std::size_t n = model.num_states(), m = model.num_symbols();

  std::ostream& os = std::cout;
  os << std::fixed << std::setprecision(6);
  os << "model " << o.model.generic_string() << "\n"
     << "variant " << to_string(model.variant()) << ", " << n << " states, " << m << " symbols\n";

  os << "pi\n ";
  print_row(os, model.initial());
  print_range(os, model.initial());
  os << "A\n";
  for (std::size_t i = 0; i < n; ++i) {
    os << ' ';
    print_row(os, model.transition().row(i));
  }
  print_range(os, model.transition().values());
  os << "B\n";
  for (std::size_t i = 0; i < n; ++i) {
    os << ' ';
    print_row(os, model.emission().row(i));
  }
  print_range(os, model.emission().values());
  if (model.variant() == Variant::Standard) {
    os << "C degenerate (baseline mode)\n";
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      os << "C state " << i + 1 << '\n';
      for (std::size_t h = 0; h < m; ++h) {
        os << ' ';
        print_row(os, model.evidence_link().row(i, h));
      }
    }
    print_range(os, model.evidence_link().values());
  }

  const ValidationReport report = validate(model);
  if (report.ok()) {
    os << "ok\n";
    return 0;
  }
  os << "invalid:\n" << report.to_string() << '\n';
  return 2;
}

}  // namespace effhmm::cli
