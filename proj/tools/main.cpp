#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "effhmm/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

}  // namespace

int main(int argc, char** argv) {
  using namespace effhmm::cli;

  CLI::App app{"Evidence feed forward HMM toolkit"};
  app.set_version_flag("--version", EFFHMM_VERSION);
  app.require_subcommand(1);

  IrisPrepOptions iris;
  auto* iris_cmd = app.add_subcommand("iris-prep", "Iris CSV -> labeled trend sequences");
  iris_cmd->add_option("--input", iris.input, "Iris CSV")->required();
  iris_cmd->add_option("--output", iris.output, "Sequence file to write")->required();
  iris_cmd->add_flag("--train-only-bins", iris.train_only_bins, "Fit bins on the training split only");
  iris_cmd->add_option("--seed", iris.seed, "Split seed for --train-only-bins")->capture_default_str();
  iris_cmd->add_option("--train-per-class", iris.train_per_class, "Split size for --train-only-bins")
      ->capture_default_str();

  TrackPrepOptions track;
  auto* track_cmd = app.add_subcommand("track-prep", "Point tracks or ratio lists -> trend sequences");
  track_cmd->add_option("--input", track.input, "Track or ratio CSV")->required();
  track_cmd->add_option("--mode", track.mode, "points or ratios")
      ->check(CLI::IsMember({"points", "ratios"}))
      ->capture_default_str();
  track_cmd->add_option("--output", track.output, "Sequence file to write")->required();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train one model per class");
  train_cmd->add_option("--data", train.data, "Sequence file")->required();
  train_cmd->add_option("--variant", train.variant, "eff or standard")
      ->check(CLI::IsMember({"eff", "standard"}))
      ->capture_default_str();
  train_cmd->add_option("--states", train.states, "Hidden states per model")->capture_default_str();
  train_cmd->add_option("--threshold", train.threshold, "Stop when the mean log-likelihood gain is below this")
      ->capture_default_str();
  train_cmd->add_option("--max-iters", train.max_iters, "EM iteration cap")->capture_default_str();
  train_cmd->add_option("--epsilon", train.epsilon, "Additive smoothing")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "Master seed")->capture_default_str();
  train_cmd->add_option("--train-per-class", train.train_per_class, "Training items per class")
      ->capture_default_str();
  train_cmd->add_option("--out", train.out, "Output directory")->required();

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Classify held-out items and report accuracy");
  eval_cmd->add_option("--models", eval.models, "Directory written by train")->required();
  eval_cmd->add_option("--data", eval.data, "Sequence file")->required();
  eval_cmd->add_option("--split", eval.split, "Split file (default <models>/split.json)");
  eval_cmd->add_flag("--normalized", eval.normalized, "Compare log-likelihoods divided by length");
  eval_cmd->add_option("--report", eval.report, "JSON report path");

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw sequences from a model");
  sample_cmd->add_option("--model", sample.model, "Model JSON")->required();
  sample_cmd->add_option("--length", sample.length, "Sequence length")->capture_default_str();
  sample_cmd->add_option("--count", sample.count, "Number of sequences")->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed, "Seed")->capture_default_str();
  sample_cmd->add_option("--out", sample.out, "Sequence file to write")->required();

  InspectOptions inspect;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print a model summary and validate it");
  inspect_cmd->add_option("--model", inspect.model, "Model JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*iris_cmd) return run_iris_prep(iris);
    if (*track_cmd) return run_track_prep(track);
    if (*train_cmd) return run_train(train);
    if (*eval_cmd) return run_eval(eval);
    if (*sample_cmd) return run_sample(sample);
    if (*inspect_cmd) return run_inspect(inspect);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const effhmm::DegenerateError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const effhmm::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
