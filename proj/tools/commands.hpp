#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace effhmm::cli {

// Raised for flag combinations CLI11 cannot reject itself; exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IrisPrepOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  bool train_only_bins = false;
  std::uint64_t seed = 0;             // split used by --train-only-bins
  std::size_t train_per_class = 10;
};

struct TrackPrepOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  std::string mode = "points";
};

struct TrainOptions {
  std::filesystem::path data;
  std::filesystem::path out;
  std::string variant = "eff";
  std::size_t states = 3;
  double threshold = 0.01;
  std::size_t max_iters = 500;
  double epsilon = 1e-6;
  std::uint64_t seed = 0;
  std::size_t train_per_class = 10;
};

struct EvalOptions {
  std::filesystem::path models;
  std::filesystem::path data;
  std::optional<std::filesystem::path> split;   // default <models>/split.json
  std::optional<std::filesystem::path> report;  // default <models>/eval[_normalized].json
  bool normalized = false;
};

struct SampleOptions {
  std::filesystem::path model;
  std::filesystem::path out;
  std::size_t length = 10;
  std::size_t count = 1;
  std::uint64_t seed = 0;
};

struct InspectOptions {
  std::filesystem::path model;
};

// Each returns the process exit code; library errors propagate.
int run_iris_prep(const IrisPrepOptions& o);
int run_track_prep(const TrackPrepOptions& o);
int run_train(const TrainOptions& o);
int run_eval(const EvalOptions& o);
int run_sample(const SampleOptions& o);
int run_inspect(const InspectOptions& o);

}  // namespace effhmm::cli
