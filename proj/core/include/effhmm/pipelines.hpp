#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "effhmm/inference.hpp"
#include "effhmm/model.hpp"

namespace effhmm {

// Three-symbol trend alphabet shared by both pipelines. The enumerator values
// are the 1-based symbol numbers written to sequence files.
enum class TrendSymbol { Increase = 1, Decrease = 2, NoChange = 3 };

inline constexpr std::size_t kTrendAlphabetSize = 3;

inline Symbol to_symbol(TrendSymbol s) { return static_cast<Symbol>(s) - 1; }
// Compares consecutive bin or group indices.
TrendSymbol trend_between(int previous, int next);

// ---------------------------------------------------------------- Iris

enum class IrisAttribute { SepalLength = 0, SepalWidth = 1, PetalLength = 2, PetalWidth = 3 };
inline constexpr std::size_t kIrisAttributes = 4;

struct IrisRecord {
  std::array<double, kIrisAttributes> measurements{};  // cm, in IrisAttribute order
  ClassLabel species{"setosa"};

  double operator[](IrisAttribute a) const { return measurements[static_cast<std::size_t>(a)]; }
};

struct AttributeRange {
  double min = 0.0;
  double max = 0.0;
  int bin_count = 10;
  double bin_width() const { return (max - min) / bin_count; }
};

struct BinSpec {
  std::array<AttributeRange, kIrisAttributes> ranges;
};

inline constexpr int kIrisBinCount = 10;

// Per-attribute min/max over the records, ten equal-width bins. Throws
// DegenerateError ("degenerate range") on a constant attribute.
BinSpec fit_bins(std::span<const IrisRecord> records, int bin_count = kIrisBinCount);

// Bin 1 is [min, min+w]; bin k >= 2 is (min+(k-1)w, min+kw]. Values outside
// the range clamp to the end bins. Returns 1..bin_count.
int bin_index(double value, IrisAttribute attribute, const BinSpec& spec);

// Trends between consecutive attribute bins in the order
// sepal length -> sepal width -> petal length -> petal width.
ObservationSequence iris_trend_sequence(const IrisRecord& record, const BinSpec& spec);
ObservationSequence trend_sequence_from_bins(std::span<const int> bins);

// Header `sepal_length,sepal_width,petal_length,petal_width,species`. Species
// names are case-insensitive and may carry the UCI "Iris-" prefix;
// "versicolor" is accepted for "versicolour". Headerless UCI files also load.
std::vector<IrisRecord> read_iris_csv(std::istream& in);
std::string bin_spec_to_string(const BinSpec& spec);

// ---------------------------------------------------------------- Bounding-box ratios

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Hands, feet and head tips.
struct PointFrame {
  std::array<Point, 5> points;
};

// Height / width of the tight axis-aligned box. DegenerateError
// ("degenerate box") on zero width or height.
double bounding_box_ratio(const PointFrame& frame);

// 1 for ratio < 0.1, k for ratio in [0.1(k-1), 0.1k), 11 for ratio >= 1.0.
int ratio_group(double ratio);

// Group-to-group trends; length is ratios.size() - 1. DataError on fewer
// than two ratios.
ObservationSequence ratio_trend_sequence(std::span<const double> ratios);

struct Activity {
  ClassLabel label;
  std::vector<double> ratios;
  std::size_t first_line = 0;  // 1-based source line, for messages
};

// `label,frame,x1,y1,...,x5,y5`. Rows with the same label and increasing
// frame numbers form one activity.
std::vector<Activity> read_track_csv(std::istream& in);
// `label,r1 r2 ... rT`, one activity per line.
std::vector<Activity> read_ratio_csv(std::istream& in);

// ---------------------------------------------------------------- Sequence files

// `label,s1 s2 ... sT` with 1-based symbols. An optional `# symbols: M`
// line fixes the alphabet; otherwise it is the largest symbol seen.
LabeledDataset read_sequence_file(std::istream& in);
LabeledDataset read_sequence_file(const std::filesystem::path& path);
void write_sequence_file(std::ostream& out, const LabeledDataset& data);

// ---------------------------------------------------------------- Sampling

struct SampledSequence {
  ObservationSequence observations;
  std::vector<State> states;
};

// q_1 ~ pi, O_1 ~ B(q_1, .); then q_{t+1} ~ A(q_t, .) and O_{t+1} drawn
// proportionally to b_{q_{t+1}}(k) c_{q_t}(O_t, k). The model's own score is
// not a normalized law, so the product is renormalized per step.
// DegenerateError ("unsamplable") when that product is zero for every k.
SampledSequence sample_sequence(const Model& model, std::size_t length, std::uint64_t seed);

}  // namespace effhmm
