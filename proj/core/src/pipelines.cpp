#include "effhmm/pipelines.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

#include "effhmm/errors.hpp"
#include "effhmm/random.hpp"
#include "format.hpp"

namespace effhmm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

ParseError line_error(std::size_t line, const std::string& what) {
  return ParseError("line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view field, std::size_t line, std::string_view name) {
  double value = 0.0;
  const auto* begin = field.data();
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw line_error(line, "cannot parse " + std::string(name) + " '" + std::string(field) + "'");
  }
  return value;
}

long long parse_integer(std::string_view field, std::size_t line, std::string_view name) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    throw line_error(line, "cannot parse " + std::string(name) + " '" + std::string(field) + "'");
  }
  return value;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Calls fn(line_number, text) for every nonblank line that is not a comment.
template <typename Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    fn(number, line);
  }
}

}  // namespace

TrendSymbol trend_between(int previous, int next) {
  if (next > previous) return TrendSymbol::Increase;
  if (next < previous) return TrendSymbol::Decrease;
  return TrendSymbol::NoChange;
}

// ---------------------------------------------------------------- Iris

BinSpec fit_bins(std::span<const IrisRecord> records, int bin_count) {
  if (records.empty()) throw DataError("cannot fit bins to an empty record list");
  if (bin_count < 1) throw DataError("bin count must be positive");
  static constexpr std::array<const char*, kIrisAttributes> kNames = {
      "sepal length", "sepal width", "petal length", "petal width"};
  BinSpec spec;
  for (std::size_t a = 0; a < kIrisAttributes; ++a) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& r : records) {
      lo = std::min(lo, r.measurements[a]);
      hi = std::max(hi, r.measurements[a]);
    }
    if (!(hi > lo)) {
      throw DegenerateError(std::string("degenerate range for ") + kNames[a] + ": every value is " +
                            detail::format_number(lo));
    }
    spec.ranges[a] = AttributeRange{lo, hi, bin_count};
  }
  return spec;
}

int bin_index(double value, IrisAttribute attribute, const BinSpec& spec) {
  const AttributeRange& r = spec.ranges[static_cast<std::size_t>(attribute)];
  // Values within 1e-9 bin widths of an upper boundary belong to the lower
  // bin; without it 6.1 = 4.3 + 5 * 0.36 lands one bin too high.
  constexpr double kBoundarySnap = 1e-9;
  const double position = (value - r.min) / r.bin_width();
  const double k = std::ceil(position - kBoundarySnap);
  return static_cast<int>(std::clamp(k, 1.0, static_cast<double>(r.bin_count)));
}

ObservationSequence trend_sequence_from_bins(std::span<const int> bins) {
  if (bins.size() < 2) throw DataError("a trend sequence needs at least two values");
  std::vector<Symbol> out;
  out.reserve(bins.size() - 1);
  for (std::size_t i = 0; i + 1 < bins.size(); ++i) out.push_back(to_symbol(trend_between(bins[i], bins[i + 1])));
  return ObservationSequence(std::move(out));
}

ObservationSequence iris_trend_sequence(const IrisRecord& record, const BinSpec& spec) {
  std::array<int, kIrisAttributes> bins{};
  for (std::size_t a = 0; a < kIrisAttributes; ++a) {
    bins[a] = bin_index(record.measurements[a], static_cast<IrisAttribute>(a), spec);
  }
  return trend_sequence_from_bins(bins);
}

std::vector<IrisRecord> read_iris_csv(std::istream& in) {
  std::vector<IrisRecord> out;
  bool first = true;
  for_each_data_line(in, [&](std::size_t number, std::string_view line) {
    const auto fields = split(line, ',');
    if (first) {
      first = false;
      if (lower(fields[0]) == "sepal_length") return;
    }
    if (fields.size() != 5) {
      throw line_error(number, "expected 5 comma-separated fields, found " + std::to_string(fields.size()));
    }
    IrisRecord rec;
    static constexpr std::array<const char*, 4> kNames = {"sepal_length", "sepal_width",
                                                          "petal_length", "petal_width"};
    for (std::size_t a = 0; a < kIrisAttributes; ++a) {
      rec.measurements[a] = parse_double(fields[a], number, kNames[a]);
      if (!(rec.measurements[a] > 0.0)) {
        throw line_error(number, std::string(kNames[a]) + " must be positive");
      }
    }
    std::string species = lower(fields[4]);
    if (species.starts_with("iris-")) species.erase(0, 5);
    if (species == "versicolor") species = "versicolour";
    if (species != "setosa" && species != "versicolour" && species != "virginica") {
      throw line_error(number, "unknown species '" + std::string(fields[4]) + "'");
    }
    rec.species = ClassLabel(species);
    out.push_back(std::move(rec));
  });
  return out;
}

std::string bin_spec_to_string(const BinSpec& spec) {
  static constexpr std::array<const char*, kIrisAttributes> kNames = {
      "sepal_length", "sepal_width", "petal_length", "petal_width"};
  std::ostringstream os;
  for (std::size_t a = 0; a < kIrisAttributes; ++a) {
    const auto& r = spec.ranges[a];
    os << kNames[a] << ": min " << detail::format_number(r.min) << " max "
       << detail::format_number(r.max) << " bins " << r.bin_count << " width "
       << detail::format_number(r.bin_width()) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- Bounding boxes

double bounding_box_ratio(const PointFrame& frame) {
  double min_x = frame.points[0].x, max_x = min_x;
  double min_y = frame.points[0].y, max_y = min_y;
  for (const Point& p : frame.points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double width = max_x - min_x;
  const double height = max_y - min_y;
  if (!(width > 0.0) || !(height > 0.0)) {
    throw DegenerateError("degenerate box: width " + detail::format_number(width) + ", height " +
                          detail::format_number(height));
  }
  return height / width;
}

int ratio_group(double ratio) {
  for (int k = 1; k <= 10; ++k) {
    if (ratio < k / 10.0) return k;
  }
  return 11;
}

ObservationSequence ratio_trend_sequence(std::span<const double> ratios) {
  if (ratios.size() < 2) throw DataError("a ratio trend sequence needs at least two frames");
  std::vector<int> groups;
  groups.reserve(ratios.size());
  for (double r : ratios) groups.push_back(ratio_group(r));
  return trend_sequence_from_bins(groups);
}

std::vector<Activity> read_track_csv(std::istream& in) {
  std::vector<Activity> out;
  long long last_frame = 0;
  bool first = true;
  for_each_data_line(in, [&](std::size_t number, std::string_view line) {
    const auto fields = split(line, ',');
    if (first) {
      first = false;
      if (lower(fields[0]) == "label") return;
    }
    if (fields.size() != 12) {
      throw line_error(number, "expected label,frame and five x,y pairs (12 fields), found " +
                                   std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw line_error(number, "empty label");
    const long long frame = parse_integer(fields[1], number, "frame");
    PointFrame pf;
    for (std::size_t p = 0; p < 5; ++p) {
      pf.points[p].x = parse_double(fields[2 + 2 * p], number, "x" + std::to_string(p + 1));
      pf.points[p].y = parse_double(fields[3 + 2 * p], number, "y" + std::to_string(p + 1));
    }
    double ratio = 0.0;
    try {
      ratio = bounding_box_ratio(pf);
    } catch (const DegenerateError& e) {
      throw DegenerateError("line " + std::to_string(number) + ": " + e.what());
    }
    const bool continues = !out.empty() && out.back().label.name() == fields[0] && frame > last_frame;
    if (!continues) out.push_back(Activity{ClassLabel(std::string(fields[0])), {}, number});
    out.back().ratios.push_back(ratio);
    last_frame = frame;
  });
  return out;
}

std::vector<Activity> read_ratio_csv(std::istream& in) {
  std::vector<Activity> out;
  for_each_data_line(in, [&](std::size_t number, std::string_view line) {
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) throw line_error(number, "expected 'label,r1 r2 ...'");
    const std::string_view label = trim(line.substr(0, comma));
    if (label.empty()) throw line_error(number, "empty label");
    Activity act{ClassLabel(std::string(label)), {}, number};
    for (std::string_view tok : split_whitespace(line.substr(comma + 1))) {
      const double r = parse_double(tok, number, "ratio");
      if (!(r > 0.0)) throw line_error(number, "ratios must be positive");
      act.ratios.push_back(r);
    }
    out.push_back(std::move(act));
  });
  return out;
}

// ---------------------------------------------------------------- Sequence files

LabeledDataset read_sequence_file(std::istream& in) {
  std::vector<LabeledSequence> items;
  std::optional<std::size_t> declared;
  std::size_t largest = 0;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      if (body.starts_with("symbols:")) {
        const long long m = parse_integer(trim(body.substr(8)), number, "symbol count");
        if (m < 1) throw line_error(number, "symbol count must be positive");
        declared = static_cast<std::size_t>(m);
      }
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) throw line_error(number, "expected 'label,s1 s2 ...'");
    const std::string_view label = trim(line.substr(0, comma));
    if (label.empty()) throw line_error(number, "empty label");
    std::vector<long long> symbols;
    for (std::string_view tok : split_whitespace(line.substr(comma + 1))) {
      const long long s = parse_integer(tok, number, "symbol");
      if (s < 1) throw line_error(number, "symbols are 1-based, found " + std::to_string(s));
      if (declared && static_cast<std::size_t>(s) > *declared) {
        throw line_error(number, "symbol " + std::to_string(s) + " exceeds the declared alphabet of " +
                                     std::to_string(*declared));
      }
      largest = std::max(largest, static_cast<std::size_t>(s));
      symbols.push_back(s);
    }
    if (symbols.empty()) throw line_error(number, "sequence for '" + std::string(label) + "' is empty");
    items.push_back({ObservationSequence::from_one_based(symbols), ClassLabel(std::string(label))});
  }
  return LabeledDataset(std::move(items), declared.value_or(std::max<std::size_t>(largest, 1)));
}

LabeledDataset read_sequence_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open sequence file '" + path.string() + "'");
  try {
    return read_sequence_file(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_sequence_file(std::ostream& out, const LabeledDataset& data) {
  out << "# symbols: " << data.num_symbols() << '\n';
  for (const auto& item : data.items()) {
    out << item.label.name() << ',';
    for (std::size_t t = 0; t < item.sequence.size(); ++t) {
      if (t) out << ' ';
      out << item.sequence[t] + 1;
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------- Sampling

SampledSequence sample_sequence(const Model& model, std::size_t length, std::uint64_t seed) {
  if (length < 1) throw DataError("sample length must be at least 1");
  Rng rng(seed);
  const std::size_t m = model.num_symbols();
  SampledSequence out;
  out.states.reserve(length);
  std::vector<Symbol> symbols;
  symbols.reserve(length);

  State q = rng.categorical(model.initial());
  out.states.push_back(q);
  symbols.push_back(rng.categorical(model.emission().row(q)));

  std::vector<double> weights(m);
  for (std::size_t t = 1; t < length; ++t) {
    const State next = rng.categorical(model.transition().row(q));
    const Symbol current = symbols.back();
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      weights[k] = model.emission()(next, k) * model.link(q, current, k);
      total += weights[k];
    }
    if (!(total > 0.0)) {
      throw DegenerateError("unsamplable: emission row of state " + std::to_string(next + 1) +
                            " and link row (state " + std::to_string(q + 1) + ", symbol " +
                            std::to_string(current + 1) + ") have disjoint support");
    }
    symbols.push_back(rng.categorical(weights));
    out.states.push_back(next);
    q = next;
  }
  out.observations = ObservationSequence(std::move(symbols));
  return out;
}

}  // namespace effhmm
