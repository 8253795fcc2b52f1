#include "effhmm/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

namespace effhmm {

using nlohmann::json;

namespace {

json row_to_json(std::span<const double> row) { return json(std::vector<double>(row.begin(), row.end())); }

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

std::size_t require_count(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ParseError(std::string("field '") + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> read_row(const json& v, std::size_t expected, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  if (v.size() != expected) {
    throw ParseError(where + ": expected " + std::to_string(expected) + " entries, found " +
                     std::to_string(v.size()));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) {
      throw ParseError(where + " entry " + std::to_string(k + 1) + ": expected a number");
    }
    out.push_back(v[k].get<double>());
  }
  return out;
}

Matrix read_matrix(const json& obj, const char* key, std::size_t rows, std::size_t cols) {
  const json& v = require(obj, key);
  if (!v.is_array() || v.size() != rows) {
    throw ParseError(std::string("field '") + key + "': expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = read_row(v[r], cols, std::string("field '") + key + "' row " + std::to_string(r + 1));
    std::copy(row.begin(), row.end(), m.row(r).begin());
  }
  return m;
}

// Byte offset to 1-based line number within text.
std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

std::string model_to_json(const Model& model) {
  const std::size_t n = model.num_states();
  const std::size_t m = model.num_symbols();
  json doc;
  doc["variant"] = std::string(to_string(model.variant()));
  doc["n_states"] = n;
  doc["n_symbols"] = m;
  doc["pi"] = row_to_json(model.initial());
  json a = json::array(), b = json::array(), c = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    a.push_back(row_to_json(model.transition().row(i)));
    b.push_back(row_to_json(model.emission().row(i)));
    json ci = json::array();
    for (std::size_t h = 0; h < m; ++h) ci.push_back(row_to_json(model.evidence_link().row(i, h)));
    c.push_back(std::move(ci));
  }
  doc["a"] = std::move(a);
  doc["b"] = std::move(b);
  doc["c"] = std::move(c);
  return doc.dump(2) + "\n";
}

void save_model(const Model& model, std::ostream& out) { out << model_to_json(model); }

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  save_model(model, out);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

Model parse_model(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError("model JSON syntax error at line " + std::to_string(line_of(json_text, e.byte)) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("model JSON must be an object");

  const json& variant_field = require(doc, "variant");
  if (!variant_field.is_string()) throw ParseError("field 'variant' must be a string");
  const Variant variant = parse_variant(variant_field.get<std::string>());
  const std::size_t n = require_count(doc, "n_states");
  const std::size_t m = require_count(doc, "n_symbols");

  auto pi = read_row(require(doc, "pi"), n, "field 'pi'");
  Matrix a = read_matrix(doc, "a", n, n);
  Matrix b = read_matrix(doc, "b", n, m);

  Tensor3 c(n, m, m, 1.0);
  // The baseline variant may omit "c"; its link table is all ones.
  if (variant == Variant::Standard && !doc.contains("c")) {
    return Model(variant, std::move(pi), std::move(a), std::move(b), std::move(c));
  }
  const json& cv = require(doc, "c");
  if (!cv.is_array() || cv.size() != n) {
    throw ParseError("field 'c': expected " + std::to_string(n) + " state tables");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string where = "field 'c' state " + std::to_string(i + 1);
    if (!cv[i].is_array() || cv[i].size() != m) {
      throw ParseError(where + ": expected " + std::to_string(m) + " rows");
    }
    for (std::size_t h = 0; h < m; ++h) {
      auto row = read_row(cv[i][h], m, where + " row " + std::to_string(h + 1));
      std::copy(row.begin(), row.end(), c.row(i, h).begin());
    }
  }
  return Model(variant, std::move(pi), std::move(a), std::move(b), std::move(c));
}

Model load_model(std::string_view json_text) {
  Model model = parse_model(json_text);
  auto report = validate(model);
  if (!report.ok()) throw ModelValidationError(std::move(report));
  return model;
}

Model load_model(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_model(text);
}

Model load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file '" + path.string() + "'");
  try {
    return load_model(in);
  } catch (const ModelValidationError&) {
    throw;
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace effhmm
