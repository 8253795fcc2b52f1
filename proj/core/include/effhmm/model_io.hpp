#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "effhmm/errors.hpp"
#include "effhmm/model.hpp"

namespace effhmm {

// Thrown by load_model when a well-formed file describes an invalid model.
class ModelValidationError : public DataError {
 public:
  explicit ModelValidationError(ValidationReport report)
      : DataError("model failed validation:\n" + report.to_string()), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// JSON document:
//   {"variant": "eff"|"standard", "n_states": N, "n_symbols": M,
//    "pi": [N], "a": [N][N], "b": [N][M], "c": [N][M][M]}
// Numbers are written in shortest round-trip form, so save/load is exact.
std::string model_to_json(const Model& model);
void save_model(const Model& model, std::ostream& out);
void save_model(const Model& model, const std::filesystem::path& path);

// Parses without checking stochastic constraints (used by `inspect`).
Model parse_model(std::string_view json_text);

// Parses and validates; throws ParseError or ModelValidationError.
Model load_model(std::string_view json_text);
Model load_model(std::istream& in);
Model load_model_file(const std::filesystem::path& path);

}  // namespace effhmm
