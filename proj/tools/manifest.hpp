#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace effhmm::cli {

// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

// Record of one command invocation. Holds no timestamps or absolute paths,
// so identical invocations write identical manifests.
class Manifest {
 public:
  explicit Manifest(std::string command);

  void flag(const std::string& name, nlohmann::json value);
  void seed(std::uint64_t value);
  void input(const std::filesystem::path& path);
  void artifact(const std::filesystem::path& path);

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  nlohmann::json flags_ = nlohmann::json::object();
  nlohmann::json seed_;
  nlohmann::json inputs_ = nlohmann::json::array();
  std::vector<std::string> artifacts_;
};

// `seqs.csv` -> `seqs.manifest.json`
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

}  // namespace effhmm::cli
