#include "manifest.hpp"

#include <array>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "effhmm/errors.hpp"

namespace effhmm::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);

  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

Manifest::Manifest(std::string command) : command_(std::move(command)) {}

void Manifest::flag(const std::string& name, nlohmann::json value) { flags_[name] = std::move(value); }

void Manifest::seed(std::uint64_t value) { seed_ = value; }

void Manifest::input(const std::filesystem::path& path) {
  inputs_.push_back({{"path", path.generic_string()}, {"sha256", sha256_file(path)}});
}

void Manifest::artifact(const std::filesystem::path& path) { artifacts_.push_back(path.generic_string()); }

nlohmann::json Manifest::to_json() const {
  return {{"tool", "effhmm"},
          {"version", EFFHMM_VERSION},
          {"command", command_},
          {"flags", flags_},
          {"seed", seed_},
          {"inputs", inputs_},
          {"artifacts", artifacts_}};
}

void Manifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << to_json().dump(2) << '\n';
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  auto p = output;
  p.replace_extension(".manifest.json");
  return p;
}

}  // namespace effhmm::cli
