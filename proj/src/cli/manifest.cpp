#include "mint/cli/manifest.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

namespace mint::cli {

nlohmann::json to_json(const RunManifest& m) {
  return {
      {"command", m.command},
      {"argv", m.argv},
      {"working_directory", m.working_directory},
      {"parameters", m.parameters},
      {"seed", m.seed},
      {"version", m.version},
      {"input_sha256", m.input_sha256},
      {"duration_seconds", m.duration_seconds},
  };
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.argv = j.at("argv").get<std::vector<std::string>>();
  m.working_directory = j.value("working_directory", "");
  m.parameters = j.value("parameters", nlohmann::json::object());
  m.seed = j.at("seed").get<std::uint64_t>();
  m.version = j.value("version", "");
  m.input_sha256 = j.value("input_sha256", std::map<std::string, std::string>{});
  m.duration_seconds = j.value("duration_seconds", 0.0);
  return m;
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  return manifest_from_json(nlohmann::json::parse(in));
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 unavailable");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    char two[3];
    std::snprintf(two, sizeof two, "%02x", digest[i]);
    hex += two;
  }
  return hex;
}

const char* tool_version() { return MINT_VERSION; }

}  // namespace mint::cli
