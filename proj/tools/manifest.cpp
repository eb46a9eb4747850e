#include "manifest.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "pedmotion/error.hpp"
#include "pedmotion/motion_io.hpp"

#ifndef PEDMOTION_VERSION
#define PEDMOTION_VERSION "0.0.0"
#endif

namespace pedmotion::cli {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCode::Processing, "sha256 failed");
  }
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

void RunRecord::input(const std::filesystem::path& path, std::string_view contents) {
  inputs_.push_back({path.generic_string(), sha256_hex(contents)});
}

void RunRecord::output(const std::filesystem::path& path, std::string_view contents) {
  outputs_.push_back({path.generic_string(), sha256_hex(contents)});
}

std::string RunRecord::manifest_line(const std::string& command, const std::string& effective_config,
                                     std::optional<std::uint64_t> seed) const {
  auto list = [](std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.path < b.path; });
    Json out = Json::array();
    for (const Entry& e : entries) out.push_back(Json{{"path", e.path}, {"sha256", e.sha256}});
    return out;
  };
  Json j{{"tool", "pedmotion"},
         {"version", PEDMOTION_VERSION},
         {"command", command},
         {"config_sha256", sha256_hex(effective_config)}};
  if (seed) j["seed"] = *seed;
  j["inputs"] = list(inputs_);
  j["outputs"] = list(outputs_);
  return dump_line(j);
}

void append_manifest(const std::filesystem::path& path, const std::string& line) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) fail(ErrorCode::Processing, fmt::format("cannot open manifest '{}'", path.string()));
  out << line << '\n';
}

}  // namespace pedmotion::cli
