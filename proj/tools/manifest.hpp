#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pedmotion::cli {

std::string sha256_hex(std::string_view data);

/// Inputs and outputs touched by one subcommand run, hashed at record time.
class RunRecord {
 public:
  void input(const std::filesystem::path& path, std::string_view contents);
  void output(const std::filesystem::path& path, std::string_view contents);

  /// One NDJSON line: tool version, subcommand, config hash, seed and the
  /// hashed file lists (sorted by path).
  std::string manifest_line(const std::string& command, const std::string& effective_config,
                            std::optional<std::uint64_t> seed) const;

 private:
  struct Entry {
    std::string path;
    std::string sha256;
  };
  std::vector<Entry> inputs_;
  std::vector<Entry> outputs_;
};

void append_manifest(const std::filesystem::path& path, const std::string& line);

}  // namespace pedmotion::cli
