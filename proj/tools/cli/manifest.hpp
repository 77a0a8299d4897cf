#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace evpf::cli {

/// Ordered `key=value` record of a run. Keys are the long flag names of the
/// command that produced it, so the file doubles as a config file.
class Manifest {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, double value);  // shortest exact round-trip form
  void set(std::string key, std::uint64_t value);

  [[nodiscard]] std::string to_text() const;
  void write(const std::filesystem::path& path) const;

  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Keys written into manifests for information only (`command`,
/// `tool-version`, `output-*` digests); config loading skips them.
bool is_informational_key(std::string_view key) noexcept;

/// Reads a flat key=value config file into `--key value` arguments.
/// Throws std::runtime_error when the file cannot be read or parsed.
std::vector<std::string> config_file_args(const std::filesystem::path& path);

}  // namespace evpf::cli
