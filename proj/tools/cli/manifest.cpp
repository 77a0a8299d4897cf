#include <cli/manifest.hpp>

#include "CLI11.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace evpf::cli {

void Manifest::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

void Manifest::set(std::string key, double value) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  set(std::move(key), std::string(buf.data(), res.ptr));
}

void Manifest::set(std::string key, std::uint64_t value) {
  set(std::move(key), std::to_string(value));
}

std::string Manifest::to_text() const {
  std::string out = "# evpf run manifest\n";
  for (const auto& [k, v] : entries_) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

void Manifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << to_text();
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

bool is_informational_key(std::string_view key) noexcept {
  return key == "command" || key == "tool-version" || key.starts_with("output-");
}

std::vector<std::string> config_file_args(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config " + path.string());
  }
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::ParseError& e) {
    throw std::runtime_error("bad config " + path.string() + ": " + e.what());
  }
  std::vector<std::string> args;
  for (const auto& item : items) {
    if (!item.parents.empty() || is_informational_key(item.name)) {
      continue;
    }
    std::string value;
    for (const auto& part : item.inputs) {
      if (!value.empty()) {
        value += ' ';
      }
      value += part;
    }
    args.push_back("--" + item.name);
    args.push_back(value);
  }
  return args;
}

}  // namespace evpf::cli
