#pragma once

#include <filesystem>
#include <string>

namespace evpf::cli {

/// Lower-case hex SHA-256 of a file's bytes. Throws std::runtime_error if unreadable.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace evpf::cli
