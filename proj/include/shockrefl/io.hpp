#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace shockrefl {

/// Writes `content` to `<path>.tmp` and renames it over `path`, so readers never observe a
/// partially written file. Throws IoError when the directory is missing or not writable.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace shockrefl
