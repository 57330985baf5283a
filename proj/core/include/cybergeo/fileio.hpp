#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

namespace cybergeo {

// Throws InputError when the file cannot be opened.
std::ifstream open_input(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames it over `path`, so a
// failed run never leaves a partially written output behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace cybergeo
