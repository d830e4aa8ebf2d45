#pragma once

#include <filesystem>
#include <string>

namespace qwalk {

// Fixed "%.12g" rendering so identical runs produce identical bytes.
std::string format_double(double value);

// Writes through a sibling temp file and renames into place, so a failure
// partway through a command never leaves a truncated output behind.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace qwalk
