#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dramanet::io {

/// Throws FormatError if the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file then renames over `path`. Throws Error with
/// the path on failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Regular files in `dir` with the given extension, sorted by filename.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              const std::string& extension);

}  // namespace dramanet::io
