#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tvewd {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

/// Strict parse of a whole field; throws DataError mentioning `context`.
double parse_double(std::string_view text, std::string_view context);
long long parse_integer(std::string_view text, std::string_view context);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view line, char separator);

/// Splits into lines, dropping a trailing '\r' on each and a final empty line.
std::vector<std::string_view> lines(std::string_view text);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace tvewd
