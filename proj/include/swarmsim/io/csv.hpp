#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace swarmsim {

/// Split one CSV line on commas; fields are trimmed of surrounding spaces.
std::vector<std::string> csv_split(const std::string& line);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

double parse_double(const std::string& field, const std::string& context);
long parse_long(const std::string& field, const std::string& context);

/// Whole file as lines (without newline characters); throws when unreadable.
std::vector<std::string> read_lines(const std::string& path);

std::string read_file(const std::string& path);

/// Write via a temp file in the same directory, then rename over the target.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace swarmsim
