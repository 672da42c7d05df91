#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace daleel::csv {

/// Parsed CSV file: rows of cells, header removed and already checked.
using Rows = std::vector<std::vector<std::string>>;

/// Reads a CSV file and checks the header matches `expected_header` exactly.
/// Blank lines are skipped; cells are whitespace-trimmed.
Rows read_table(const std::filesystem::path& path, const std::string& expected_header,
                const std::string& module);

std::vector<std::string> split_row(const std::string& line);

/// Shortest decimal that round-trips the value (std::to_chars).
std::string format_double(double v);

/// Strict numeric cell parsers; `where` names the row/column in errors.
double parse_double(const std::string& cell, const std::string& module, const std::string& where);
int parse_int(const std::string& cell, const std::string& module, const std::string& where);

} // namespace daleel::csv
