#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace polarlens::csv {

/// Splits one RFC 4180 record. Embedded newlines are not supported.
std::vector<std::string> split_line(std::string_view line);

std::string escape(std::string_view field);

/// Reads a whole CSV stream, checks the header matches `expected_header`
/// exactly and returns the data rows. Blank lines are skipped.
std::vector<std::vector<std::string>> read_table(std::istream& in,
                                                 const std::vector<std::string>& expected_header);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

} // namespace polarlens::csv
