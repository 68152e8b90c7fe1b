#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace spatnet::csv {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

/// Splits one CSV record on commas. No quoting support; none of the project
/// formats need it.
std::vector<std::string_view> split(std::string_view line);

/// Reads a line, stripping a trailing '\r'. Returns false at end of input.
bool read_line(std::istream& in, std::string& line);

// Strict field parsers. Throw ParseError naming `line_no` on failure.
double parse_double(std::string_view field, std::size_t line_no);
std::int64_t parse_int(std::string_view field, std::size_t line_no);
std::uint64_t parse_uint(std::string_view field, std::size_t line_no);

}  // namespace spatnet::csv
