#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace impactfield::csv {

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);
/// Four significant digits, for human-readable summaries.
std::string format_short(double x);

/// Quotes a field when it contains a comma, quote or line break.
std::string escape(std::string_view field);

/// Splits one CSV record, honouring double-quoted fields. Throws ParseError(line_no).
std::vector<std::string> split(std::string_view line, std::size_t line_no = 0);

/// Strict numeric parsing of a whole field; throws ParseError(line_no).
double parse_double(std::string_view field, std::size_t line_no = 0);
long long parse_integer(std::string_view field, std::size_t line_no = 0);

}  // namespace impactfield::csv
