#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mobility {

// Shortest decimal text that parses back to exactly `value`; "nan"/"inf" for
// non-finite values.
std::string format_number(double value);

// Fixed-point text with `digits` decimals, used for human-facing tables.
std::string format_fixed(double value, int digits);

// Strict full-string parse; throws DataError on trailing junk.
double parse_number(std::string_view text);
long long parse_integer(std::string_view text);

// Splits an unquoted CSV line on commas (trailing '\r' removed).
std::vector<std::string_view> split_csv(std::string_view line);

}  // namespace mobility
