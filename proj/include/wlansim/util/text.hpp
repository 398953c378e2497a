#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wlansim::util {

// Locale-independent shortest round-trip formatting (std::to_chars), so CSV
// output is byte-stable across runs and platforms.
std::string format_double(double v);

// Quotes a CSV field only when it contains a comma, quote, or newline.
std::string csv_escape(std::string_view field);

std::string join(const std::vector<std::string>& parts, char sep);

std::vector<std::string> split(std::string_view s, char sep);

// Splits a CSV line honoring double-quoted fields.
std::vector<std::string> csv_split(std::string_view line);

}  // namespace wlansim::util
