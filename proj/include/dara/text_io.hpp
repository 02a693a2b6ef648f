#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dara {

/// Shortest decimal that parses back to the same double.
std::string format_exact(double value);

/// printf-style %.{digits}g.
std::string format_sig(double value, int digits = 6);

/// Whole-string decimal parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);

}  // namespace dara
