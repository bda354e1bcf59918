#pragma once

#include <string>
#include <string_view>

namespace mmc {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Parses a full token as a double; false on any trailing characters.
bool parse_double(std::string_view token, double& value);

}  // namespace mmc
