#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace heq {

/// Decimal with 17 significant digits (%.17g).
std::string format_double(double v);

std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace heq
