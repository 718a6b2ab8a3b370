#pragma once

#include <string>

namespace islandap {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace islandap
