#pragma once

#include <string>

namespace qid {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

}  // namespace qid
