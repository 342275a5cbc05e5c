#pragma once

#include <string>

namespace semiflow {

// Shortest round-trip decimal text for a double, locale independent.
// Replays byte-identically across platforms with the same libc++/libstdc++.
std::string fmt_double(double v);

// Fixed significant-digit form used in human-facing summaries.
std::string fmt_double_sig(double v, int digits);

}  // namespace semiflow
