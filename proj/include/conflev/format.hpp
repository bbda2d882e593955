#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace conflev {

// Shortest decimal string that round-trips to the same double.
inline std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Percent display with round-half-away-from-zero at `decimals` places.
// Display only: stored confidences are never rounded.
inline std::string format_percent(double confidence, int decimals = 1) {
    const double factor = std::pow(10.0, decimals);
    const double rounded = std::round(confidence * 100.0 * factor) / factor;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f%%", decimals, rounded);
    return buf;
}

}  // namespace conflev
