#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <string_view>

namespace assemblynet {

/// Exact arithmetic for rates, token counts, and fractions. Keeps every
/// simulation quantity reproducible bit-for-bit across platforms.
using Ratio = boost::rational<std::int64_t>;

/// Accepts "42", "17/2", and decimals like "8.5" or "0.25".
Ratio parse_ratio(std::string_view text);

/// Canonical form: "n" when integral, else "n/d" reduced.
std::string format_ratio(const Ratio& r);

/// Smallest integer >= r. r must be non-negative.
std::int64_t ceil_ratio(const Ratio& r);

inline double to_double(const Ratio& r) {
    return boost::rational_cast<double>(r);
}

}  // namespace assemblynet
