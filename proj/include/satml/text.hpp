#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace satml {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);
double parse_double(std::string_view text);
std::uint64_t parse_u64(std::string_view text);

std::vector<std::string_view> split(std::string_view s, char sep);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes,
                    std::uint64_t h = 0xcbf29ce484222325ULL);

} // namespace satml
