#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace gazebio {

/// Shortest round-trip decimal form (std::to_chars). Locale-independent and
/// deterministic, so serialized files are byte-stable and parse back exactly.
inline std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return v;
}

inline std::optional<long> parse_long(std::string_view s) {
    long v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return v;
}

}  // namespace gazebio
