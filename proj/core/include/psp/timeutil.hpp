#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace psp {

/// A UTC instant with seconds precision.
struct UtcTime {
    std::int64_t seconds = 0;  // since 1970-01-01T00:00:00Z

    auto operator<=>(const UtcTime&) const = default;
};

/// Parses "YYYY-MM-DDTHH:MM:SSZ" or the date-only form "YYYY-MM-DD"
/// (interpreted as midnight UTC). Throws ParseError otherwise.
UtcTime parse_utc(std::string_view text);

/// Renders as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_utc(UtcTime t);

/// Half-open interval [start, end).
struct TimeWindow {
    UtcTime start;
    UtcTime end;

    bool contains(UtcTime t) const { return start <= t && t < end; }
    bool operator==(const TimeWindow&) const = default;
};

}  // namespace psp
