#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace wontfix {

using Timestamp = std::chrono::sys_seconds;

inline constexpr double kSecondsPerDay = 86400.0;

// Parses ISO 8601 date-times such as "2019-03-01T12:00:00Z",
// "2019-03-01T12:00:00.250Z" or "2019-03-01T14:00:00+02:00" into UTC.
// Fractional seconds are truncated. Throws std::invalid_argument.
Timestamp parse_timestamp(std::string_view text);

// Renders as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);

// Fractional days from `from` to `to` using exact 86,400-second days.
inline double days_between(Timestamp from, Timestamp to) {
    return static_cast<double>((to - from).count()) / kSecondsPerDay;
}

}  // namespace wontfix
