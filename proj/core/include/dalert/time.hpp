#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace dalert {

// All instants are kept in UTC at millisecond resolution.
using UtcTime = std::chrono::sys_time<std::chrono::milliseconds>;

// An instant together with the numeric UTC offset it was written with, so
// that "2013-09-25T07:05:02.917-05:00" survives a parse/format cycle.
struct OffsetTime {
  UtcTime utc{};
  int offset_minutes = 0;

  friend bool operator==(const OffsetTime&, const OffsetTime&) = default;
};

// Accepts YYYY-MM-DDThh:mm:ss[.fff...](Z|+hh:mm|-hh:mm). Fractions beyond
// milliseconds are truncated. Throws Error(InvalidInput) on bad input.
OffsetTime parse_datetime(std::string_view text);

// Local wall-clock rendering with a numeric offset. Milliseconds are
// written only when non-zero.
std::string format_datetime(UtcTime utc, int offset_minutes);
inline std::string format_datetime(const OffsetTime& t) {
  return format_datetime(t.utc, t.offset_minutes);
}

// UTC rendering with a trailing 'Z', used in JSON bodies and the event log.
std::string format_utc(UtcTime utc);

UtcTime now_utc();

}  // namespace dalert
