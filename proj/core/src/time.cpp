#include "dalert/time.hpp"

#include <charconv>
#include <cstdio>

#include "dalert/error.hpp"

namespace dalert {
namespace {

using namespace std::chrono;

[[noreturn]] void bad(std::string_view text, const char* why) {
  throw Error(ErrorCode::InvalidInput, std::string(text), why);
}

int digits(std::string_view text, std::size_t& pos, std::size_t count) {
  if (pos + count > text.size()) bad(text, "truncated timestamp");
  int value = 0;
  for (std::size_t i = 0; i < count; ++i) {
    char c = text[pos + i];
    if (c < '0' || c > '9') bad(text, "expected digit");
    value = value * 10 + (c - '0');
  }
  pos += count;
  return value;
}

void expect(std::string_view text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c) bad(text, "unexpected character");
  ++pos;
}

}  // namespace

OffsetTime parse_datetime(std::string_view text) {
  std::size_t pos = 0;
  int y = digits(text, pos, 4);
  expect(text, pos, '-');
  int mo = digits(text, pos, 2);
  expect(text, pos, '-');
  int d = digits(text, pos, 2);
  expect(text, pos, 'T');
  int h = digits(text, pos, 2);
  expect(text, pos, ':');
  int mi = digits(text, pos, 2);
  expect(text, pos, ':');
  int s = digits(text, pos, 2);

  int millis = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    int scale = 100;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      millis += (text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
    if (pos == start) bad(text, "empty fraction");
  }

  int offset = 0;
  if (pos < text.size() && text[pos] == 'Z') {
    ++pos;
  } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    int sign = text[pos] == '-' ? -1 : 1;
    ++pos;
    int oh = digits(text, pos, 2);
    expect(text, pos, ':');
    int om = digits(text, pos, 2);
    if (oh > 23 || om > 59) bad(text, "offset out of range");
    offset = sign * (oh * 60 + om);
  } else {
    bad(text, "missing UTC offset");
  }
  if (pos != text.size()) bad(text, "trailing characters");

  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) bad(text, "field out of range");

  auto local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + milliseconds{millis};
  return OffsetTime{local - minutes{offset}, offset};
}

std::string format_datetime(UtcTime utc, int offset_minutes) {
  auto local = utc + minutes{offset_minutes};
  auto day_point = floor<days>(local);
  year_month_day ymd{day_point};
  hh_mm_ss<milliseconds> tod{local - day_point};

  char buf[48];
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                        static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                        static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                        static_cast<int>(tod.seconds().count()));
  std::string out(buf, static_cast<std::size_t>(n));
  if (auto ms = tod.subseconds().count(); ms != 0) {
    std::snprintf(buf, sizeof buf, ".%03d", static_cast<int>(ms));
    out += buf;
  }
  int abs_off = offset_minutes < 0 ? -offset_minutes : offset_minutes;
  std::snprintf(buf, sizeof buf, "%c%02d:%02d", offset_minutes < 0 ? '-' : '+', abs_off / 60, abs_off % 60);
  out += buf;
  return out;
}

std::string format_utc(UtcTime utc) {
  std::string out = format_datetime(utc, 0);
  out.resize(out.size() - 6);
  out += 'Z';
  return out;
}

UtcTime now_utc() { return floor<milliseconds>(system_clock::now()); }

}  // namespace dalert
