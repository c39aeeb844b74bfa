#include "normnet/time.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "normnet/error.hpp"

namespace normnet {

namespace {

// Howard Hinnant's civil-calendar conversions; proleptic Gregorian.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  y = static_cast<int>(yy + (m <= 2));
}

bool is_leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

int days_in_month(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return kDays[m - 1];
}

int parse_int(std::string_view s, std::size_t pos, std::size_t len, std::string_view what,
              std::string_view full) {
  if (pos + len > s.size()) {
    throw ValidationError("bad timestamp '" + std::string(full) + "': truncated " +
                          std::string(what));
  }
  int value = 0;
  const char* first = s.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc{} || ptr != first + len) {
    throw ValidationError("bad timestamp '" + std::string(full) + "': non-numeric " +
                          std::string(what));
  }
  return value;
}

}  // namespace

Timestamp to_timestamp(const CivilTime& c) {
  return days_from_civil(c.year, c.month, c.day) * 86400 + c.hour * 3600 + c.minute * 60 +
         c.second;
}

CivilTime to_civil(Timestamp t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  CivilTime c;
  civil_from_days(days, c.year, c.month, c.day);
  c.hour = static_cast<int>(rem / 3600);
  c.minute = static_cast<int>((rem % 3600) / 60);
  c.second = static_cast<int>(rem % 60);
  return c;
}

Timestamp year_start(int year) { return to_timestamp({year, 1, 1, 0, 0, 0}); }

Timestamp month_start(int year, int month) { return to_timestamp({year, month, 1, 0, 0, 0}); }

int year_of(Timestamp t) { return to_civil(t).year; }

int month_of(Timestamp t) { return to_civil(t).month; }

Timestamp parse_timestamp(std::string_view text) {
  std::string_view s = text;
  if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
  if (s.size() != 10 && s.size() != 19) {
    throw ValidationError("bad timestamp '" + std::string(text) +
                          "': expected YYYY-MM-DD or YYYY-MM-DDTHH:MM:SS");
  }
  CivilTime c;
  c.year = parse_int(s, 0, 4, "year", text);
  c.month = parse_int(s, 5, 2, "month", text);
  c.day = parse_int(s, 8, 2, "day", text);
  if (s[4] != '-' || s[7] != '-') {
    throw ValidationError("bad timestamp '" + std::string(text) + "': expected '-' separators");
  }
  if (s.size() == 19) {
    if ((s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':') {
      throw ValidationError("bad timestamp '" + std::string(text) + "': expected T/: separators");
    }
    c.hour = parse_int(s, 11, 2, "hour", text);
    c.minute = parse_int(s, 14, 2, "minute", text);
    c.second = parse_int(s, 17, 2, "second", text);
  }
  if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > days_in_month(c.year, c.month) ||
      c.hour > 23 || c.minute > 59 || c.second > 60) {
    throw ValidationError("bad timestamp '" + std::string(text) + "': out-of-range field");
  }
  return to_timestamp(c);
}

std::string format_timestamp(Timestamp t) {
  if (t == kNoCutoff) return "final";
  const CivilTime c = to_civil(t);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                c.hour, c.minute, c.second);
  return buf;
}

std::string format_month(int year, int month) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

void parse_month(std::string_view text, int& year, int& month) {
  if (text.size() != 7 || text[4] != '-') {
    throw ValidationError("bad month '" + std::string(text) + "': expected YYYY-MM");
  }
  year = parse_int(text, 0, 4, "year", text);
  month = parse_int(text, 5, 2, "month", text);
  if (month < 1 || month > 12) {
    throw ValidationError("bad month '" + std::string(text) + "': out-of-range month");
  }
}

}  // namespace normnet
