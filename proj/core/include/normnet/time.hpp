#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace normnet {

// Seconds since the Unix epoch, UTC. All corpus timestamps use this.
using Timestamp = std::int64_t;

// Sentinel cutoff meaning "include everything".
inline constexpr Timestamp kNoCutoff = std::numeric_limits<Timestamp>::max();

struct CivilTime {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
  int second = 0;
};

Timestamp to_timestamp(const CivilTime& c);
CivilTime to_civil(Timestamp t);

// Jan 1 00:00:00 UTC of the given year.
Timestamp year_start(int year);
// First instant of the given calendar month.
Timestamp month_start(int year, int month);

int year_of(Timestamp t);
int month_of(Timestamp t);

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS" and "YYYY-MM-DD HH:MM:SS",
// with an optional trailing "Z". Throws ValidationError on anything else.
Timestamp parse_timestamp(std::string_view text);

// Canonical form "YYYY-MM-DDTHH:MM:SSZ"; kNoCutoff renders as "final".
std::string format_timestamp(Timestamp t);

// "YYYY-MM" helpers for monthly series.
std::string format_month(int year, int month);
void parse_month(std::string_view text, int& year, int& month);

}  // namespace normnet
