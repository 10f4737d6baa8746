#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cosched {

// All schedule arithmetic runs on whole minutes since the Unix epoch (UTC).
// Decimal hours are a display/reporting unit only.
using Minutes = std::int64_t;

// Coordinates are kept as integer microdegrees so CSV round-trips are exact.
using MicroDeg = std::int64_t;

constexpr Minutes kMinutesPerHour = 60;
constexpr Minutes kMinutesPerDay = 24 * kMinutesPerHour;
constexpr Minutes kMinutesPerWeek = 7 * kMinutesPerDay;

constexpr double to_hours(Minutes m) { return static_cast<double>(m) / 60.0; }

// Proleptic Gregorian day count relative to 1970-01-01.
constexpr std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr Minutes minutes_from_civil(int year, unsigned month, unsigned day,
                                     int hour = 0, int minute = 0) {
  return days_from_civil(year, month, day) * kMinutesPerDay +
         hour * kMinutesPerHour + minute;
}

struct CivilTime {
  int year;
  unsigned month, day, hour, minute;
};

CivilTime civil_from_minutes(Minutes m);

// "YYYY-MM-DD HH:MM:SS" with seconds always emitted as 00.
std::string format_timestamp(Minutes m);

// Strict parse of the format above; rejects non-zero seconds and invalid
// calendar dates. Returns nullopt on any deviation.
std::optional<Minutes> parse_timestamp(std::string_view text);

// Canonical decimal degree text: integer part plus up to six fractional
// digits with trailing zeros trimmed ("1.277109", "1.5", "0", "-0.25").
std::string format_microdeg(MicroDeg v);

// Accepts an optional sign, an integer part and at most six fractional
// digits; enforces |value| <= limit_microdeg. Returns nullopt otherwise.
std::optional<MicroDeg> parse_microdeg(std::string_view text,
                                       MicroDeg limit_microdeg);

}  // namespace cosched
