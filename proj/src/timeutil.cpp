#include "cosched/timeutil.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>

namespace cosched {

namespace {

// Inverse of days_from_civil.
void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return !s.empty();
}

unsigned days_in_month(int year, unsigned month) {
  static constexpr std::array<unsigned, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                     31, 31, 30, 31, 30, 31};
  if (month == 2) {
    const bool leap =
        (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays[month - 1];
}

}  // namespace

CivilTime civil_from_minutes(Minutes m) {
  std::int64_t days = m / kMinutesPerDay;
  Minutes rem = m % kMinutesPerDay;
  if (rem < 0) {
    rem += kMinutesPerDay;
    --days;
  }
  CivilTime out{};
  civil_from_days(days, out.year, out.month, out.day);
  out.hour = static_cast<unsigned>(rem / kMinutesPerHour);
  out.minute = static_cast<unsigned>(rem % kMinutesPerHour);
  return out;
}

std::string format_timestamp(Minutes m) {
  const CivilTime c = civil_from_minutes(m);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u %02u:%02u:00", c.year,
                c.month, c.day, c.hour, c.minute);
  return buf;
}

std::optional<Minutes> parse_timestamp(std::string_view text) {
  // YYYY-MM-DD HH:MM:SS, fixed width.
  if (text.size() != 19) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || text[10] != ' ' || text[13] != ':' ||
      text[16] != ':') {
    return std::nullopt;
  }
  const std::string_view ys = text.substr(0, 4), ms = text.substr(5, 2),
                         ds = text.substr(8, 2), hs = text.substr(11, 2),
                         mins = text.substr(14, 2), ss = text.substr(17, 2);
  if (!all_digits(ys) || !all_digits(ms) || !all_digits(ds) ||
      !all_digits(hs) || !all_digits(mins) || !all_digits(ss)) {
    return std::nullopt;
  }
  const auto num = [](std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
  };
  const int year = num(ys);
  const unsigned month = static_cast<unsigned>(num(ms));
  const unsigned day = static_cast<unsigned>(num(ds));
  const int hour = num(hs);
  const int minute = num(mins);
  const int second = num(ss);
  if (month < 1 || month > 12) return std::nullopt;
  if (day < 1 || day > days_in_month(year, month)) return std::nullopt;
  if (hour > 23 || minute > 59) return std::nullopt;
  if (second != 0) return std::nullopt;  // minute resolution is the contract
  return minutes_from_civil(year, month, day, hour, minute);
}

std::string format_microdeg(MicroDeg v) {
  std::string out;
  std::uint64_t mag;
  if (v < 0) {
    out.push_back('-');
    mag = static_cast<std::uint64_t>(-v);
  } else {
    mag = static_cast<std::uint64_t>(v);
  }
  out += std::to_string(mag / 1000000);
  std::uint64_t frac = mag % 1000000;
  if (frac != 0) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%06llu",
                  static_cast<unsigned long long>(frac));
    std::string digits = buf;
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out.push_back('.');
    out += digits;
  }
  return out;
}

std::optional<MicroDeg> parse_microdeg(std::string_view text,
                                       MicroDeg limit_microdeg) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  std::size_t int_begin = pos;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  if (pos == int_begin) return std::nullopt;
  if (pos - int_begin > 4) return std::nullopt;  // degrees never need more
  std::int64_t value = 0;
  for (std::size_t i = int_begin; i < pos; ++i) {
    value = value * 10 + (text[i] - '0');
  }
  value *= 1000000;
  if (pos < text.size()) {
    if (text[pos] != '.') return std::nullopt;
    ++pos;
    const std::size_t frac_begin = pos;
    std::int64_t scale = 100000;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (pos - frac_begin >= 6) return std::nullopt;
      value += (text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
    if (pos == frac_begin) return std::nullopt;  // bare trailing dot
  }
  if (pos != text.size()) return std::nullopt;
  if (negative) value = -value;
  if (value < -limit_microdeg || value > limit_microdeg) return std::nullopt;
  return value;
}

}  // namespace cosched
