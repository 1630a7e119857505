#include "psp/timeutil.hpp"

#include <array>
#include <cstdio>

#include "psp/errors.hpp"

namespace psp {

namespace {

// Civil-date conversion on the proleptic Gregorian calendar.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);            // [0, 399]
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;  // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
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
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

bool leap_year(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    if (m == 2 && leap_year(y)) return 29;
    return lengths[m - 1];
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

[[noreturn]] void bad(std::string_view text) {
    throw ParseError("invalid UTC timestamp '" + std::string(text) +
                     "' (expected YYYY-MM-DDTHH:MM:SSZ or YYYY-MM-DD)");
}

}  // namespace

UtcTime parse_utc(std::string_view text) {
    if (text.size() != 10 && text.size() != 20) bad(text);
    if (!all_digits(text.substr(0, 4)) || text[4] != '-' ||
        !all_digits(text.substr(5, 2)) || text[7] != '-' ||
        !all_digits(text.substr(8, 2)))
        bad(text);

    const int y = to_int(text.substr(0, 4));
    const int mo = to_int(text.substr(5, 2));
    const int d = to_int(text.substr(8, 2));
    int h = 0, mi = 0, s = 0;

    if (text.size() == 20) {
        if (text[10] != 'T' || text[13] != ':' || text[16] != ':' || text[19] != 'Z' ||
            !all_digits(text.substr(11, 2)) || !all_digits(text.substr(14, 2)) ||
            !all_digits(text.substr(17, 2)))
            bad(text);
        h = to_int(text.substr(11, 2));
        mi = to_int(text.substr(14, 2));
        s = to_int(text.substr(17, 2));
    }

    if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo) || h > 23 || mi > 59 || s > 59)
        bad(text);

    return UtcTime{days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s};
}

std::string format_utc(UtcTime t) {
    std::int64_t days = t.seconds / 86400;
    std::int64_t rem = t.seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60),
                  static_cast<int>(rem % 60));
    return buf;
}

}  // namespace psp
