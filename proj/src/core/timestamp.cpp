#include "darc/core/timestamp.hpp"

#include <cctype>
#include <cstdio>

#include "darc/error.hpp"

namespace darc {

namespace {

using days = std::chrono::days;
using sys_days = std::chrono::sys_days;

int field(const std::string& s, int pos, int len) {
    int v = 0;
    for (int i = pos; i < pos + len; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

struct Parts {
    int year, month, day, hour, minute, second;
};

Parts split(const std::string& v) {
    return {field(v, 0, 4), field(v, 4, 2), field(v, 6, 2),
            field(v, 8, 2), field(v, 10, 2), field(v, 12, 2)};
}

}  // namespace

Timestamp14 Timestamp14::parse(const std::string& text) {
    if (text.size() != 14) raise(Errc::bad_timestamp, "expected 14 digits: " + text);
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            raise(Errc::bad_timestamp, "non-digit in timestamp: " + text);
    }
    Parts p = split(text);
    std::chrono::year_month_day ymd{std::chrono::year(p.year),
                                    std::chrono::month(static_cast<unsigned>(p.month)),
                                    std::chrono::day(static_cast<unsigned>(p.day))};
    if (!ymd.ok()) raise(Errc::bad_timestamp, "invalid calendar date: " + text);
    if (p.hour > 23 || p.minute > 59 || p.second > 59)
        raise(Errc::bad_timestamp, "invalid time of day: " + text);
    return Timestamp14(text);
}

Timestamp14 Timestamp14::from_time(std::chrono::system_clock::time_point tp) {
    return from_epoch_seconds(
        std::chrono::duration_cast<std::chrono::seconds>(tp.time_since_epoch()).count());
}

Timestamp14 Timestamp14::from_epoch_seconds(std::int64_t seconds) {
    std::int64_t d = seconds / 86400;
    std::int64_t rem = seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        d -= 1;
    }
    sys_days day{days(d)};
    std::chrono::year_month_day ymd{day};
    int h = static_cast<int>(rem / 3600);
    int mi = static_cast<int>((rem % 3600) / 60);
    int s = static_cast<int>(rem % 60);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d%02u%02u%02d%02d%02d", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), h, mi, s);
    return Timestamp14(std::string(buf));
}

std::int64_t Timestamp14::epoch_seconds() const {
    Parts p = split(value_);
    sys_days day{std::chrono::year(p.year) / p.month / p.day};
    std::int64_t secs = day.time_since_epoch().count() * std::int64_t(86400);
    return secs + p.hour * 3600 + p.minute * 60 + p.second;
}

std::chrono::system_clock::time_point Timestamp14::to_time() const {
    return std::chrono::system_clock::time_point(std::chrono::seconds(epoch_seconds()));
}

std::string Timestamp14::rfc1123() const {
    static const char* kDays[] = {"Sun", "Mon", "Tue", "Wed", "Thu", "Fri", "Sat"};
    static const char* kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    Parts p = split(value_);
    sys_days day{std::chrono::year(p.year) / p.month / p.day};
    unsigned wd = std::chrono::weekday{day}.c_encoding();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s, %02d %s %04d %02d:%02d:%02d GMT", kDays[wd], p.day,
                  kMonths[p.month - 1], p.year, p.hour, p.minute, p.second);
    return buf;
}

std::string Timestamp14::iso8601() const {
    Parts p = split(value_);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", p.year, p.month, p.day,
                  p.hour, p.minute, p.second);
    return buf;
}

}  // namespace darc
