#include "benford/dates.hpp"

#include <charconv>
#include <cstdio>

namespace benford {

namespace {

// Parses an unsigned decimal span; advances *pos past it. Returns false on
// empty or non-digit input.
bool parse_uint(const std::string& s, size_t* pos, int* out) {
    size_t start = *pos;
    int value = 0;
    while (*pos < s.size() && s[*pos] >= '0' && s[*pos] <= '9') {
        value = value * 10 + (s[*pos] - '0');
        ++*pos;
    }
    if (*pos == start) return false;
    *out = value;
    return true;
}

bool valid_ymd(int y, int m, int d) {
    if (m < 1 || m > 12 || d < 1) return false;
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                    std::chrono::day{unsigned(d)}};
    return ymd.ok();
}

} // namespace

Date make_date(int year, unsigned month, unsigned day) {
    return std::chrono::sys_days{std::chrono::year_month_day{
        std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}}};
}

std::optional<Date> parse_mdy(const std::string& text) {
    size_t pos = 0;
    int m = 0, d = 0, y = 0;
    if (!parse_uint(text, &pos, &m)) return std::nullopt;
    if (pos >= text.size() || text[pos] != '/') return std::nullopt;
    ++pos;
    if (!parse_uint(text, &pos, &d)) return std::nullopt;
    if (pos >= text.size() || text[pos] != '/') return std::nullopt;
    ++pos;
    size_t ystart = pos;
    if (!parse_uint(text, &pos, &y)) return std::nullopt;
    if (pos != text.size()) return std::nullopt;
    if (pos - ystart <= 2) y += (y < 70) ? 2000 : 1900;
    if (!valid_ymd(y, m, d)) return std::nullopt;
    return make_date(y, unsigned(m), unsigned(d));
}

std::optional<Date> parse_iso(const std::string& text) {
    size_t pos = 0;
    int y = 0, m = 0, d = 0;
    if (!parse_uint(text, &pos, &y)) return std::nullopt;
    if (pos >= text.size() || text[pos] != '-') return std::nullopt;
    ++pos;
    if (!parse_uint(text, &pos, &m)) return std::nullopt;
    if (pos >= text.size() || text[pos] != '-') return std::nullopt;
    ++pos;
    if (!parse_uint(text, &pos, &d)) return std::nullopt;
    if (pos != text.size()) return std::nullopt;
    if (!valid_ymd(y, m, d)) return std::nullopt;
    return make_date(y, unsigned(m), unsigned(d));
}

std::string to_iso(Date d) {
    std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
}

std::string to_mdy(Date d) {
    std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u/%u/%02d", unsigned(ymd.month()),
                  unsigned(ymd.day()), int(ymd.year()) % 100);
    return buf;
}

} // namespace benford
