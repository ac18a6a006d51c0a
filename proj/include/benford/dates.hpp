#ifndef BENFORD_DATES_HPP
#define BENFORD_DATES_HPP

#include <chrono>
#include <optional>
#include <string>

namespace benford {

/// Plain calendar day (no time zones anywhere in the pipeline).
using Date = std::chrono::sys_days;
using Days = std::chrono::days;

Date make_date(int year, unsigned month, unsigned day);

/// "1/22/20" (month/day/2-digit-year, no padding) as used by wide-format
/// surveillance CSV headers. Years 00-69 map to 20xx, 70-99 to 19xx.
std::optional<Date> parse_mdy(const std::string& text);

/// "2020-01-22".
std::optional<Date> parse_iso(const std::string& text);

std::string to_iso(Date d);

/// Inverse of parse_mdy (unpadded, 2-digit year) for round-trip serialization.
std::string to_mdy(Date d);

} // namespace benford

#endif // BENFORD_DATES_HPP
