#pragma once
// Canonical timeline model: timestamps, entries, tags, content ids.
// Everything here is an immutable value; all functions are pure except the
// two local-time helpers, which read the process timezone.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chronorg/errors.hpp"

namespace chronorg {

enum class Weekday { Monday, Tuesday, Wednesday, Thursday, Friday, Saturday, Sunday };

// Proleptic Gregorian calendar date.
struct Date {
    int year = 1970;
    unsigned month = 1; // 1..12
    unsigned day = 1;   // 1..31

    auto operator<=>(const Date&) const = default;
};

// Minute-precision clock time; Org stamps carry no seconds.
struct ClockTime {
    unsigned hour = 0;   // 0..23
    unsigned minute = 0; // 0..59

    auto operator<=>(const ClockTime&) const = default;
};

// One side of a cross-day range.
struct Stamp {
    Date date;
    std::optional<ClockTime> time;

    auto operator<=>(const Stamp&) const = default;
};

// <2008-09-15 Mon 14:34>, optionally with a same-day end time
// (<... 17:35-17:38>) or a cross-day end stamp (<a>--<b>).
// At most one of end_time / end_stamp is set; use make_timestamp.
struct OrgTimestamp {
    Date date;
    std::optional<ClockTime> time;
    std::optional<ClockTime> end_time;
    std::optional<Stamp> end_stamp;

    bool operator==(const OrgTimestamp&) const = default;
};

bool is_valid_date(const Date& d);

// Days since 1970-01-01 (negative before the epoch).
std::int64_t days_from_epoch(const Date& d);
Date date_from_epoch_days(std::int64_t days);

Weekday derive_weekday(const Date& d); // throws InvalidDate
std::string_view weekday_abbrev(Weekday w); // "Mon".."Sun"
std::string_view weekday_name(Weekday w);   // "Monday".."Sunday"
std::string_view month_name(unsigned month); // "January".."December"

// Validating constructor for OrgTimestamp. end_time requires time and must
// not precede it; end_stamp must not precede the start; an end stamp that
// falls on the start date is normalized into end_time.
OrgTimestamp make_timestamp(const Date& date,
                            std::optional<ClockTime> time = std::nullopt,
                            std::optional<ClockTime> end_time = std::nullopt,
                            std::optional<Stamp> end_stamp = std::nullopt);

std::string render_timestamp(const OrgTimestamp& ts);
OrgTimestamp parse_timestamp(std::string_view text); // throws MalformedStamp

// Replaces every character outside [A-Za-z0-9_@] with '_', collapsing runs
// and dropping replacement underscores at either end. Throws EmptyTag when
// nothing is left.
std::string sanitize_tag(std::string_view raw);
bool is_sanitized_tag(std::string_view tag);

// One metadata record: what happened, when, where the original lives.
struct TimelineEntry {
    OrgTimestamp timestamp;
    std::string summary;                // single line, non-empty
    std::vector<std::string> tags;      // sanitized, unique, ordered
    std::optional<std::string> link;    // URI or local path
    std::vector<std::pair<std::string, std::string>> properties; // ordered, no ID key
    std::string id;                     // 40-char lowercase hex digest

    bool operator==(const TimelineEntry&) const = default;
};

// Collapses line breaks and tabs to single spaces and trims the ends.
std::string single_line(std::string_view text);

// Content digest over the canonical entry string
//   render(ts) 0x1F summary 0x1F link 0x1F tag,tag 0x1F k=v,k=v
// hashed with SHA-1; the append-mode dedup key.
std::string make_entry_id(const OrgTimestamp& ts, std::string_view summary,
                          const std::optional<std::string>& link,
                          const std::vector<std::string>& tags,
                          const std::vector<std::pair<std::string, std::string>>& properties);

// Normalizing constructor: flattens the summary, sanitizes and dedups tags,
// flattens property values, encodes brackets in the link, computes the id.
// A linkless summary ending in a tag-shaped token (":a:b:") would be
// indistinguishable from a real tag block when serialized, so its closing
// colon is dropped. Throws InvalidEntry / EmptyTag on unusable input.
TimelineEntry make_entry(const OrgTimestamp& ts, std::string_view summary,
                         std::vector<std::string> tags = {},
                         std::optional<std::string> link = std::nullopt,
                         std::vector<std::pair<std::string, std::string>> properties = {});

// Civil time with seconds, used at connector boundaries before truncation.
struct CivilTime {
    Date date;
    unsigned hour = 0;
    unsigned minute = 0;
    unsigned second = 0;

    auto operator<=>(const CivilTime&) const = default;
};

std::int64_t epoch_from_utc_civil(const CivilTime& utc);
CivilTime local_civil_from_epoch(std::int64_t epoch_seconds);

// Converts a civil time carrying a known UTC offset to host-local civil time.
CivilTime local_from_offset_civil(const CivilTime& src, int offset_seconds);

// "2008-09-15T14:34:56" — the CREATED property format.
std::string iso_local_string(const CivilTime& t);

ClockTime clock_of(const CivilTime& t); // minute truncation

} // namespace chronorg
