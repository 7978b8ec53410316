#include "chronorg/core.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ctime>

#include "chronorg/sha1.hpp"

namespace chronorg {
namespace {

constexpr std::string_view kWeekdayAbbrev[] = {"Mon", "Tue", "Wed", "Thu",
                                               "Fri", "Sat", "Sun"};
constexpr std::string_view kWeekdayName[] = {"Monday", "Tuesday",  "Wednesday", "Thursday",
                                             "Friday", "Saturday", "Sunday"};
constexpr std::string_view kMonthName[] = {"January", "February", "March",     "April",
                                           "May",     "June",     "July",      "August",
                                           "September", "October", "November", "December"};

bool is_leap(int year) {
    return year % 4 == 0 && (year % 100 != 0 || year % 400 == 0);
}

unsigned days_in_month(int year, unsigned month) {
    static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year))
        return 29;
    return lengths[month - 1];
}

void append_two(std::string& out, unsigned value) {
    out.push_back(char('0' + value / 10));
    out.push_back(char('0' + value % 10));
}

void append_date(std::string& out, const Date& d) {
    out += std::to_string(d.year);
    out.push_back('-');
    append_two(out, d.month);
    out.push_back('-');
    append_two(out, d.day);
}

void append_clock(std::string& out, const ClockTime& t) {
    append_two(out, t.hour);
    out.push_back(':');
    append_two(out, t.minute);
}

void append_stamp_body(std::string& out, const Date& date, std::optional<ClockTime> time,
                       std::optional<ClockTime> end_time) {
    append_date(out, date);
    out.push_back(' ');
    out += weekday_abbrev(derive_weekday(date));
    if (time) {
        out.push_back(' ');
        append_clock(out, *time);
        if (end_time) {
            out.push_back('-');
            append_clock(out, *end_time);
        }
    }
}

// Parsing helpers for the stamp grammar. All throw MalformedStamp.

struct Cursor {
    std::string_view text;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw MalformedStamp(what + " in \"" + std::string(text) + "\"");
    }

    char peek() const { return pos < text.size() ? text[pos] : '\0'; }

    void expect(char c) {
        if (peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos;
    }

    unsigned digits(size_t count, const char* label) {
        unsigned value = 0;
        for (size_t i = 0; i < count; ++i) {
            char c = peek();
            if (c < '0' || c > '9')
                fail(std::string("expected digit in ") + label);
            value = value * 10 + unsigned(c - '0');
            ++pos;
        }
        return value;
    }

    bool done() const { return pos >= text.size(); }
};

Stamp parse_one_stamp(Cursor& cur) {
    cur.expect('<');
    Date date;
    date.year = int(cur.digits(4, "year"));
    cur.expect('-');
    date.month = cur.digits(2, "month");
    cur.expect('-');
    date.day = cur.digits(2, "day");
    if (!is_valid_date(date))
        cur.fail("invalid calendar date");

    cur.expect(' ');
    std::string_view abbrev = weekday_abbrev(derive_weekday(date));
    for (char expected : abbrev) {
        if (cur.peek() != expected)
            cur.fail("weekday does not match date");
        ++cur.pos;
    }

    Stamp stamp{date, std::nullopt};
    if (cur.peek() == ' ') {
        ++cur.pos;
        ClockTime t;
        t.hour = cur.digits(2, "hour");
        cur.expect(':');
        t.minute = cur.digits(2, "minute");
        if (t.hour > 23 || t.minute > 59)
            cur.fail("clock time out of range");
        stamp.time = t;
    }
    return stamp;
}

// 0x1F separates the canonical id fields; it can never occur in a
// single-line summary or sanitized tag.
constexpr char kUnit = '\x1F';

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = char(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

} // namespace

bool is_valid_date(const Date& d) {
    if (d.month < 1 || d.month > 12)
        return false;
    return d.day >= 1 && d.day <= days_in_month(d.year, d.month);
}

// Howard Hinnant's civil-days algorithm, shifted to the Unix epoch.
std::int64_t days_from_epoch(const Date& d) {
    std::int64_t y = d.year;
    const std::int64_t m = d.month;
    const std::int64_t day = d.day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const std::int64_t yoe = y - era * 400;
    const std::int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

Date date_from_epoch_days(std::int64_t days) {
    std::int64_t z = days + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const std::int64_t doe = z - era * 146097;
    const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = yoe + era * 400;
    const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const std::int64_t mp = (5 * doy + 2) / 153;
    const std::int64_t day = doy - (153 * mp + 2) / 5 + 1;
    const std::int64_t m = mp + (mp < 10 ? 3 : -9);
    return Date{int(y + (m <= 2)), unsigned(m), unsigned(day)};
}

Weekday derive_weekday(const Date& d) {
    if (!is_valid_date(d))
        throw InvalidDate("invalid date " + std::to_string(d.year) + "-" +
                          std::to_string(d.month) + "-" + std::to_string(d.day));
    // 1970-01-01 was a Thursday; Monday indexes 0.
    std::int64_t days = days_from_epoch(d) + 3;
    std::int64_t dow = days % 7;
    if (dow < 0)
        dow += 7;
    return Weekday(dow);
}

std::string_view weekday_abbrev(Weekday w) {
    return kWeekdayAbbrev[static_cast<int>(w)];
}

std::string_view weekday_name(Weekday w) {
    return kWeekdayName[static_cast<int>(w)];
}

std::string_view month_name(unsigned month) {
    if (month < 1 || month > 12)
        throw InvalidDate("month out of range: " + std::to_string(month));
    return kMonthName[month - 1];
}

OrgTimestamp make_timestamp(const Date& date, std::optional<ClockTime> time,
                            std::optional<ClockTime> end_time, std::optional<Stamp> end_stamp) {
    if (!is_valid_date(date))
        throw InvalidDate("invalid start date");
    if (time && (time->hour > 23 || time->minute > 59))
        throw InvalidDate("start time out of range");
    if (end_time && end_stamp)
        throw InvertedRange("end_time and end_stamp are exclusive");
    if (end_time) {
        if (!time)
            throw InvertedRange("end time without a start time");
        if (end_time->hour > 23 || end_time->minute > 59)
            throw InvalidDate("end time out of range");
        if (*end_time < *time)
            throw InvertedRange("end time precedes start time");
    }
    if (end_stamp) {
        if (!is_valid_date(end_stamp->date))
            throw InvalidDate("invalid end date");
        if (end_stamp->time && (end_stamp->time->hour > 23 || end_stamp->time->minute > 59))
            throw InvalidDate("end time out of range");
        if (Stamp{date, time} > *end_stamp)
            throw InvertedRange("end stamp precedes start");
        if (end_stamp->date == date) {
            // Same-day ranges always use the compact HH:MM-HH:MM form.
            if (!end_stamp->time || !time)
                throw InvertedRange("same-day end stamp requires clock times");
            end_time = end_stamp->time;
            end_stamp.reset();
        }
    }
    return OrgTimestamp{date, time, end_time, end_stamp};
}

std::string render_timestamp(const OrgTimestamp& ts) {
    std::string out;
    out.push_back('<');
    append_stamp_body(out, ts.date, ts.time, ts.end_time);
    out.push_back('>');
    if (ts.end_stamp) {
        out += "--<";
        append_stamp_body(out, ts.end_stamp->date, ts.end_stamp->time, std::nullopt);
        out.push_back('>');
    }
    return out;
}

OrgTimestamp parse_timestamp(std::string_view text) {
    Cursor cur{text};
    Stamp start = parse_one_stamp(cur);
    std::optional<ClockTime> end_time;
    if (cur.peek() == '-' && start.time) {
        ++cur.pos;
        if (cur.peek() != '-') {
            ClockTime t;
            t.hour = cur.digits(2, "end hour");
            cur.expect(':');
            t.minute = cur.digits(2, "end minute");
            if (t.hour > 23 || t.minute > 59)
                cur.fail("end time out of range");
            end_time = t;
        } else {
            --cur.pos;
        }
    }
    cur.expect('>');

    std::optional<Stamp> end_stamp;
    if (!cur.done()) {
        cur.expect('-');
        cur.expect('-');
        end_stamp = parse_one_stamp(cur);
        cur.expect('>');
        if (!cur.done())
            cur.fail("trailing characters");
    }

    try {
        return make_timestamp(start.date, start.time, end_time, end_stamp);
    } catch (const Error& e) {
        throw MalformedStamp(std::string(e.what()) + " in \"" + std::string(text) + "\"");
    }
}

std::string sanitize_tag(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool last_was_sub = false;
    for (char c : raw) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '@';
        if (ok) {
            out.push_back(c);
            last_was_sub = false;
        } else if (!last_was_sub) {
            out.push_back('_');
            last_was_sub = true;
        }
    }
    // Underscores introduced by replacement never anchor the ends.
    if (!out.empty() && out.front() == '_' && !raw.empty() && raw.front() != '_')
        out.erase(out.begin());
    if (!out.empty() && out.back() == '_' && raw.back() != '_')
        out.pop_back();
    if (out.empty())
        throw EmptyTag("tag \"" + std::string(raw) + "\" sanitizes to nothing");
    return out;
}

bool is_sanitized_tag(std::string_view tag) {
    if (tag.empty())
        return false;
    for (char c : tag) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '@';
        if (!ok)
            return false;
    }
    return true;
}

std::string single_line(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (c == '\n' || c == '\r' || c == '\t' || c == ' ') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

std::string make_entry_id(const OrgTimestamp& ts, std::string_view summary,
                          const std::optional<std::string>& link,
                          const std::vector<std::string>& tags,
                          const std::vector<std::pair<std::string, std::string>>& properties) {
    std::string canonical = render_timestamp(ts);
    canonical.push_back(kUnit);
    canonical += summary;
    canonical.push_back(kUnit);
    if (link)
        canonical += *link;
    canonical.push_back(kUnit);
    for (size_t i = 0; i < tags.size(); ++i) {
        if (i)
            canonical.push_back(',');
        canonical += tags[i];
    }
    canonical.push_back(kUnit);
    for (size_t i = 0; i < properties.size(); ++i) {
        if (i)
            canonical.push_back(',');
        canonical += properties[i].first;
        canonical.push_back('=');
        canonical += properties[i].second;
    }
    return sha1_hex(canonical);
}

TimelineEntry make_entry(const OrgTimestamp& ts, std::string_view summary,
                         std::vector<std::string> tags, std::optional<std::string> link,
                         std::vector<std::pair<std::string, std::string>> properties) {
    TimelineEntry entry;
    entry.timestamp = make_timestamp(ts.date, ts.time, ts.end_time, ts.end_stamp);

    entry.summary = single_line(summary);
    if (entry.summary.empty())
        throw InvalidEntry("empty summary");

    for (auto& raw : tags) {
        std::string clean = sanitize_tag(raw);
        if (std::find(entry.tags.begin(), entry.tags.end(), clean) == entry.tags.end())
            entry.tags.push_back(std::move(clean));
    }

    if (link) {
        if (link->empty())
            throw InvalidEntry("empty link");
        std::string encoded;
        encoded.reserve(link->size());
        for (char c : *link) {
            if (c == '[')
                encoded += "%5B";
            else if (c == ']')
                encoded += "%5D";
            else
                encoded.push_back(c);
        }
        entry.link = std::move(encoded);
    }

    for (auto& [key, value] : properties) {
        std::string clean_key = single_line(key);
        if (clean_key.empty() || clean_key.find(' ') != std::string::npos ||
            clean_key.find(':') != std::string::npos)
            throw InvalidEntry("bad property key \"" + key + "\"");
        if (ascii_lower(clean_key) == "id")
            throw InvalidEntry("ID is reserved for the content digest");
        for (const auto& existing : entry.properties)
            if (existing.first == clean_key)
                throw InvalidEntry("duplicate property key \"" + clean_key + "\"");
        entry.properties.emplace_back(std::move(clean_key), single_line(value));
    }

    // ":a:b:" at the end of a linkless summary would parse back as a tag
    // block; drop the closing colon so serialization stays invertible.
    if (!entry.link) {
        size_t ws = entry.summary.find_last_of(' ');
        std::string_view last = std::string_view(entry.summary).substr(ws + 1);
        if (last.size() >= 3 && last.front() == ':' && last.back() == ':') {
            std::string_view inner = last.substr(1, last.size() - 2);
            bool tag_shaped = !inner.empty();
            while (tag_shaped && !inner.empty()) {
                size_t colon = inner.find(':');
                std::string_view word = inner.substr(0, colon);
                tag_shaped = is_sanitized_tag(word);
                inner = colon == std::string_view::npos ? std::string_view{}
                                                        : inner.substr(colon + 1);
                if (colon != std::string_view::npos && inner.empty())
                    tag_shaped = false; // "::" inside
            }
            if (tag_shaped)
                entry.summary.pop_back();
        }
    }

    entry.id = make_entry_id(entry.timestamp, entry.summary, entry.link, entry.tags,
                             entry.properties);
    return entry;
}

std::int64_t epoch_from_utc_civil(const CivilTime& utc) {
    return days_from_epoch(utc.date) * 86400 + std::int64_t(utc.hour) * 3600 +
           std::int64_t(utc.minute) * 60 + utc.second;
}

CivilTime local_civil_from_epoch(std::int64_t epoch_seconds) {
    std::time_t t = epoch_seconds;
    std::tm tm{};
    if (!localtime_r(&t, &tm))
        throw InvalidDate("epoch seconds out of localtime range");
    return CivilTime{Date{tm.tm_year + 1900, unsigned(tm.tm_mon + 1), unsigned(tm.tm_mday)},
                     unsigned(tm.tm_hour), unsigned(tm.tm_min), unsigned(tm.tm_sec)};
}

CivilTime local_from_offset_civil(const CivilTime& src, int offset_seconds) {
    std::int64_t utc = epoch_from_utc_civil(src) - offset_seconds;
    return local_civil_from_epoch(utc);
}

std::string iso_local_string(const CivilTime& t) {
    std::string out;
    append_date(out, t.date);
    out.push_back('T');
    append_two(out, t.hour);
    out.push_back(':');
    append_two(out, t.minute);
    out.push_back(':');
    append_two(out, t.second);
    return out;
}

ClockTime clock_of(const CivilTime& t) {
    return ClockTime{t.hour, t.minute};
}

} // namespace chronorg
