#include "chronorg/parsers/ical.hpp"

#include <cctype>
#include <optional>
#include <utility>

namespace chronorg::ical {
namespace {

struct ContentLine {
    std::string name; // uppercased
    std::vector<std::pair<std::string, std::string>> params;
    std::string value;
    std::size_t line = 0;
};

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = char(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

// RFC 5545 §3.1: a CRLF (or bare LF) followed by space or tab continues
// the previous line.
std::vector<ContentLine> unfold_lines(std::string_view stream) {
    std::vector<ContentLine> lines;
    std::string current;
    std::size_t current_line = 1;
    std::size_t line_number = 1;

    auto flush = [&] {
        if (current.empty())
            return;
        ContentLine cl;
        cl.line = current_line;
        size_t colon = std::string::npos;
        // The name/params part never contains a quoted string in the
        // generated-subset sources we read, so the first ':' splits.
        for (size_t i = 0; i < current.size(); ++i) {
            if (current[i] == '"') {
                size_t close = current.find('"', i + 1);
                if (close == std::string::npos)
                    break;
                i = close;
            } else if (current[i] == ':') {
                colon = i;
                break;
            }
        }
        std::string head = colon == std::string::npos ? current : current.substr(0, colon);
        cl.value = colon == std::string::npos ? "" : current.substr(colon + 1);
        size_t semi = head.find(';');
        cl.name = upper(head.substr(0, semi));
        while (semi != std::string::npos) {
            size_t next = head.find(';', semi + 1);
            std::string param = head.substr(semi + 1, next - semi - 1);
            size_t eq = param.find('=');
            if (eq != std::string::npos)
                cl.params.emplace_back(upper(param.substr(0, eq)), param.substr(eq + 1));
            semi = next;
        }
        lines.push_back(std::move(cl));
        current.clear();
    };

    for (size_t i = 0; i < stream.size(); ++i) {
        char c = stream[i];
        if (c == '\r')
            continue;
        if (c == '\n') {
            ++line_number;
            if (i + 1 < stream.size() && (stream[i + 1] == ' ' || stream[i + 1] == '\t')) {
                ++i; // folded continuation
                continue;
            }
            flush();
            current_line = line_number;
            continue;
        }
        current.push_back(c);
    }
    flush();
    return lines;
}

std::string decode_text(std::string_view value) {
    std::string out;
    out.reserve(value.size());
    for (size_t i = 0; i < value.size(); ++i) {
        if (value[i] != '\\' || i + 1 == value.size()) {
            out.push_back(value[i]);
            continue;
        }
        char next = value[++i];
        switch (next) {
        case 'n':
        case 'N':
            out.push_back('\n');
            break;
        case '\\':
        case ';':
        case ',':
            out.push_back(next);
            break;
        default:
            out.push_back('\\');
            out.push_back(next);
        }
    }
    return out;
}

const std::string* param_value(const ContentLine& cl, std::string_view key) {
    for (const auto& [k, v] : cl.params)
        if (k == key)
            return &v;
    return nullptr;
}

std::optional<unsigned> read_digits(std::string_view text, size_t pos, size_t count) {
    if (pos + count > text.size())
        return std::nullopt;
    unsigned value = 0;
    for (size_t i = 0; i < count; ++i) {
        char c = text[pos + i];
        if (c < '0' || c > '9')
            return std::nullopt;
        value = value * 10 + unsigned(c - '0');
    }
    return value;
}

// "20080915" or "20080915T140000" with optional trailing "Z".
std::optional<CivilTime> parse_dt(const ContentLine& cl, bool& date_only) {
    const std::string* value_param = param_value(cl, "VALUE");
    date_only = value_param && *value_param == "DATE";
    std::string_view v = cl.value;

    auto year = read_digits(v, 0, 4);
    auto month = read_digits(v, 4, 2);
    auto day = read_digits(v, 6, 2);
    if (!year || !month || !day)
        return std::nullopt;
    CivilTime t;
    t.date = Date{int(*year), *month, *day};
    if (!is_valid_date(t.date))
        return std::nullopt;

    if (date_only)
        return v.size() == 8 ? std::optional<CivilTime>(t) : std::nullopt;
    if (v.size() < 15 || v[8] != 'T')
        return std::nullopt;
    auto hour = read_digits(v, 9, 2);
    auto minute = read_digits(v, 11, 2);
    auto second = read_digits(v, 13, 2);
    if (!hour || !minute || !second || *hour > 23 || *minute > 59 || *second > 60)
        return std::nullopt;
    t.hour = *hour;
    t.minute = *minute;
    t.second = *second == 60 ? 59 : *second;

    bool utc = v.size() == 16 && v[15] == 'Z';
    if (!utc && v.size() != 15)
        return std::nullopt;
    if (utc)
        t = local_from_offset_civil(t, 0);
    return t;
}

} // namespace

ParseResult parse_ical(std::string_view stream, std::string_view origin_name) {
    std::vector<ContentLine> lines = unfold_lines(stream);
    if (lines.empty() || lines.front().name != "BEGIN" ||
        upper(lines.front().value) != "VCALENDAR")
        throw NotICalendar(std::string(origin_name) + ": stream does not begin with BEGIN:VCALENDAR");

    ParseResult result;
    std::optional<VEventRecord> event;
    std::size_t event_line = 0;
    bool event_start_seen = false;
    bool event_start_bad = false;

    auto origin_at = [&](std::size_t line) {
        return std::string(origin_name) + ":" + std::to_string(line);
    };

    for (const ContentLine& cl : lines) {
        if (cl.name == "BEGIN" && upper(cl.value) == "VEVENT") {
            event.emplace();
            event->origin = origin_at(cl.line);
            event_line = cl.line;
            event_start_seen = false;
            event_start_bad = false;
            ++result.records_seen;
            continue;
        }
        if (cl.name == "END" && upper(cl.value) == "VEVENT") {
            if (!event)
                continue;
            if (event_start_bad)
                result.errors.push_back(
                    RecordError{"VEVENT has an unparseable DTSTART", origin_at(event_line)});
            else if (!event_start_seen)
                result.errors.push_back(
                    RecordError{"VEVENT is missing DTSTART", origin_at(event_line)});
            else
                result.events.push_back(std::move(*event));
            event.reset();
            continue;
        }
        if (!event)
            continue;

        if (cl.name == "DTSTART") {
            bool date_only = false;
            if (auto t = parse_dt(cl, date_only)) {
                event->dtstart = *t;
                event->start_is_date_only = date_only;
                event_start_seen = true;
            } else {
                event_start_bad = true;
            }
        } else if (cl.name == "DTEND") {
            bool date_only = false;
            if (auto t = parse_dt(cl, date_only)) {
                event->dtend = *t;
                event->end_is_date_only = date_only;
            }
        } else if (cl.name == "SUMMARY") {
            event->summary = decode_text(cl.value);
        } else if (cl.name == "LOCATION") {
            event->location = decode_text(cl.value);
        } else if (cl.name == "UID") {
            event->uid = cl.value;
        } else if (cl.name == "RRULE") {
            event->rrule = cl.value;
        }
    }
    return result;
}

ParseOutcome to_outcome(const ParseResult& result) {
    ParseOutcome outcome;
    outcome.errors = result.errors;
    outcome.records_seen = result.records_seen;

    for (const VEventRecord& event : result.events) {
        try {
            EntryDraft draft;
            if (event.start_is_date_only) {
                std::optional<Stamp> end;
                if (event.dtend && event.end_is_date_only) {
                    // DTEND is exclusive for all-day events; fold a one-day
                    // event back to a single date-only stamp.
                    Date last = date_from_epoch_days(days_from_epoch(event.dtend->date) - 1);
                    if (last > event.dtstart.date)
                        end = Stamp{last, std::nullopt};
                }
                draft.timestamp = make_timestamp(event.dtstart.date, std::nullopt, std::nullopt, end);
            } else {
                std::optional<Stamp> end;
                if (event.dtend && !event.end_is_date_only)
                    end = Stamp{event.dtend->date, clock_of(*event.dtend)};
                draft.timestamp =
                    make_timestamp(event.dtstart.date, clock_of(event.dtstart), std::nullopt, end);
                draft.properties.emplace_back("CREATED", iso_local_string(event.dtstart));
            }
            draft.summary = event.summary.empty() ? "(no summary)" : event.summary;
            if (event.location)
                draft.properties.emplace_back("LOCATION", *event.location);
            if (event.uid)
                draft.properties.emplace_back("UID", *event.uid);
            if (event.rrule)
                draft.properties.emplace_back("RRULE", *event.rrule);
            outcome.drafts.push_back(std::move(draft));
        } catch (const Error& e) {
            outcome.errors.push_back(RecordError{e.what(), event.origin});
        }
    }
    return outcome;
}

} // namespace chronorg::ical
