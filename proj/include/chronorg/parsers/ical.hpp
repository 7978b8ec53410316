#pragma once
// iCalendar (RFC 5545) VEVENT extraction: unfolding, parameters, date vs
// date-time values, UTC-to-local conversion, text escapes. Recurrence rules
// are carried through as an RRULE property, never expanded.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronorg/connector.hpp"
#include "chronorg/core.hpp"

namespace chronorg::ical {

struct VEventRecord {
    CivilTime dtstart;
    bool start_is_date_only = false;
    std::optional<CivilTime> dtend;
    bool end_is_date_only = false;
    std::string summary;
    std::optional<std::string> location;
    std::optional<std::string> uid;
    std::optional<std::string> rrule;
    std::string origin;
};

struct ParseResult {
    std::vector<VEventRecord> events;
    std::vector<RecordError> errors;
    std::size_t records_seen = 0;
};

// Throws NotICalendar when the stream is not a VCALENDAR object.
ParseResult parse_ical(std::string_view stream, std::string_view origin_name = "ical");

ParseOutcome to_outcome(const ParseResult& result);

} // namespace chronorg::ical
