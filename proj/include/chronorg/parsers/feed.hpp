#pragma once
// RSS 2.0 and Atom 1.0 item extraction on top of the XML reader.
// RSS dates are RFC 822, Atom dates are ISO 8601; items without a usable
// date become record errors, not entries.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronorg/connector.hpp"
#include "chronorg/core.hpp"

namespace chronorg::feed {

struct ItemRecord {
    CivilTime date;
    std::string title;
    std::optional<std::string> link;
    std::vector<std::string> categories;
    std::string origin;
};

struct ParseResult {
    std::vector<ItemRecord> items;
    std::vector<RecordError> errors;
    std::size_t records_seen = 0;
};

// "2008-09-15T17:38:00+02:00", "...Z", or naive "...T17:38:00".
std::optional<CivilTime> parse_iso8601(std::string_view text);

// Throws NotAFeed when the root element is neither <rss> nor <feed>.
ParseResult parse_feed(std::string_view xml_text, std::string_view origin_name = "feed");

ParseOutcome to_outcome(const ParseResult& result);

} // namespace chronorg::feed
