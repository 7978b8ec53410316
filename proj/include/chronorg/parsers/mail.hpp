#pragma once
// Email headers (RFC 5322) plus encoded-word decoding (RFC 2047, B and Q,
// UTF-8 and ISO-8859-1). Handles single .eml messages, maildir trees and
// mbox files split on "From " separator lines.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronorg/connector.hpp"
#include "chronorg/core.hpp"

namespace chronorg::mail {

struct MessageRecord {
    CivilTime date;
    std::string from;
    std::string subject;
    std::optional<std::string> message_id;
    std::string origin;
};

struct ParseResult {
    std::vector<MessageRecord> messages;
    std::vector<RecordError> errors;
    std::size_t records_seen = 0;
};

// "Mon, 15 Sep 2008 15:53:00 +0200" converted to local civil time.
// The weekday token is optional and never trusted.
std::optional<CivilTime> parse_rfc822_date(std::string_view text);

// RFC 2047 encoded words, B and Q, UTF-8 and ISO-8859-1. Words in other
// charsets stay raw and are reported through failures when given.
std::string decode_encoded_words(std::string_view raw,
                                 std::vector<std::string>* failures = nullptr);

// One RFC 5322 message. Missing Date or unparseable Date yields an error.
ParseResult parse_message(std::string_view raw, std::string_view origin_name);

ParseResult parse_mbox(std::string_view raw, std::string_view origin_name);

// path may be a single message file, an mbox, or a maildir root
// (cur/ and new/ are scanned). Throws SourceUnreadable.
ParseResult parse_path(const std::string& path);

ParseOutcome to_outcome(const ParseResult& result);

} // namespace chronorg::mail
