#pragma once
// Android backup XML for SMS and call logs. Timestamps are epoch
// milliseconds, direction is type="1" (incoming) or type="2" (outgoing),
// call duration is in seconds.

#include <string>
#include <string_view>
#include <vector>

#include "chronorg/connector.hpp"
#include "chronorg/core.hpp"

namespace chronorg::phone {

struct SmsRecord {
    CivilTime date;
    std::string address;
    bool outgoing = false;
    std::string body;
};

struct CallRecord {
    CivilTime date;
    std::string number;
    bool outgoing = false;
    unsigned duration_seconds = 0;
};

struct SmsResult {
    std::vector<SmsRecord> messages;
    std::vector<RecordError> errors;
    std::size_t records_seen = 0;
};

struct CallResult {
    std::vector<CallRecord> calls;
    std::vector<RecordError> errors;
    std::size_t records_seen = 0;
};

SmsResult parse_sms(std::string_view xml_text, std::string_view origin_name = "sms");
CallResult parse_calls(std::string_view xml_text, std::string_view origin_name = "calls");

ParseOutcome to_outcome(const SmsResult& result);
// Call entries span from the start to start + duration, rounded down to
// whole minutes.
ParseOutcome to_outcome(const CallResult& result);

} // namespace chronorg::phone
