#include "chronorg/parsers/phone_xml.hpp"

#include <cstdint>
#include <optional>

#include "chronorg/xml.hpp"

namespace chronorg::phone {
namespace {

std::optional<std::int64_t> parse_epoch_ms(const std::string* attr) {
    if (!attr || attr->empty() || attr->size() > 18)
        return std::nullopt;
    std::int64_t value = 0;
    std::string_view text = *attr;
    bool negative = text.front() == '-';
    if (negative)
        text.remove_prefix(1);
    if (text.empty())
        return std::nullopt;
    for (char c : text) {
        if (c < '0' || c > '9')
            return std::nullopt;
        value = value * 10 + (c - '0');
    }
    return negative ? -value : value;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

std::string origin_of(std::string_view origin_name, const xml::Element& el) {
    return std::string(origin_name) + ":" + std::to_string(el.line);
}

// direction: true = outgoing ("to"), false = incoming ("from")
std::optional<bool> parse_direction(const std::string* type) {
    if (!type)
        return std::nullopt;
    if (*type == "1")
        return false;
    if (*type == "2")
        return true;
    return std::nullopt;
}

// First `limit` code points of UTF-8 text, never splitting a sequence.
std::string_view utf8_prefix(std::string_view text, size_t limit) {
    size_t count = 0;
    size_t i = 0;
    while (i < text.size() && count < limit) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        size_t len = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
        if (i + len > text.size())
            break;
        i += len;
        ++count;
    }
    return text.substr(0, i);
}

std::int64_t minutes_since_epoch(const CivilTime& t) {
    return days_from_epoch(t.date) * 1440 + std::int64_t(t.hour) * 60 + t.minute;
}

} // namespace

SmsResult parse_sms(std::string_view xml_text, std::string_view origin_name) {
    xml::Element root = xml::parse(xml_text);
    std::vector<const xml::Element*> elements;
    if (xml::name_is(root, "sms"))
        elements.push_back(&root);
    xml::find_descendants(root, "sms", elements);

    SmsResult result;
    for (const xml::Element* el : elements) {
        ++result.records_seen;
        std::string origin = origin_of(origin_name, *el);

        auto epoch_ms = parse_epoch_ms(xml::find_attribute(*el, "date"));
        if (!epoch_ms) {
            result.errors.push_back(RecordError{"sms has no usable date attribute", origin});
            continue;
        }
        auto outgoing = parse_direction(xml::find_attribute(*el, "type"));
        if (!outgoing) {
            const std::string* type = xml::find_attribute(*el, "type");
            result.errors.push_back(RecordError{
                "unknown sms type \"" + (type ? *type : "") + "\"", origin});
            continue;
        }
        const std::string* address = xml::find_attribute(*el, "address");
        if (!address || address->empty()) {
            result.errors.push_back(RecordError{"sms has no address attribute", origin});
            continue;
        }

        SmsRecord record;
        record.date = local_civil_from_epoch(floor_div(*epoch_ms, 1000));
        record.address = *address;
        record.outgoing = *outgoing;
        if (const std::string* body = xml::find_attribute(*el, "body"))
            record.body = *body;
        result.messages.push_back(std::move(record));
    }
    return result;
}

CallResult parse_calls(std::string_view xml_text, std::string_view origin_name) {
    xml::Element root = xml::parse(xml_text);
    std::vector<const xml::Element*> elements;
    if (xml::name_is(root, "call"))
        elements.push_back(&root);
    xml::find_descendants(root, "call", elements);

    CallResult result;
    for (const xml::Element* el : elements) {
        ++result.records_seen;
        std::string origin = origin_of(origin_name, *el);

        auto epoch_ms = parse_epoch_ms(xml::find_attribute(*el, "date"));
        if (!epoch_ms) {
            result.errors.push_back(RecordError{"call has no usable date attribute", origin});
            continue;
        }
        auto outgoing = parse_direction(xml::find_attribute(*el, "type"));
        if (!outgoing) {
            const std::string* type = xml::find_attribute(*el, "type");
            result.errors.push_back(RecordError{
                "unknown call type \"" + (type ? *type : "") + "\"", origin});
            continue;
        }
        const std::string* number = xml::find_attribute(*el, "number");
        if (!number || number->empty()) {
            result.errors.push_back(RecordError{"call has no number attribute", origin});
            continue;
        }
        auto duration = parse_epoch_ms(xml::find_attribute(*el, "duration"));

        CallRecord record;
        record.date = local_civil_from_epoch(floor_div(*epoch_ms, 1000));
        record.number = *number;
        record.outgoing = *outgoing;
        record.duration_seconds = duration && *duration > 0 ? unsigned(*duration) : 0;
        result.calls.push_back(std::move(record));
    }
    return result;
}

ParseOutcome to_outcome(const SmsResult& result) {
    ParseOutcome outcome;
    outcome.errors = result.errors;
    outcome.records_seen = result.records_seen;
    for (const SmsRecord& sms : result.messages) {
        EntryDraft draft;
        draft.timestamp = make_timestamp(sms.date.date, clock_of(sms.date));
        draft.summary = std::string("SMS ") + (sms.outgoing ? "to " : "from ") + sms.address +
                        ": " + std::string(utf8_prefix(sms.body, 80));
        draft.properties.emplace_back("CREATED", iso_local_string(sms.date));
        outcome.drafts.push_back(std::move(draft));
    }
    return outcome;
}

ParseOutcome to_outcome(const CallResult& result) {
    ParseOutcome outcome;
    outcome.errors = result.errors;
    outcome.records_seen = result.records_seen;
    for (const CallRecord& call : result.calls) {
        EntryDraft draft;
        ClockTime start = clock_of(call.date);
        std::int64_t end_minutes = minutes_since_epoch(call.date) + call.duration_seconds / 60;
        Date end_date = date_from_epoch_days(floor_div(end_minutes, 1440));
        std::int64_t rem = end_minutes - floor_div(end_minutes, 1440) * 1440;
        ClockTime end{unsigned(rem / 60), unsigned(rem % 60)};

        if (call.duration_seconds / 60 == 0)
            draft.timestamp = make_timestamp(call.date.date, start);
        else
            draft.timestamp = make_timestamp(call.date.date, start, std::nullopt,
                                             Stamp{end_date, end});
        draft.summary = std::string("Call ") + (call.outgoing ? "to " : "from ") + call.number +
                        " (" + std::to_string(call.duration_seconds) + "s)";
        draft.properties.emplace_back("CREATED", iso_local_string(call.date));
        outcome.drafts.push_back(std::move(draft));
    }
    return outcome;
}

} // namespace chronorg::phone
