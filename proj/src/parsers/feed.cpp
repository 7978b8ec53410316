#include "chronorg/parsers/feed.hpp"

#include <cctype>

#include "chronorg/parsers/mail.hpp"
#include "chronorg/xml.hpp"

namespace chronorg::feed {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::string child_text(const xml::Element& el, std::string_view name) {
    const xml::Element* child = xml::find_child(el, name);
    return child ? std::string(trim(child->text)) : std::string();
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

std::string item_origin(std::string_view origin_name, const xml::Element& el) {
    return std::string(origin_name) + ":" + std::to_string(el.line);
}

ItemRecord* push_item(ParseResult& result, std::string_view origin_name, const xml::Element& el,
                      const std::string& date_text, std::optional<CivilTime> date,
                      const char* date_element) {
    ++result.records_seen;
    if (date_text.empty()) {
        result.errors.push_back(RecordError{std::string("item is missing ") + date_element,
                                            item_origin(origin_name, el)});
        return nullptr;
    }
    if (!date) {
        result.errors.push_back(RecordError{
            std::string("unparseable ") + date_element + " \"" + date_text + "\"",
            item_origin(origin_name, el)});
        return nullptr;
    }
    ItemRecord record;
    record.date = *date;
    record.origin = item_origin(origin_name, el);
    result.items.push_back(std::move(record));
    return &result.items.back();
}

} // namespace

std::optional<CivilTime> parse_iso8601(std::string_view text) {
    text = trim(text);
    auto year = read_digits(text, 0, 4);
    auto month = read_digits(text, 5, 2);
    auto day = read_digits(text, 8, 2);
    if (!year || !month || !day || text.size() < 19)
        return std::nullopt;
    if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' '))
        return std::nullopt;
    auto hour = read_digits(text, 11, 2);
    auto minute = read_digits(text, 14, 2);
    auto second = read_digits(text, 17, 2);
    if (!hour || !minute || !second || text[13] != ':' || text[16] != ':')
        return std::nullopt;
    if (*hour > 23 || *minute > 59 || *second > 60)
        return std::nullopt;

    CivilTime t;
    t.date = Date{int(*year), *month, *day};
    if (!is_valid_date(t.date))
        return std::nullopt;
    t.hour = *hour;
    t.minute = *minute;
    t.second = *second == 60 ? 59 : *second;

    size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
    }
    if (pos == text.size())
        return t; // naive local time
    char zone = text[pos];
    if (zone == 'Z' && pos + 1 == text.size())
        return local_from_offset_civil(t, 0);
    if (zone != '+' && zone != '-')
        return std::nullopt;
    auto oh = read_digits(text, pos + 1, 2);
    std::optional<unsigned> om;
    if (pos + 3 == text.size())
        om = 0u;
    else if (pos + 6 == text.size() && text[pos + 3] == ':')
        om = read_digits(text, pos + 4, 2);
    else if (pos + 5 == text.size())
        om = read_digits(text, pos + 3, 2);
    if (!oh || !om || *om > 59)
        return std::nullopt;
    int offset = int(*oh * 3600 + *om * 60);
    if (zone == '-')
        offset = -offset;
    return local_from_offset_civil(t, offset);
}

ParseResult parse_feed(std::string_view xml_text, std::string_view origin_name) {
    xml::Element root = xml::parse(xml_text);
    ParseResult result;

    if (xml::name_is(root, "rss")) {
        const xml::Element* channel = xml::find_child(root, "channel");
        if (!channel)
            throw NotAFeed(std::string(origin_name) + ": rss element without a channel");
        for (const xml::Element* item : xml::find_children(*channel, "item")) {
            std::string date_text = child_text(*item, "pubDate");
            ItemRecord* record = push_item(result, origin_name, *item, date_text,
                                           mail::parse_rfc822_date(date_text), "pubDate");
            if (!record)
                continue;
            record->title = child_text(*item, "title");
            std::string link = child_text(*item, "link");
            if (!link.empty())
                record->link = std::move(link);
            for (const xml::Element* category : xml::find_children(*item, "category")) {
                std::string tag(trim(category->text));
                if (!tag.empty())
                    record->categories.push_back(std::move(tag));
            }
        }
        return result;
    }

    if (xml::name_is(root, "feed")) {
        for (const xml::Element* entry : xml::find_children(root, "entry")) {
            std::string date_text = child_text(*entry, "updated");
            ItemRecord* record = push_item(result, origin_name, *entry, date_text,
                                           parse_iso8601(date_text), "updated");
            if (!record)
                continue;
            record->title = child_text(*entry, "title");
            const xml::Element* chosen = nullptr;
            for (const xml::Element* link : xml::find_children(*entry, "link")) {
                const std::string* rel = xml::find_attribute(*link, "rel");
                if (!chosen || !rel || *rel == "alternate")
                    chosen = link;
                if (rel && *rel == "alternate")
                    break;
            }
            if (chosen)
                if (const std::string* href = xml::find_attribute(*chosen, "href"))
                    record->link = *href;
            for (const xml::Element* category : xml::find_children(*entry, "category"))
                if (const std::string* term = xml::find_attribute(*category, "term"))
                    if (!term->empty())
                        record->categories.push_back(*term);
        }
        return result;
    }

    throw NotAFeed(std::string(origin_name) + ": root element <" + root.name +
                   "> is neither rss nor feed");
}

ParseOutcome to_outcome(const ParseResult& result) {
    ParseOutcome outcome;
    outcome.errors = result.errors;
    outcome.records_seen = result.records_seen;
    for (const ItemRecord& item : result.items) {
        EntryDraft draft;
        draft.timestamp = make_timestamp(item.date.date, clock_of(item.date));
        draft.summary = item.title.empty() ? "(no title)" : item.title;
        draft.link = item.link;
        draft.tags = item.categories;
        draft.properties.emplace_back("CREATED", iso_local_string(item.date));
        outcome.drafts.push_back(std::move(draft));
    }
    return outcome;
}

} // namespace chronorg::feed
