#include "chronorg/parsers/csv.hpp"

#include <algorithm>

namespace chronorg::csv {
namespace {

struct RawRecord {
    std::string text;
    std::size_t line = 0; // first line of the record, 1-based
};

// Quote-aware record extraction: newlines inside quoted fields do not end
// the record (RFC 4180 §2.6).
std::vector<RawRecord> split_records(std::string_view text) {
    std::vector<RawRecord> records;
    RawRecord current;
    current.line = 1;
    std::size_t line = 1;
    bool in_quotes = false;

    auto flush = [&] {
        if (!current.text.empty())
            records.push_back(std::move(current));
        current = RawRecord{};
        current.line = line;
    };

    for (char c : text) {
        if (c == '\r')
            continue;
        if (c == '"')
            in_quotes = !in_quotes;
        if (c == '\n') {
            ++line;
            if (!in_quotes) {
                flush();
                continue;
            }
        }
        current.text.push_back(c);
    }
    flush();
    return records;
}

std::optional<unsigned> read_digits(std::string_view text, size_t& pos, size_t count) {
    if (pos + count > text.size())
        return std::nullopt;
    unsigned value = 0;
    for (size_t i = 0; i < count; ++i) {
        char c = text[pos + i];
        if (c < '0' || c > '9')
            return std::nullopt;
        value = value * 10 + unsigned(c - '0');
    }
    pos += count;
    return value;
}

} // namespace

std::vector<std::string> split_record(std::string_view record, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    size_t i = 0;
    while (true) {
        if (i < record.size() && record[i] == '"') {
            ++i;
            while (i < record.size()) {
                if (record[i] == '"') {
                    if (i + 1 < record.size() && record[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                field.push_back(record[i++]);
            }
        }
        while (i < record.size() && record[i] != delimiter)
            field.push_back(record[i++]);
        fields.push_back(std::move(field));
        field.clear();
        if (i >= record.size())
            break;
        ++i; // skip the delimiter
    }
    return fields;
}

std::optional<CivilTime> parse_with_format(std::string_view text, std::string_view format) {
    CivilTime t{Date{1970, 1, 1}, 0, 0, 0};
    bool saw_year = false, saw_month = false, saw_day = false;
    size_t pos = 0;

    for (size_t f = 0; f < format.size(); ++f) {
        if (format[f] != '%') {
            if (pos >= text.size() || text[pos] != format[f])
                return std::nullopt;
            ++pos;
            continue;
        }
        if (++f >= format.size())
            return std::nullopt;
        switch (format[f]) {
        case 'Y': {
            auto v = read_digits(text, pos, 4);
            if (!v)
                return std::nullopt;
            t.date.year = int(*v);
            saw_year = true;
            break;
        }
        case 'm': {
            auto v = read_digits(text, pos, 2);
            if (!v)
                return std::nullopt;
            t.date.month = *v;
            saw_month = true;
            break;
        }
        case 'd': {
            auto v = read_digits(text, pos, 2);
            if (!v)
                return std::nullopt;
            t.date.day = *v;
            saw_day = true;
            break;
        }
        case 'H': {
            auto v = read_digits(text, pos, 2);
            if (!v || *v > 23)
                return std::nullopt;
            t.hour = *v;
            break;
        }
        case 'M': {
            auto v = read_digits(text, pos, 2);
            if (!v || *v > 59)
                return std::nullopt;
            t.minute = *v;
            break;
        }
        case 'S': {
            auto v = read_digits(text, pos, 2);
            if (!v || *v > 60)
                return std::nullopt;
            t.second = *v == 60 ? 59 : *v;
            break;
        }
        case '%':
            if (pos >= text.size() || text[pos] != '%')
                return std::nullopt;
            ++pos;
            break;
        default:
            return std::nullopt; // unsupported directive
        }
    }
    if (pos != text.size() || !saw_year || !saw_month || !saw_day)
        return std::nullopt;
    if (!is_valid_date(t.date))
        return std::nullopt;
    return t;
}

ParseOutcome parse_csv(std::string_view text, const Options& options,
                       std::string_view origin_name) {
    ParseOutcome outcome;
    std::vector<RawRecord> records = split_records(text);
    size_t first = 0;
    if (options.skip_header && !records.empty())
        first = 1;

    bool with_time = options.timestamp_format.find("%H") != std::string::npos;
    bool with_seconds = options.timestamp_format.find("%S") != std::string::npos;

    std::size_t needed = options.timestamp_column;
    for (std::size_t c : options.summary_columns)
        needed = std::max(needed, c);
    for (std::size_t c : options.tag_columns)
        needed = std::max(needed, c);

    for (size_t r = first; r < records.size(); ++r) {
        ++outcome.records_seen;
        std::string origin = std::string(origin_name) + ":" + std::to_string(records[r].line);
        std::vector<std::string> fields = split_record(records[r].text, options.delimiter);
        if (fields.size() <= needed) {
            outcome.errors.push_back(
                RecordError{"row has " + std::to_string(fields.size()) + " fields, needs " +
                                std::to_string(needed + 1),
                            origin});
            continue;
        }
        std::optional<CivilTime> t =
            parse_with_format(fields[options.timestamp_column], options.timestamp_format);
        if (!t) {
            outcome.errors.push_back(
                RecordError{"cannot parse \"" + fields[options.timestamp_column] +
                                "\" with format \"" + options.timestamp_format + "\"",
                            origin});
            continue;
        }

        EntryDraft draft;
        draft.timestamp = make_timestamp(
            t->date, with_time ? std::optional<ClockTime>(clock_of(*t)) : std::nullopt);
        std::string summary;
        for (size_t i = 0; i < options.summary_columns.size(); ++i) {
            if (i)
                summary += " — ";
            summary += fields[options.summary_columns[i]];
        }
        draft.summary = std::move(summary);
        for (std::size_t c : options.tag_columns)
            if (!fields[c].empty())
                draft.tags.push_back(fields[c]);
        if (with_time && with_seconds)
            draft.properties.emplace_back("CREATED", iso_local_string(*t));
        outcome.drafts.push_back(std::move(draft));
    }
    return outcome;
}

} // namespace chronorg::csv
