#include "chronorg/agenda.hpp"

#include <algorithm>
#include <cctype>

namespace chronorg::agenda {
namespace {

constexpr std::size_t kTagAlignColumn = 100;

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = char(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

void append_two(std::string& out, unsigned value) {
    out.push_back(char('0' + value / 10));
    out.push_back(char('0' + value % 10));
}

void append_clock(std::string& out, const ClockTime& t) {
    append_two(out, t.hour);
    out.push_back(':');
    append_two(out, t.minute);
}

// Sort within one day bucket: date-only entries first, then clock time,
// then summary; the remaining fields only break ties deterministically.
bool bucket_less(const SourcedEntry& a, const SourcedEntry& b) {
    const OrgTimestamp& ta = a.entry.timestamp;
    const OrgTimestamp& tb = b.entry.timestamp;
    if (ta.time.has_value() != tb.time.has_value())
        return !ta.time.has_value();
    ClockTime ca = ta.time.value_or(ClockTime{0, 0});
    ClockTime cb = tb.time.value_or(ClockTime{0, 0});
    if (ca != cb)
        return ca < cb;
    if (a.entry.summary != b.entry.summary)
        return a.entry.summary < b.entry.summary;
    if (a.source_tag != b.source_tag)
        return a.source_tag < b.source_tag;
    return a.entry.id < b.entry.id;
}

std::string tag_block(const std::vector<std::string>& tags) {
    if (tags.empty())
        return {};
    std::string block = ":";
    for (const std::string& tag : tags) {
        block += tag;
        block.push_back(':');
    }
    return block;
}

void render_day(std::string& out, const AgendaDay& day) {
    std::string header(weekday_name(derive_weekday(day.date)));
    header.append(header.size() < 10 ? 10 - header.size() : 0, ' ');
    header.push_back(' ');
    unsigned d = day.date.day;
    header.push_back(d < 10 ? ' ' : char('0' + d / 10));
    header.push_back(char('0' + d % 10));
    header.push_back(' ');
    header += month_name(day.date.month);
    header.push_back(' ');
    header += std::to_string(day.date.year);
    out += header;
    out.push_back('\n');

    if (day.entries.empty()) {
        out += "  (no entries)\n\n";
        return;
    }
    for (const SourcedEntry& item : day.entries) {
        std::string line = "  ";
        const OrgTimestamp& ts = item.entry.timestamp;
        if (!ts.time) {
            line.append(6, ' ');
        } else if (ts.end_time) {
            append_clock(line, *ts.time);
            line.push_back('-');
            append_clock(line, *ts.end_time);
            line.push_back(' ');
        } else {
            // Cross-day ranges show their start; the bucket date already
            // carries the day context.
            append_clock(line, *ts.time);
            line.push_back(' ');
        }
        line.push_back('[');
        line += item.source_tag;
        line += "] ";
        line += item.entry.summary;

        std::string block = tag_block(item.entry.tags);
        if (!block.empty()) {
            if (line.size() + block.size() + 1 <= kTagAlignColumn)
                line.append(kTagAlignColumn - line.size() - block.size(), ' ');
            else
                line.push_back(' ');
            line += block;
        }
        out += line;
        out.push_back('\n');
    }
    out.push_back('\n');
}

} // namespace

TagExpr TagExpr::parse(std::string_view text) {
    TagExpr expr;
    while (true) {
        size_t amp = text.find('&');
        std::string_view term = trim(text.substr(0, amp));
        if (!term.empty()) {
            bool negated = term.front() == '-';
            if (negated)
                term = trim(term.substr(1));
            if (!is_sanitized_tag(term))
                throw Error("bad tag expression term \"" + std::string(term) + "\"");
            (negated ? expr.excluded : expr.required).emplace_back(term);
        }
        if (amp == std::string_view::npos)
            break;
        text = text.substr(amp + 1);
    }
    return expr;
}

bool TagExpr::matches(const std::vector<std::string>& tags) const {
    auto has = [&](const std::string& tag) {
        return std::find(tags.begin(), tags.end(), tag) != tags.end();
    };
    for (const std::string& tag : required)
        if (!has(tag))
            return false;
    for (const std::string& tag : excluded)
        if (has(tag))
            return false;
    return true;
}

std::vector<SourcedEntry> load_files(const std::vector<std::string>& paths,
                                     std::vector<std::string>* file_errors) {
    std::vector<SourcedEntry> entries;
    for (const std::string& path : paths) {
        org::ParsedFile file;
        try {
            file = org::parse_file(path);
        } catch (const Error& e) {
            if (!file_errors)
                throw;
            file_errors->push_back(path + ": " + e.what());
            continue;
        }
        for (org::ParsedEntry& parsed : file.entries) {
            SourcedEntry item;
            item.entry = std::move(parsed.entry);
            item.source_name = file.source_name;
            item.source_tag = file.source_tag;
            item.file = path;
            item.line = parsed.line;
            entries.push_back(std::move(item));
        }
    }
    return entries;
}

std::vector<std::string> effective_tags(const SourcedEntry& entry) {
    std::vector<std::string> tags = entry.entry.tags;
    auto add = [&](const std::string& tag) {
        if (!tag.empty() && std::find(tags.begin(), tags.end(), tag) == tags.end())
            tags.push_back(tag);
    };
    if (!entry.source_tag.empty()) {
        add("Memacs");
        add(entry.source_tag);
    }
    return tags;
}

bool sparse_match(const SourcedEntry& entry, const AgendaQuery& query) {
    if (!query.tags.empty() && !query.tags.matches(effective_tags(entry)))
        return false;
    if (query.text) {
        std::string needle = lower(*query.text);
        if (lower(entry.entry.summary).find(needle) == std::string::npos)
            return false;
    }
    return true;
}

AgendaView collect(const std::vector<SourcedEntry>& entries, const AgendaQuery& query) {
    if (!query.from || !query.to)
        throw Error("agenda range requires both ends");
    if (*query.to < *query.from)
        throw InvertedRange("agenda range end precedes start");

    std::int64_t first = days_from_epoch(*query.from);
    std::int64_t last = days_from_epoch(*query.to);

    AgendaView view;
    view.days.resize(size_t(last - first + 1));
    for (std::int64_t d = first; d <= last; ++d)
        view.days[size_t(d - first)].date = date_from_epoch_days(d);

    for (const SourcedEntry& item : entries) {
        const OrgTimestamp& ts = item.entry.timestamp;
        std::int64_t begin = days_from_epoch(ts.date);
        std::int64_t end = ts.end_stamp ? days_from_epoch(ts.end_stamp->date) : begin;
        if (end < first || begin > last)
            continue;
        if (!sparse_match(item, query))
            continue;
        // Bucketed once, at the start date clamped into the range.
        view.days[size_t(std::max(begin, first) - first)].entries.push_back(item);
    }

    for (AgendaDay& day : view.days)
        std::stable_sort(day.entries.begin(), day.entries.end(), bucket_less);
    return view;
}

std::string render(const AgendaView& view) {
    std::string out;
    for (const AgendaDay& day : view.days)
        render_day(out, day);
    return out;
}

std::vector<SourcedEntry> sparse_scan(const std::vector<SourcedEntry>& entries,
                                      const AgendaQuery& query) {
    std::vector<SourcedEntry> matches;
    for (const SourcedEntry& item : entries)
        if (sparse_match(item, query))
            matches.push_back(item);
    return matches;
}

std::string render_sparse(const std::vector<SourcedEntry>& matches) {
    std::string out;
    for (const SourcedEntry& item : matches) {
        out += item.file;
        out.push_back(':');
        out += std::to_string(item.line);
        out += ": ";
        out += render_timestamp(item.entry.timestamp);
        out.push_back(' ');
        out += item.entry.summary;
        std::string block = tag_block(item.entry.tags);
        if (!block.empty()) {
            out.push_back(' ');
            out += block;
        }
        out.push_back('\n');
    }
    return out;
}

} // namespace chronorg::agenda
