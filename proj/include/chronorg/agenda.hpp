#pragma once
// Agenda queries over generated Org files: date-range bucketing, tag
// expressions with Org-style inheritance from the file heading, text
// search, and a plain-text day view renderer.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronorg/core.hpp"
#include "chronorg/org_file.hpp"

namespace chronorg::agenda {

// "work&computer&-private": '&'-joined terms, '-' negates a term.
struct TagExpr {
    std::vector<std::string> required;
    std::vector<std::string> excluded;

    static TagExpr parse(std::string_view text);
    bool matches(const std::vector<std::string>& tags) const;
    bool empty() const { return required.empty() && excluded.empty(); }
};

struct SourcedEntry {
    TimelineEntry entry;
    std::string source_name;
    std::string source_tag;
    std::string file;
    std::size_t line = 0; // entry heading line
};

// Entries of every file, flattened in path order. Files that fail to parse
// are reported through file_errors and skipped; without a sink the first
// failure propagates.
std::vector<SourcedEntry> load_files(const std::vector<std::string>& paths,
                                     std::vector<std::string>* file_errors = nullptr);

struct AgendaQuery {
    std::optional<Date> from;
    std::optional<Date> to; // inclusive
    TagExpr tags;
    std::optional<std::string> text; // case-insensitive substring of the summary
};

// Own tags plus the inherited file-level tags (Memacs, source tag).
std::vector<std::string> effective_tags(const SourcedEntry& entry);

// Tag and text filters only; the date-free half of collect.
bool sparse_match(const SourcedEntry& entry, const AgendaQuery& query);

struct AgendaDay {
    Date date;
    std::vector<SourcedEntry> entries; // date-only first, then by clock, then summary
};

struct AgendaView {
    std::vector<AgendaDay> days; // one per date in [from, to], even when empty
};

// Requires query.from and query.to. An entry is selected when its span
// touches the range and is bucketed once, at the later of its start date
// and query.from.
AgendaView collect(const std::vector<SourcedEntry>& entries, const AgendaQuery& query);

std::string render(const AgendaView& view);

// Date-free matches in file order, with their origin, for sparse listings.
std::vector<SourcedEntry> sparse_scan(const std::vector<SourcedEntry>& entries,
                                      const AgendaQuery& query);
std::string render_sparse(const std::vector<SourcedEntry>& matches);

} // namespace chronorg::agenda
