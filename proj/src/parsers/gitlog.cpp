#include "chronorg/parsers/gitlog.hpp"

#include "chronorg/parsers/feed.hpp"

namespace chronorg::gitlog {
namespace {

constexpr char kUnit = '\x1F';

bool is_commit_hash(std::string_view text) {
    if (text.size() != 40)
        return false;
    for (char c : text)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')))
            return false;
    return true;
}

} // namespace

ParseResult parse_log(std::string_view text, std::string_view origin_name) {
    ParseResult result;
    std::size_t line_number = 0;
    while (!text.empty()) {
        size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_number;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty())
            continue;

        ++result.records_seen;
        std::string origin = std::string(origin_name) + ":" + std::to_string(line_number);

        std::vector<std::string_view> fields;
        std::string_view rest = line;
        while (fields.size() < 3) {
            size_t sep = rest.find(kUnit);
            if (sep == std::string_view::npos)
                break;
            fields.push_back(rest.substr(0, sep));
            rest = rest.substr(sep + 1);
        }
        fields.push_back(rest); // subject keeps any further separators

        if (fields.size() != 4) {
            result.errors.push_back(RecordError{
                "expected 4 unit-separated fields, got " + std::to_string(fields.size()),
                origin});
            continue;
        }
        if (!is_commit_hash(fields[0])) {
            result.errors.push_back(
                RecordError{"malformed commit hash \"" + std::string(fields[0]) + "\"", origin});
            continue;
        }
        std::optional<CivilTime> date = feed::parse_iso8601(fields[2]);
        if (!date) {
            result.errors.push_back(
                RecordError{"unparseable author date \"" + std::string(fields[2]) + "\"",
                            origin});
            continue;
        }

        CommitRecord record;
        record.hash = std::string(fields[0]);
        record.author = std::string(fields[1]);
        record.date = *date;
        record.subject = std::string(fields[3]);
        result.commits.push_back(std::move(record));
    }
    return result;
}

ParseOutcome to_outcome(const ParseResult& result) {
    ParseOutcome outcome;
    outcome.errors = result.errors;
    outcome.records_seen = result.records_seen;
    for (const CommitRecord& commit : result.commits) {
        EntryDraft draft;
        draft.timestamp = make_timestamp(commit.date.date, clock_of(commit.date));
        std::string author = commit.author.empty() ? "(unknown author)" : commit.author;
        draft.summary = author + ": " + commit.subject;
        draft.link = "commit:" + commit.hash;
        draft.properties.emplace_back("COMMIT", commit.hash);
        draft.properties.emplace_back("CREATED", iso_local_string(commit.date));
        outcome.drafts.push_back(std::move(draft));
    }
    return outcome;
}

} // namespace chronorg::gitlog
