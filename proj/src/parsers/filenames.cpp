#include "chronorg/parsers/filenames.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <filesystem>

namespace chronorg::filenames {
namespace {

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

bool ignored(const std::string& basename, const std::vector<std::string>& patterns) {
    for (const std::string& pattern : patterns)
        if (::fnmatch(pattern.c_str(), basename.c_str(), 0) == 0)
            return true;
    return false;
}

} // namespace

std::optional<StampMatch> match_stamp(std::string_view name) {
    auto year = read_digits(name, 0, 4);
    auto month = read_digits(name, 5, 2);
    auto day = read_digits(name, 8, 2);
    if (!year || !month || !day || name[4] != '-' || name[7] != '-')
        return std::nullopt;
    StampMatch match;
    match.date = Date{int(*year), *month, *day};
    if (!is_valid_date(match.date))
        return std::nullopt;

    // "T15.29" or "T15.29.45"; anything else after the date is name text.
    if (name.size() > 10 && name[10] == 'T') {
        auto hour = read_digits(name, 11, 2);
        auto minute = read_digits(name, 14, 2);
        if (hour && minute && name[13] == '.' && *hour <= 23 && *minute <= 59) {
            match.time = ClockTime{*hour, *minute};
            if (name.size() > 16 && name[16] == '.') {
                auto second = read_digits(name, 17, 2);
                if (second && *second <= 60)
                    match.second = *second == 60 ? 59 : *second;
            }
        }
    }
    return match;
}

ScanResult scan_tree(const std::string& root, const std::vector<std::string>& ignore_patterns) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw SourceUnreadable(root + " is not a readable directory");

    ScanResult result;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec)
        throw SourceUnreadable("cannot scan " + root + ": " + ec.message());

    fs::recursive_directory_iterator end;
    while (it != end) {
        const fs::directory_entry& item = *it;
        std::string basename = item.path().filename().string();
        if (ignored(basename, ignore_patterns)) {
            if (item.is_directory(ec))
                it.disable_recursion_pending();
            it.increment(ec);
            if (ec)
                break;
            continue;
        }
        if (item.is_directory(ec)) {
            // Probe readability now so one opaque subtree does not abort
            // the whole walk.
            fs::directory_iterator probe(item.path(), ec);
            if (ec) {
                result.errors.push_back(RecordError{"cannot read directory: " + ec.message(),
                                                    item.path().string()});
                it.disable_recursion_pending();
            }
        } else if (item.is_regular_file(ec)) {
            ++result.records_seen;
            if (auto stamp = match_stamp(basename)) {
                FileRecord record;
                record.stamp = *stamp;
                record.name = std::move(basename);
                record.path = fs::absolute(item.path()).lexically_normal().string();
                result.files.push_back(std::move(record));
            }
        }
        it.increment(ec);
        if (ec)
            break;
    }

    std::sort(result.files.begin(), result.files.end(),
              [](const FileRecord& a, const FileRecord& b) { return a.path < b.path; });
    return result;
}

ParseOutcome to_outcome(const ScanResult& result) {
    ParseOutcome outcome;
    outcome.errors = result.errors;
    outcome.records_seen = result.records_seen;
    for (const FileRecord& file : result.files) {
        EntryDraft draft;
        draft.timestamp = make_timestamp(file.stamp.date, file.stamp.time);
        draft.summary = file.name;
        draft.link = file.path;
        if (file.stamp.time && file.stamp.second) {
            CivilTime t{file.stamp.date, file.stamp.time->hour, file.stamp.time->minute,
                        *file.stamp.second};
            draft.properties.emplace_back("CREATED", iso_local_string(t));
        }
        outcome.drafts.push_back(std::move(draft));
    }
    return outcome;
}

} // namespace chronorg::filenames
