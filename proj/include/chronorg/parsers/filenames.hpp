#pragma once
// Datestamped-filename scanner. Matches names that begin with
// "YYYY-MM-DD", optionally extended with "THH.MM" or "THH.MM.SS"
// (dots, not colons, so the stamp survives every filesystem).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronorg/connector.hpp"
#include "chronorg/core.hpp"

namespace chronorg::filenames {

struct StampMatch {
    Date date;
    std::optional<ClockTime> time;
    std::optional<unsigned> second;
};

// Leading-stamp match against a bare filename; nullopt when the name does
// not start with a valid stamp (including impossible calendar dates).
std::optional<StampMatch> match_stamp(std::string_view name);

struct FileRecord {
    StampMatch stamp;
    std::string name; // basename, used as the summary
    std::string path; // absolute path, used as the link
};

struct ScanResult {
    std::vector<FileRecord> files; // sorted by path
    std::vector<RecordError> errors; // unreadable directories
    std::size_t records_seen = 0;    // every regular file visited
};

// Recursive scan of root; non-matching names are skipped silently, basenames
// matching an ignore pattern (shell glob) are not visited at all.
// Throws SourceUnreadable when root is missing.
ScanResult scan_tree(const std::string& root,
                     const std::vector<std::string>& ignore_patterns = {});

ParseOutcome to_outcome(const ScanResult& result);

} // namespace chronorg::filenames
