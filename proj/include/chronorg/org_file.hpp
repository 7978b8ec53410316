#pragma once
// Writer and subset parser for generated Org files, plus the two sync modes.
// Output is byte-deterministic: UTF-8, LF, fixed preamble, fixed padding.

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "chronorg/core.hpp"

namespace chronorg::org {

inline constexpr std::string_view kToolId = "chronorg";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class SyncMode { Overwrite, Append };

std::string_view sync_mode_name(SyncMode mode);

struct OrgOutputFile {
    std::string source_name;
    std::string source_tag;   // sanitized, joins :Memacs:<tag>: on the heading
    std::string generated_by; // tool id + version, defaulted by make_output_file
    std::vector<TimelineEntry> entries;
};

OrgOutputFile make_output_file(std::string source_name, std::string source_tag,
                               std::vector<TimelineEntry> entries = {});

struct WriteReport {
    std::size_t entries_written = 0;
    std::size_t bytes_written = 0;
};

struct AppendReport {
    std::size_t added = 0;
    std::size_t skipped = 0;
};

struct ParsedEntry {
    TimelineEntry entry;
    std::size_t line = 0; // heading line, 1-based
};

struct ParsedFile {
    std::string source_name;
    std::string source_tag;
    std::vector<ParsedEntry> entries;
};

// ** <stamp> summary/link, tags padded to column 60, three-space drawer
// ending with the ID property. Exact grammar is pinned by golden tests.
std::string serialize_entry(const TimelineEntry& entry);
std::string serialize_file(const OrgOutputFile& file);

// Atomic full rewrite: serialize to a temp sibling, rename over path.
// after_temp_write is a fault-injection hook for crash-safety tests.
WriteReport write_overwrite(const std::filesystem::path& path, const OrgOutputFile& file,
                            const std::function<void()>& after_temp_write = {});

// Appends entries whose id is not already present; never rewrites existing
// bytes. An absent path degenerates to write_overwrite. Throws
// MalformedExisting when the existing file fails the subset parse.
AppendReport sync_append(const std::filesystem::path& path, const OrgOutputFile& incoming);

ParsedFile parse_file(const std::filesystem::path& path);
ParsedFile parse_string(std::string_view text);

// Entry stamped "now" that surfaces a connector problem on the agenda:
// summary "Memacs error: <message>", tags :Memacs:error:, ORIGIN property.
TimelineEntry make_error_entry(std::string_view message, std::string_view origin);

// Advisory per-output-file lock (<path>.lock, flock). Blocks until held.
class FileLock {
public:
    explicit FileLock(const std::filesystem::path& target);
    ~FileLock();
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

} // namespace chronorg::org
