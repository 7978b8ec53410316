#include "chronorg/org_file.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

namespace chronorg::org {
namespace {

constexpr std::string_view kPreambleLine1 = "## -*- coding: utf-8 mode: org -*-";
constexpr std::string_view kPreambleLine2 =
    "## this file is generated by chronorg — changes will be overwritten";
constexpr std::string_view kGeneratedByPrefix = "## generated-by: ";
constexpr std::size_t kTagColumn = 60;

void pad_and_tag(std::string& line, const std::string& tag_block) {
    if (line.size() < kTagColumn)
        line.append(kTagColumn - line.size(), ' ');
    else
        line.push_back(' ');
    line += tag_block;
}

std::string default_generated_by() {
    return std::string(kToolId) + " " + std::string(kToolVersion);
}

[[noreturn]] void io_fail(const std::filesystem::path& path, const char* action) {
    throw IoError(std::string(action) + " " + path.string() + ": " + std::strerror(errno));
}

std::string read_whole_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        io_fail(path, "cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        io_fail(path, "cannot read");
    return std::move(buf).str();
}

// ":a:b:" -> {"a", "b"}; empty result means the text is not a tag block.
std::vector<std::string> split_tag_block(std::string_view text) {
    if (text.size() < 3 || text.front() != ':' || text.back() != ':')
        return {};
    std::vector<std::string> tags;
    std::string_view inner = text.substr(1, text.size() - 2);
    while (!inner.empty()) {
        size_t colon = inner.find(':');
        std::string_view word = inner.substr(0, colon);
        if (!is_sanitized_tag(word))
            return {};
        tags.emplace_back(word);
        if (colon == std::string_view::npos)
            break;
        inner = inner.substr(colon + 1);
        if (inner.empty())
            return {}; // "::" inside the block
    }
    return tags;
}

// Splits "** <stamp> body   :tags:" parts off a heading line. Returns the
// remainder after the trailing tag block is removed, if one is present.
std::string_view strip_trailing_tags(std::string_view body, std::vector<std::string>& tags) {
    size_t last_space = body.find_last_of(' ');
    if (last_space == std::string_view::npos)
        return body;
    std::vector<std::string> candidate = split_tag_block(body.substr(last_space + 1));
    if (candidate.empty())
        return body;
    tags = std::move(candidate);
    size_t end = body.find_last_not_of(' ', last_space);
    return body.substr(0, end + 1);
}

bool is_hex_id(std::string_view text) {
    if (text.size() != 40)
        return false;
    return std::all_of(text.begin(), text.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    });
}

} // namespace

std::string_view sync_mode_name(SyncMode mode) {
    return mode == SyncMode::Overwrite ? "overwrite" : "append";
}

OrgOutputFile make_output_file(std::string source_name, std::string source_tag,
                               std::vector<TimelineEntry> entries) {
    OrgOutputFile file;
    file.source_name = single_line(source_name);
    if (file.source_name.empty())
        throw InvalidEntry("empty source name");
    file.source_tag = sanitize_tag(source_tag);
    file.generated_by = default_generated_by();
    file.entries = std::move(entries);
    return file;
}

std::string serialize_entry(const TimelineEntry& entry) {
    std::string line = "** " + render_timestamp(entry.timestamp) + " ";
    if (entry.link)
        line += "[[" + *entry.link + "][" + entry.summary + "]]";
    else
        line += entry.summary;
    if (!entry.tags.empty()) {
        std::string block = ":";
        for (const auto& tag : entry.tags) {
            block += tag;
            block.push_back(':');
        }
        pad_and_tag(line, block);
    }

    std::string out = std::move(line);
    out += "\n   :PROPERTIES:\n";
    for (const auto& [key, value] : entry.properties) {
        out += "   :" + key + ": " + value + "\n";
    }
    out += "   :ID: " + entry.id + "\n";
    out += "   :END:\n";
    return out;
}

std::string serialize_file(const OrgOutputFile& file) {
    std::string out;
    out += kPreambleLine1;
    out.push_back('\n');
    out += kPreambleLine2;
    out.push_back('\n');
    out += kGeneratedByPrefix;
    out += file.generated_by.empty() ? default_generated_by() : file.generated_by;
    out.push_back('\n');

    std::string heading = "* Memacs for " + file.source_name;
    pad_and_tag(heading, ":Memacs:" + file.source_tag + ":");
    out += heading;
    out.push_back('\n');

    for (const auto& entry : file.entries)
        out += serialize_entry(entry);
    return out;
}

WriteReport write_overwrite(const std::filesystem::path& path, const OrgOutputFile& file,
                            const std::function<void()>& after_temp_write) {
    std::set<std::string_view> seen;
    for (const auto& entry : file.entries)
        if (!seen.insert(entry.id).second)
            throw DuplicateId("duplicate id " + entry.id);

    FileLock lock(path);
    std::string payload = serialize_file(file);
    std::filesystem::path temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out)
            io_fail(temp, "cannot open");
        out.write(payload.data(), std::streamsize(payload.size()));
        out.flush();
        if (!out)
            io_fail(temp, "cannot write");
    }
    if (after_temp_write)
        after_temp_write(); // crash-injection point for tests
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec)
        throw IoError("cannot rename " + temp.string() + ": " + ec.message());
    return WriteReport{file.entries.size(), payload.size()};
}

AppendReport sync_append(const std::filesystem::path& path, const OrgOutputFile& incoming) {
    if (!std::filesystem::exists(path)) {
        OrgOutputFile first = incoming;
        first.entries.clear();
        AppendReport report;
        std::set<std::string> known;
        for (const auto& entry : incoming.entries) {
            if (known.insert(entry.id).second) {
                first.entries.push_back(entry);
                ++report.added;
            } else {
                ++report.skipped;
            }
        }
        write_overwrite(path, first);
        return report;
    }

    FileLock lock(path);
    ParsedFile existing;
    try {
        existing = parse_file(path);
    } catch (const ParseError& e) {
        throw MalformedExisting(path.string() + ": " + e.what());
    }

    std::set<std::string> known;
    for (const auto& parsed : existing.entries)
        known.insert(parsed.entry.id);

    AppendReport report;
    std::string addition;
    for (const auto& entry : incoming.entries) {
        if (known.count(entry.id)) {
            ++report.skipped;
            continue;
        }
        known.insert(entry.id);
        addition += serialize_entry(entry);
        ++report.added;
    }
    if (addition.empty())
        return report;

    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out)
        io_fail(path, "cannot open");
    out.write(addition.data(), std::streamsize(addition.size()));
    out.flush();
    if (!out)
        io_fail(path, "cannot append to");
    return report;
}

ParsedFile parse_file(const std::filesystem::path& path) {
    return parse_string(read_whole_file(path));
}

ParsedFile parse_string(std::string_view text) {
    ParsedFile file;
    std::set<std::string> seen_ids;

    std::vector<std::pair<std::string_view, std::size_t>> lines;
    {
        std::size_t number = 1;
        while (!text.empty()) {
            size_t nl = text.find('\n');
            lines.emplace_back(text.substr(0, nl), number++);
            if (nl == std::string_view::npos)
                break;
            text = text.substr(nl + 1);
        }
    }

    size_t i = 0;
    auto at_heading = [&] {
        return i < lines.size() && lines[i].first.starts_with("** ");
    };

    // Only empty input degrades to zero entries; anything else must open
    // with the fixed preamble line, or it is not one of our files. The
    // generated-by line is deliberately skipped: version text is not part
    // of equality.
    if (!lines.empty() && lines[0].first != kPreambleLine1)
        throw ParseError("missing generated-file preamble", 1);
    while (i < lines.size() && !lines[i].first.starts_with("*"))
        ++i;
    if (i < lines.size() && lines[i].first.starts_with("* ")) {
        std::string_view body = lines[i].first.substr(2);
        std::vector<std::string> heading_tags;
        body = strip_trailing_tags(body, heading_tags);
        if (body.starts_with("Memacs for "))
            file.source_name = std::string(body.substr(11));
        else
            file.source_name = std::string(body);
        if (heading_tags.size() == 2 && heading_tags[0] == "Memacs")
            file.source_tag = heading_tags[1];
        ++i;
    }

    while (i < lines.size()) {
        if (!at_heading()) {
            ++i; // unknown line outside an entry heading: ignored
            continue;
        }
        auto [line, line_number] = lines[i];
        std::string_view body = line.substr(3);

        if (!body.starts_with("<"))
            throw MalformedStamp("entry heading without a stamp", line_number);
        size_t close = body.find('>');
        if (close == std::string_view::npos)
            throw MalformedStamp("unterminated stamp", line_number);
        if (body.substr(close + 1).starts_with("--<")) {
            size_t second = body.find('>', close + 3);
            if (second == std::string_view::npos)
                throw MalformedStamp("unterminated end stamp", line_number);
            close = second;
        }
        OrgTimestamp ts;
        try {
            ts = parse_timestamp(body.substr(0, close + 1));
        } catch (const MalformedStamp& e) {
            throw MalformedStamp(e.what(), line_number);
        }

        std::string_view rest = body.substr(close + 1);
        if (!rest.starts_with(" ") || rest.size() < 2)
            throw MalformedStamp("missing summary", line_number);
        rest = rest.substr(1);

        std::vector<std::string> tags;
        rest = strip_trailing_tags(rest, tags);

        TimelineEntry entry;
        entry.timestamp = ts;
        entry.tags = std::move(tags);
        if (rest.starts_with("[[") && rest.ends_with("]]")) {
            size_t sep = rest.find("][");
            if (sep != std::string_view::npos) {
                entry.link = std::string(rest.substr(2, sep - 2));
                entry.summary = std::string(rest.substr(sep + 2, rest.size() - sep - 4));
            } else {
                entry.summary = std::string(rest);
            }
        } else {
            entry.summary = std::string(rest);
        }
        if (entry.summary.empty())
            throw MalformedStamp("missing summary", line_number);

        ++i;
        if (i >= lines.size() || lines[i].first != "   :PROPERTIES:")
            throw MalformedDrawer("missing :PROPERTIES: drawer",
                                  i < lines.size() ? lines[i].second : line_number);
        ++i;
        bool closed = false;
        while (i < lines.size()) {
            auto [drawer_line, drawer_number] = lines[i];
            if (drawer_line == "   :END:") {
                closed = true;
                ++i;
                break;
            }
            if (!drawer_line.starts_with("   :"))
                throw MalformedDrawer("unexpected line inside drawer", drawer_number);
            std::string_view kv = drawer_line.substr(4);
            size_t colon = kv.find(':');
            if (colon == std::string_view::npos || colon == 0)
                throw MalformedDrawer("malformed property line", drawer_number);
            std::string key(kv.substr(0, colon));
            std::string_view value = kv.substr(colon + 1);
            if (!value.empty()) {
                if (!value.starts_with(" "))
                    throw MalformedDrawer("property value must follow \": \"", drawer_number);
                value = value.substr(1);
            }
            if (key == "ID") {
                if (!is_hex_id(value))
                    throw MalformedDrawer("ID is not a 40-char hex digest", drawer_number);
                entry.id = std::string(value);
            } else {
                entry.properties.emplace_back(std::move(key), std::string(value));
            }
            ++i;
        }
        if (!closed)
            throw MalformedDrawer("drawer not closed with :END:",
                                  lines.back().second);
        if (entry.id.empty())
            throw MalformedDrawer("drawer lacks an ID property", line_number);
        if (!seen_ids.insert(entry.id).second)
            throw DuplicateId("duplicate id " + entry.id, line_number);

        file.entries.push_back(ParsedEntry{std::move(entry), line_number});
    }
    return file;
}

TimelineEntry make_error_entry(std::string_view message, std::string_view origin) {
    if (message.empty())
        throw InvalidEntry("empty error message");
    CivilTime now = local_civil_from_epoch(std::time(nullptr));
    OrgTimestamp ts = make_timestamp(now.date, clock_of(now));
    std::vector<std::pair<std::string, std::string>> props;
    props.emplace_back("ORIGIN", std::string(origin));
    return make_entry(ts, "Memacs error: " + std::string(message), {"Memacs", "error"},
                      std::nullopt, std::move(props));
}

FileLock::FileLock(const std::filesystem::path& target) {
    std::filesystem::path lock_path = target;
    lock_path += ".lock";
    fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0)
        io_fail(lock_path, "cannot open lock file");
    if (::flock(fd_, LOCK_EX) != 0) {
        int saved = errno;
        ::close(fd_);
        fd_ = -1;
        errno = saved;
        io_fail(lock_path, "cannot lock");
    }
}

FileLock::~FileLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

} // namespace chronorg::org
