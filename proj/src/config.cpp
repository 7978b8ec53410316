#include "chronorg/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "chronorg/connector.hpp"

namespace chronorg::config {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

// Keys every connector section accepts.
const std::vector<std::string> kCommonKeys = {"input", "output", "mode", "tags"};

const std::vector<std::string> kCsvKeys = {"delimiter", "timestamp-column", "timestamp-format",
                                           "summary-columns", "tag-columns", "skip-header"};
const std::vector<std::string> kFilenamesKeys = {"ignore"};
const std::vector<std::string> kNoKeys = {};

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> items;
    while (!value.empty()) {
        size_t comma = value.find(',');
        std::string_view item = trim(value.substr(0, comma));
        if (!item.empty())
            items.emplace_back(item);
        if (comma == std::string_view::npos)
            break;
        value = value.substr(comma + 1);
    }
    return items;
}

} // namespace

const std::vector<std::string>& extra_keys_for(std::string_view connector) {
    if (connector == "csv")
        return kCsvKeys;
    if (connector == "filenames")
        return kFilenamesKeys;
    return kNoKeys;
}

AppConfig parse_config(std::string_view text) {
    AppConfig config;
    ConnectorOptions* section = nullptr;
    std::string section_name;

    std::size_t line_number = 0;
    while (!text.empty() || line_number == 0) {
        size_t nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_number;
        if (nl == std::string_view::npos && raw.empty())
            break;

        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("unterminated section header", line_number);
            std::string name(trim(line.substr(1, line.size() - 2)));
            bool known = false;
            for (const auto& spec : all_connectors())
                if (spec.name == name)
                    known = true;
            if (!known)
                throw ConfigError("unknown section [" + name + "]", line_number);
            if (config.sections.count(name))
                throw ConfigError("duplicate section [" + name + "]", line_number);
            section = &config.sections[name];
            section_name = name;
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected key = value", line_number);
        if (!section)
            throw ConfigError("key outside any section", line_number);
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError("empty key", line_number);

        bool common = std::find(kCommonKeys.begin(), kCommonKeys.end(), key) != kCommonKeys.end();
        const auto& extra = extra_keys_for(section_name);
        bool known = common || std::find(extra.begin(), extra.end(), key) != extra.end();
        if (!known)
            throw ConfigError("unknown key \"" + key + "\" in [" + section_name + "]",
                              line_number);

        if (key == "input") {
            if (section->input)
                throw ConfigError("duplicate key \"input\"", line_number);
            section->input = value;
        } else if (key == "output") {
            if (section->output)
                throw ConfigError("duplicate key \"output\"", line_number);
            section->output = value;
        } else if (key == "mode") {
            if (section->mode)
                throw ConfigError("duplicate key \"mode\"", line_number);
            if (value == "overwrite")
                section->mode = org::SyncMode::Overwrite;
            else if (value == "append")
                section->mode = org::SyncMode::Append;
            else
                throw ConfigError("mode must be overwrite or append, got \"" + value + "\"",
                                  line_number);
        } else if (key == "tags") {
            if (section->tags)
                throw ConfigError("duplicate key \"tags\"", line_number);
            section->tags = split_list(value);
        } else {
            if (section->extra.count(key))
                throw ConfigError("duplicate key \"" + key + "\"", line_number);
            section->extra[key] = value;
        }
    }
    return config;
}

AppConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ConnectorOptions resolve_options(const ConnectorOptions& from_file,
                                 const ConnectorOptions& from_flags) {
    ConnectorOptions merged = from_file;
    if (from_flags.input)
        merged.input = from_flags.input;
    if (from_flags.output)
        merged.output = from_flags.output;
    if (from_flags.mode)
        merged.mode = from_flags.mode;
    if (from_flags.tags)
        merged.tags = from_flags.tags;
    for (const auto& [key, value] : from_flags.extra)
        merged.extra[key] = value;
    return merged;
}

} // namespace chronorg::config
