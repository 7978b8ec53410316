#pragma once
// INI-style configuration. Every section names a connector; keys are
// checked against a per-connector registry so typos fail loudly instead
// of being ignored.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronorg/org_file.hpp"

namespace chronorg::config {

// One connector section, and also the shape of the command-line flags.
// Unset fields fall through during resolution.
struct ConnectorOptions {
    std::optional<std::string> input;
    std::optional<std::string> output;
    std::optional<org::SyncMode> mode;
    std::optional<std::vector<std::string>> tags; // extra tags for every entry
    // Connector-specific keys (csv delimiter and friends), raw values.
    std::map<std::string, std::string> extra;
};

struct AppConfig {
    std::map<std::string, ConnectorOptions> sections;
};

// '#' comments, "[section]" headers, "key = value" lines.
// Throws ConfigError with a line number on unknown sections or keys,
// duplicate keys, or malformed lines.
AppConfig parse_config(std::string_view text);

AppConfig load_config(const std::string& path);

// Flag values win over file values, field by field; 'extra' is merged
// per key. Pure, so precedence is directly testable.
ConnectorOptions resolve_options(const ConnectorOptions& from_file,
                                 const ConnectorOptions& from_flags);

const std::vector<std::string>& extra_keys_for(std::string_view connector);

} // namespace chronorg::config
