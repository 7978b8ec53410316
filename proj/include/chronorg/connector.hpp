#pragma once
// Shared run lifecycle for every connector: parse records, normalize to
// entries, turn per-record failures into error entries, sync to the output
// file under its lock, report counts.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronorg/core.hpp"
#include "chronorg/org_file.hpp"

namespace chronorg {

// A record that could not be parsed; becomes an error entry, never an abort.
struct RecordError {
    std::string message;
    std::string origin; // file path + position, or item id
};

// Entry material before tag sanitization and id assignment.
struct EntryDraft {
    OrgTimestamp timestamp;
    std::string summary;
    std::vector<std::string> tags; // raw; sanitized when finalized
    std::optional<std::string> link;
    std::vector<std::pair<std::string, std::string>> properties;
};

struct ParseOutcome {
    std::vector<EntryDraft> drafts;
    std::vector<RecordError> errors;
    std::size_t records_seen = 0;
};

struct ConnectorSpec {
    std::string name;
    std::string default_tag; // the output file's source tag
    std::vector<org::SyncMode> supported_modes;
    org::SyncMode default_mode = org::SyncMode::Overwrite;

    bool supports(org::SyncMode mode) const;
};

struct RunReport {
    std::size_t records_seen = 0;
    std::size_t entries_emitted = 0; // data entries + error entries
    std::size_t errors = 0;
    std::size_t added = 0;
    std::size_t skipped = 0;
    double duration_seconds = 0.0;
};

// Fixed mode table: filename scan regenerates and is overwrite-only; feeds
// are windowed and default to append; everything else re-reads its source
// and defaults to overwrite.
const std::vector<ConnectorSpec>& all_connectors();
const ConnectorSpec& connector_spec(std::string_view name); // throws Error on unknown name

org::SyncMode select_mode(const ConnectorSpec& spec, std::optional<org::SyncMode> requested);

RunReport run_connector(const ConnectorSpec& spec,
                        const std::function<ParseOutcome()>& parse,
                        org::SyncMode mode,
                        const std::filesystem::path& output,
                        const std::vector<std::string>& extra_tags = {});

} // namespace chronorg
