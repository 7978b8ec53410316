#include "chronorg/connector.hpp"

#include <chrono>
#include <unordered_set>

namespace chronorg {

using org::SyncMode;

bool ConnectorSpec::supports(SyncMode mode) const {
    for (SyncMode m : supported_modes)
        if (m == mode)
            return true;
    return false;
}

const std::vector<ConnectorSpec>& all_connectors() {
    // The filename scan walks the whole tree every run, so appending could
    // only ever duplicate work; feeds show a sliding window of items, so
    // overwriting would forget everything that scrolled out.
    static const std::vector<ConnectorSpec> table = {
        {"filenames", "filedatestamps", {SyncMode::Overwrite}, SyncMode::Overwrite},
        {"csv", "csv", {SyncMode::Overwrite, SyncMode::Append}, SyncMode::Overwrite},
        {"ical", "ical", {SyncMode::Overwrite, SyncMode::Append}, SyncMode::Overwrite},
        {"mail", "mail", {SyncMode::Overwrite, SyncMode::Append}, SyncMode::Overwrite},
        {"rss", "rss", {SyncMode::Overwrite, SyncMode::Append}, SyncMode::Append},
        {"gitlog", "gitlog", {SyncMode::Overwrite, SyncMode::Append}, SyncMode::Overwrite},
        {"exif", "exif", {SyncMode::Overwrite, SyncMode::Append}, SyncMode::Overwrite},
        {"sms", "sms", {SyncMode::Overwrite, SyncMode::Append}, SyncMode::Overwrite},
        {"calls", "calls", {SyncMode::Overwrite, SyncMode::Append}, SyncMode::Overwrite},
    };
    return table;
}

const ConnectorSpec& connector_spec(std::string_view name) {
    for (const auto& spec : all_connectors())
        if (spec.name == name)
            return spec;
    throw Error("unknown connector \"" + std::string(name) + "\"");
}

SyncMode select_mode(const ConnectorSpec& spec, std::optional<SyncMode> requested) {
    if (!requested)
        return spec.default_mode;
    if (!spec.supports(*requested))
        throw UnsupportedMode("connector " + spec.name + " does not support " +
                              std::string(sync_mode_name(*requested)) + " mode");
    return *requested;
}

RunReport run_connector(const ConnectorSpec& spec,
                        const std::function<ParseOutcome()>& parse,
                        SyncMode mode,
                        const std::filesystem::path& output,
                        const std::vector<std::string>& extra_tags) {
    auto started = std::chrono::steady_clock::now();
    if (!spec.supports(mode))
        throw UnsupportedMode("connector " + spec.name + " does not support " +
                              std::string(sync_mode_name(mode)) + " mode");

    ParseOutcome outcome = parse();

    org::OrgOutputFile file = org::make_output_file(spec.name, spec.default_tag);
    std::vector<RecordError> errors = std::move(outcome.errors);
    for (auto& draft : outcome.drafts) {
        // Records that bring their own taxonomy (feed categories, csv tag
        // columns) keep it; everything else is tagged with the connector
        // tag so the provenance shows on the entry itself.
        std::vector<std::string> tags = std::move(draft.tags);
        if (tags.empty())
            tags.push_back(spec.default_tag);
        tags.insert(tags.end(), extra_tags.begin(), extra_tags.end());
        try {
            file.entries.push_back(make_entry(draft.timestamp, draft.summary, std::move(tags),
                                              std::move(draft.link),
                                              std::move(draft.properties)));
        } catch (const Error& e) {
            errors.push_back(RecordError{e.what(), spec.name});
        }
    }
    for (const auto& error : errors)
        file.entries.push_back(org::make_error_entry(error.message, error.origin));

    RunReport report;

    // A source that repeats a record verbatim repeats its id; keep the
    // first occurrence so the output file invariant holds.
    {
        std::unordered_set<std::string> seen;
        std::vector<TimelineEntry> unique;
        unique.reserve(file.entries.size());
        for (auto& entry : file.entries) {
            if (seen.insert(entry.id).second)
                unique.push_back(std::move(entry));
            else
                ++report.skipped;
        }
        file.entries = std::move(unique);
    }

    report.records_seen = outcome.records_seen;
    report.entries_emitted = file.entries.size();
    report.errors = errors.size();

    if (mode == SyncMode::Overwrite) {
        org::WriteReport write = org::write_overwrite(output, file);
        report.added = write.entries_written;
    } else {
        org::AppendReport append = org::sync_append(output, file);
        report.added = append.added;
        report.skipped += append.skipped;
    }

    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

} // namespace chronorg
