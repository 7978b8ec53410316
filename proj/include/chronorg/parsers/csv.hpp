#pragma once
// Delimited text import: RFC 4180 quoting with a configurable delimiter,
// a strptime-style subset for the timestamp column, and free choice of
// which columns feed the summary.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronorg/connector.hpp"
#include "chronorg/core.hpp"

namespace chronorg::csv {

struct Options {
    char delimiter = ';';
    bool skip_header = true;
    std::size_t timestamp_column = 0;
    // "%d.%m.%Y %H:%M" style; supported directives: %Y %m %d %H %M %S.
    // Without %H the rows become date-only entries.
    std::string timestamp_format = "%Y-%m-%d %H:%M";
    // 0-based; the referenced fields are joined with " — ".
    std::vector<std::size_t> summary_columns{1};
    std::vector<std::size_t> tag_columns;
};

// One logical record per call; quoted fields may span lines.
std::vector<std::string> split_record(std::string_view record, char delimiter);

std::optional<CivilTime> parse_with_format(std::string_view text, std::string_view format);

ParseOutcome parse_csv(std::string_view text, const Options& options,
                       std::string_view origin_name = "csv");

} // namespace chronorg::csv
