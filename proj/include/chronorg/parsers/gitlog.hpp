#pragma once
// git-log dump reader. Input lines are produced by
//   git log --pretty=format:%H%x1f%an%x1f%aI%x1f%s
// so fields are split on the 0x1F unit separator and never collide with
// commit subjects.

#include <string>
#include <string_view>
#include <vector>

#include "chronorg/connector.hpp"
#include "chronorg/core.hpp"

namespace chronorg::gitlog {

struct CommitRecord {
    std::string hash;
    std::string author;
    CivilTime date;
    std::string subject;
};

struct ParseResult {
    std::vector<CommitRecord> commits;
    std::vector<RecordError> errors;
    std::size_t records_seen = 0;
};

ParseResult parse_log(std::string_view text, std::string_view origin_name = "gitlog");

ParseOutcome to_outcome(const ParseResult& result);

} // namespace chronorg::gitlog
