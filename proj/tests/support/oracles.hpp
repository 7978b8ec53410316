#pragma once
// Independent reference implementations and corpus generators used by both
// the unit tests and the acceptance suite. Nothing here calls back into the
// code paths it is meant to check.

#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "chronorg/agenda.hpp"
#include "chronorg/core.hpp"

namespace chronorg::testing {

// Zeller's congruence; 0 = Monday .. 6 = Sunday.
int weekday_by_zeller(int year, unsigned month, unsigned day);

std::filesystem::path fixture(const std::string& name);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Fresh directory under the system temp dir; caller removes it.
std::filesystem::path fresh_dir(const std::string& hint);

// Entry with a random stamp shape, summary, tags, link and properties,
// built through make_entry so invariants hold.
TimelineEntry random_entry(std::mt19937& rng);

// Brute-force agenda reference: per-entry bucket computation and an
// insertion sort with its own comparison. Requires query.from and query.to.
agenda::AgendaView naive_collect(const std::vector<agenda::SourcedEntry>& entries,
                                 const agenda::AgendaQuery& query);

// Flattens a view to "date|id,id;..." for cheap equality and readable diffs.
std::string view_signature(const agenda::AgendaView& view);

} // namespace chronorg::testing
