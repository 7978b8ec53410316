#pragma once
// Command-line entry point, separated from main() so tests can drive the
// whole binary in-process.

#include <ostream>
#include <string>
#include <vector>

namespace chronorg::app {

// Exit codes: 0 success, 1 finished but some records failed,
// 2 usage error or unreadable source.
inline constexpr int kOk = 0;
inline constexpr int kRecordErrors = 1;
inline constexpr int kUsage = 2;

// args excludes argv[0].
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace chronorg::app
