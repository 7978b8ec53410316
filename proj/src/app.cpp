#include "chronorg/app.hpp"

#include <glob.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "chronorg/agenda.hpp"
#include "chronorg/config.hpp"
#include "chronorg/connector.hpp"
#include "chronorg/core.hpp"
#include "chronorg/org_file.hpp"
#include "chronorg/parsers/csv.hpp"
#include "chronorg/parsers/exif.hpp"
#include "chronorg/parsers/feed.hpp"
#include "chronorg/parsers/filenames.hpp"
#include "chronorg/parsers/gitlog.hpp"
#include "chronorg/parsers/ical.hpp"
#include "chronorg/parsers/mail.hpp"
#include "chronorg/parsers/phone_xml.hpp"

namespace chronorg::app {
namespace {

namespace fs = std::filesystem;

const char* kUsageText =
    "usage: chronorg <command> [options]\n"
    "\n"
    "connector commands (each writes one Org file):\n"
    "  filenames   scan a directory tree for datestamped file names\n"
    "  csv         import delimited text with a column mapping\n"
    "  ical        import iCalendar VEVENTs\n"
    "  mail        import email headers (.eml, mbox, maildir)\n"
    "  rss         import RSS 2.0 / Atom feed items\n"
    "  gitlog      import a git log dump (see README for the format)\n"
    "  exif        import JPEG capture times\n"
    "  sms         import SMS backup XML\n"
    "  calls       import call-log backup XML\n"
    "\n"
    "query commands:\n"
    "  agenda      day-bucketed chronological view over generated files\n"
    "  check       parse generated files and report integrity\n"
    "\n"
    "Run 'chronorg <command> --help' for the options of one command.\n";

// Parses a reversed copy through CLI11; returns an exit code when parsing
// already settled the invocation (help or usage error).
std::optional<int> parse_cli(CLI::App& cli, std::vector<std::string> args, std::ostream& out,
                             std::ostream& err) {
    std::reverse(args.begin(), args.end());
    try {
        cli.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << cli.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "chronorg: " << e.what() << "\n";
        return kUsage;
    }
    return std::nullopt;
}

Date parse_cli_date(const std::string& text) {
    auto digits = [&](size_t pos, size_t n) -> std::optional<unsigned> {
        if (pos + n > text.size())
            return std::nullopt;
        unsigned v = 0;
        for (size_t i = 0; i < n; ++i) {
            char c = text[pos + i];
            if (c < '0' || c > '9')
                return std::nullopt;
            v = v * 10 + unsigned(c - '0');
        }
        return v;
    };
    auto y = digits(0, 4);
    auto m = digits(5, 2);
    auto d = digits(8, 2);
    if (!y || !m || !d || text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw Error("dates must look like YYYY-MM-DD, got \"" + text + "\"");
    Date date{int(*y), *m, *d};
    if (!is_valid_date(date))
        throw Error("\"" + text + "\" is not a calendar date");
    return date;
}

std::string read_input_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SourceUnreadable("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw SourceUnreadable("cannot read " + path);
    return std::move(buf).str();
}

std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
    std::vector<std::string> paths;
    for (const std::string& pattern : patterns) {
        ::glob_t result{};
        int rc = ::glob(pattern.c_str(), 0, nullptr, &result);
        if (rc == 0)
            for (size_t i = 0; i < result.gl_pathc; ++i)
                paths.emplace_back(result.gl_pathv[i]);
        ::globfree(&result);
    }
    return paths;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string_view rest = value;
    while (!rest.empty()) {
        size_t comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        if (!item.empty())
            items.emplace_back(item);
        if (comma == std::string_view::npos)
            break;
        rest = rest.substr(comma + 1);
    }
    return items;
}

std::optional<std::size_t> parse_index(const std::string& text) {
    if (text.empty() || text.size() > 6)
        return std::nullopt;
    std::size_t v = 0;
    for (char c : text) {
        if (c < '0' || c > '9')
            return std::nullopt;
        v = v * 10 + std::size_t(c - '0');
    }
    return v;
}

// The config file may hold a section per connector; flags always win.
config::AppConfig load_effective_config(const std::optional<std::string>& flag_path,
                                        std::ostream& err, bool& failed) {
    failed = false;
    std::string path;
    if (flag_path) {
        path = *flag_path;
    } else if (const char* env = std::getenv("CHRONORG_CONFIG")) {
        path = env;
    } else {
        return {};
    }
    try {
        return config::load_config(path);
    } catch (const Error& e) {
        err << "chronorg: " << e.what() << "\n";
        failed = true;
        return {};
    }
}

csv::Options build_csv_options(const config::ConnectorOptions& merged) {
    csv::Options options;
    auto get = [&](const char* key) -> const std::string* {
        auto it = merged.extra.find(key);
        return it == merged.extra.end() ? nullptr : &it->second;
    };
    if (const std::string* v = get("delimiter")) {
        if (v->size() != 1)
            throw Error("delimiter must be a single character, got \"" + *v + "\"");
        options.delimiter = (*v)[0];
    }
    if (const std::string* v = get("timestamp-column")) {
        auto index = parse_index(*v);
        if (!index)
            throw Error("timestamp-column must be a column index, got \"" + *v + "\"");
        options.timestamp_column = *index;
    }
    if (const std::string* v = get("timestamp-format"))
        options.timestamp_format = *v;
    if (const std::string* v = get("summary-columns")) {
        options.summary_columns.clear();
        for (const std::string& item : split_list(*v)) {
            auto index = parse_index(item);
            if (!index)
                throw Error("summary-columns must be column indices, got \"" + item + "\"");
            options.summary_columns.push_back(*index);
        }
        if (options.summary_columns.empty())
            throw Error("summary-columns must name at least one column");
    }
    if (const std::string* v = get("tag-columns")) {
        for (const std::string& item : split_list(*v)) {
            auto index = parse_index(item);
            if (!index)
                throw Error("tag-columns must be column indices, got \"" + item + "\"");
            options.tag_columns.push_back(*index);
        }
    }
    if (const std::string* v = get("skip-header")) {
        if (*v == "true" || *v == "1")
            options.skip_header = true;
        else if (*v == "false" || *v == "0")
            options.skip_header = false;
        else
            throw Error("skip-header must be true or false, got \"" + *v + "\"");
    }
    return options;
}

ParseOutcome scan_exif(const std::string& input) {
    std::error_code ec;
    std::vector<fs::path> files;
    if (fs::is_directory(input, ec)) {
        for (fs::recursive_directory_iterator
                 it(input, fs::directory_options::skip_permission_denied, ec),
             end;
             it != end && !ec; it.increment(ec)) {
            if (!it->is_regular_file(ec))
                continue;
            std::string ext = it->path().extension().string();
            for (char& c : ext)
                c = char(std::tolower(static_cast<unsigned char>(c)));
            if (ext == ".jpg" || ext == ".jpeg")
                files.push_back(it->path());
        }
        std::sort(files.begin(), files.end());
    } else if (fs::is_regular_file(input, ec)) {
        files.emplace_back(input);
    } else {
        throw SourceUnreadable("cannot read " + input);
    }

    ParseOutcome outcome;
    for (const fs::path& file : files) {
        ++outcome.records_seen;
        try {
            CivilTime t = exif::read_datetime_file(file.string());
            EntryDraft draft;
            draft.timestamp = make_timestamp(t.date, clock_of(t));
            draft.summary = file.filename().string();
            draft.link = fs::absolute(file).lexically_normal().string();
            draft.properties.emplace_back("CREATED", iso_local_string(t));
            outcome.drafts.push_back(std::move(draft));
        } catch (const Error& e) {
            outcome.errors.push_back(RecordError{e.what(), file.string()});
        }
    }
    return outcome;
}

std::function<ParseOutcome()> make_parser(const std::string& name, const std::string& input,
                                          const config::ConnectorOptions& merged) {
    if (name == "filenames") {
        std::vector<std::string> ignore;
        if (auto it = merged.extra.find("ignore"); it != merged.extra.end())
            ignore = split_list(it->second);
        return [input, ignore] { return to_outcome(filenames::scan_tree(input, ignore)); };
    }
    if (name == "csv") {
        csv::Options options = build_csv_options(merged);
        return [input, options] { return csv::parse_csv(read_input_file(input), options, input); };
    }
    if (name == "ical")
        return [input] { return to_outcome(ical::parse_ical(read_input_file(input), input)); };
    if (name == "mail")
        return [input] { return to_outcome(mail::parse_path(input)); };
    if (name == "rss")
        return [input] { return to_outcome(feed::parse_feed(read_input_file(input), input)); };
    if (name == "gitlog")
        return [input] {
            if (input == "-") {
                std::ostringstream buf;
                buf << std::cin.rdbuf();
                return to_outcome(gitlog::parse_log(buf.str(), "stdin"));
            }
            return to_outcome(gitlog::parse_log(read_input_file(input), input));
        };
    if (name == "exif")
        return [input] { return scan_exif(input); };
    if (name == "sms")
        return [input] { return to_outcome(phone::parse_sms(read_input_file(input), input)); };
    if (name == "calls")
        return [input] { return to_outcome(phone::parse_calls(read_input_file(input), input)); };
    throw Error("unknown connector \"" + name + "\"");
}

int run_connector_command(const ConnectorSpec& spec, const std::vector<std::string>& args,
                          std::ostream& out, std::ostream& err) {
    CLI::App cli{std::string("chronorg ") + spec.name};
    cli.name("chronorg " + spec.name);

    config::ConnectorOptions flags;
    std::optional<std::string> config_path;
    std::optional<std::string> input, root, output, mode_text, tags_text;

    cli.add_option("--config", config_path, "configuration file (also: CHRONORG_CONFIG)");
    auto* input_opt = cli.add_option("--input,-i", input, "source file or directory");
    cli.add_option("--output,-o", output, "Org file to synchronize");
    cli.add_option("--mode", mode_text, "overwrite or append");
    cli.add_option("--tags", tags_text, "extra tags for every entry, comma separated");
    if (spec.name == "filenames") {
        cli.add_option("--root", root, "directory tree to scan (same as --input)")
            ->excludes(input_opt);
        cli.add_option("--ignore", flags.extra["ignore"],
                       "comma separated basename globs to skip");
    }
    if (spec.name == "csv") {
        cli.add_option("--delimiter", flags.extra["delimiter"], "field separator, one character");
        cli.add_option("--timestamp-column", flags.extra["timestamp-column"],
                       "0-based index of the timestamp column");
        cli.add_option("--timestamp-format", flags.extra["timestamp-format"],
                       "timestamp pattern, directives %Y %m %d %H %M %S");
        cli.add_option("--summary-columns", flags.extra["summary-columns"],
                       "0-based indices joined into the summary");
        cli.add_option("--tag-columns", flags.extra["tag-columns"],
                       "0-based indices providing tags");
        cli.add_option("--skip-header", flags.extra["skip-header"], "true or false");
    }

    if (auto settled = parse_cli(cli, args, out, err))
        return *settled;

    // Options bound straight into flags.extra register as empty strings
    // when their flag is absent; drop those so config values survive.
    for (auto it = flags.extra.begin(); it != flags.extra.end();)
        it = it->second.empty() ? flags.extra.erase(it) : std::next(it);

    flags.input = root ? root : input;
    flags.output = output;
    if (tags_text)
        flags.tags = split_list(*tags_text);
    if (mode_text) {
        if (*mode_text == "overwrite")
            flags.mode = org::SyncMode::Overwrite;
        else if (*mode_text == "append")
            flags.mode = org::SyncMode::Append;
        else {
            err << "chronorg: mode must be overwrite or append, got \"" << *mode_text << "\"\n";
            return kUsage;
        }
    }

    bool config_failed = false;
    config::AppConfig file_config = load_effective_config(config_path, err, config_failed);
    if (config_failed)
        return kUsage;
    config::ConnectorOptions merged;
    if (auto it = file_config.sections.find(spec.name); it != file_config.sections.end())
        merged = config::resolve_options(it->second, flags);
    else
        merged = flags;

    if (!merged.input) {
        err << "chronorg: " << spec.name << " needs --input"
            << (spec.name == "filenames" ? " (or --root)" : "") << " or a configured input\n";
        return kUsage;
    }
    if (!merged.output) {
        err << "chronorg: " << spec.name << " needs --output or a configured output\n";
        return kUsage;
    }

    try {
        org::SyncMode mode = select_mode(spec, merged.mode);
        std::function<ParseOutcome()> parse = make_parser(spec.name, *merged.input, merged);
        RunReport report = run_connector(spec, parse, mode, *merged.output,
                                         merged.tags.value_or(std::vector<std::string>{}));
        err << spec.name << ": " << report.records_seen << " records, "
            << report.entries_emitted << " entries (" << report.errors << " errors), "
            << sync_mode_name(mode) << " " << *merged.output << ": added " << report.added
            << ", skipped " << report.skipped << "\n";
        return report.errors > 0 ? kRecordErrors : kOk;
    } catch (const Error& e) {
        err << "chronorg: " << e.what() << "\n";
        return kUsage;
    }
}

int run_agenda_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
    CLI::App cli{"chronorg agenda"};
    cli.name("chronorg agenda");

    std::vector<std::string> file_patterns;
    std::optional<std::string> day, from, to, tag_expr, match_text;
    cli.add_option("--files,-f", file_patterns, "generated Org files (globs allowed)")
        ->required();
    auto* day_opt = cli.add_option("--day", day, "single day, YYYY-MM-DD");
    auto* from_opt = cli.add_option("--from", from, "range start, YYYY-MM-DD");
    auto* to_opt = cli.add_option("--to", to, "range end (inclusive), YYYY-MM-DD");
    day_opt->excludes(from_opt)->excludes(to_opt);
    cli.add_option("--tag", tag_expr, "tag expression, e.g. work&-private");
    cli.add_option("--match", match_text, "case-insensitive substring of the summary");

    if (auto settled = parse_cli(cli, args, out, err))
        return *settled;

    std::vector<std::string> paths = expand_globs(file_patterns);
    if (paths.empty()) {
        err << "chronorg: no files matched\n";
        return kUsage;
    }

    try {
        agenda::AgendaQuery query;
        if (day) {
            query.from = parse_cli_date(*day);
            query.to = query.from;
        } else if (from || to) {
            if (!from || !to) {
                err << "chronorg: --from and --to go together\n";
                return kUsage;
            }
            query.from = parse_cli_date(*from);
            query.to = parse_cli_date(*to);
        }
        if (tag_expr)
            query.tags = agenda::TagExpr::parse(*tag_expr);
        query.text = match_text;

        std::vector<std::string> file_errors;
        std::vector<agenda::SourcedEntry> entries = agenda::load_files(paths, &file_errors);
        for (const std::string& problem : file_errors)
            err << "chronorg: " << problem << "\n";

        if (query.from)
            out << agenda::render(agenda::collect(entries, query));
        else
            out << agenda::render_sparse(agenda::sparse_scan(entries, query));
        return file_errors.empty() ? kOk : kRecordErrors;
    } catch (const Error& e) {
        err << "chronorg: " << e.what() << "\n";
        return kUsage;
    }
}

int run_check_command(const std::vector<std::string>& args, std::ostream& out,
                      std::ostream& err) {
    CLI::App cli{"chronorg check"};
    cli.name("chronorg check");

    std::vector<std::string> file_patterns;
    std::optional<std::string> config_path;
    cli.add_option("--files,-f", file_patterns, "generated Org files (globs allowed)");
    cli.add_option("--config", config_path, "configuration file (also: CHRONORG_CONFIG)");

    if (auto settled = parse_cli(cli, args, out, err))
        return *settled;

    bool config_failed = false;
    config::AppConfig file_config = load_effective_config(config_path, err, config_failed);
    if (config_failed)
        return kUsage;

    std::vector<std::string> paths = expand_globs(file_patterns);
    for (const auto& [name, section] : file_config.sections)
        if (section.output)
            paths.push_back(*section.output);
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());

    if (paths.empty()) {
        err << "chronorg: nothing to check; give --files or configure outputs\n";
        return kUsage;
    }

    bool all_good = true;
    for (const std::string& path : paths) {
        try {
            org::ParsedFile file = org::parse_file(path);
            out << path << ": ok, " << file.entries.size() << " entries\n";
        } catch (const Error& e) {
            out << path << ": " << e.what() << "\n";
            all_good = false;
        }
    }
    return all_good ? kOk : kRecordErrors;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty()) {
        err << kUsageText;
        return kUsage;
    }
    const std::string& command = args[0];
    std::vector<std::string> rest(args.begin() + 1, args.end());

    if (command == "--help" || command == "-h" || command == "help") {
        out << kUsageText;
        return kOk;
    }
    if (command == "--version") {
        out << org::kToolId << " " << org::kToolVersion << "\n";
        return kOk;
    }
    if (command == "agenda")
        return run_agenda_command(rest, out, err);
    if (command == "check")
        return run_check_command(rest, out, err);

    for (const ConnectorSpec& spec : all_connectors())
        if (spec.name == command)
            return run_connector_command(spec, rest, out, err);

    err << "chronorg: unknown command \"" << command << "\"\n" << kUsageText;
    return kUsage;
}

} // namespace chronorg::app
