#include <doctest.h>

#include <ctime>
#include <filesystem>
#include <random>
#include <set>

#include "chronorg/org_file.hpp"
#include "support/oracles.hpp"

using namespace chronorg;
namespace fs = std::filesystem;

namespace {

TimelineEntry photo_entry() {
    return make_entry(make_timestamp({2008, 9, 15}, ClockTime{14, 34}),
                      "2008-09-15T14.34_IMG0042.jpg", {"filedatestamps"},
                      "/photos/2008-09-15T14.34_IMG0042.jpg");
}

} // namespace

TEST_CASE("entry serialization, long line: single space before tags") {
    std::string block = org::serialize_entry(photo_entry());
    std::string expected_first =
        "** <2008-09-15 Mon 14:34> "
        "[[/photos/2008-09-15T14.34_IMG0042.jpg][2008-09-15T14.34_IMG0042.jpg]]"
        " :filedatestamps:";
    size_t nl = block.find('\n');
    CHECK(block.substr(0, nl) == expected_first);
    std::string rest = block.substr(nl + 1);
    CHECK(rest.substr(0, 16) == "   :PROPERTIES:\n");
    CHECK(rest.find("   :ID: ") != std::string::npos);
    CHECK(rest.substr(rest.size() - 9) == "   :END:\n");
}

TEST_CASE("entry serialization, short line: tags start at byte column 60") {
    TimelineEntry entry = make_entry(make_timestamp({2008, 9, 15}), "note", {"work"});
    std::string block = org::serialize_entry(entry);
    std::string expected = "** <2008-09-15 Mon> note" + std::string(36, ' ') + ":work:";
    CHECK(block.substr(0, block.find('\n')) == expected);
    CHECK(block.find(":work:") == 60);
}

TEST_CASE("entry serialization, minimal entry carries only the ID") {
    TimelineEntry entry = make_entry(make_timestamp({2008, 9, 15}), "plain");
    std::string block = org::serialize_entry(entry);
    CHECK(block == "** <2008-09-15 Mon> plain\n"
                   "   :PROPERTIES:\n"
                   "   :ID: " + entry.id + "\n"
                   "   :END:\n");
}

TEST_CASE("file serialization golden bytes") {
    org::OrgOutputFile file = org::make_output_file("filenames", "filedatestamps",
                                                    {photo_entry()});
    std::string text = org::serialize_file(file);
    std::string expected =
        "## -*- coding: utf-8 mode: org -*-\n"
        "## this file is generated by chronorg — changes will be overwritten\n"
        "## generated-by: chronorg 0.1.0\n"
        "* Memacs for filenames" + std::string(38, ' ') + ":Memacs:filedatestamps:\n" +
        org::serialize_entry(photo_entry());
    CHECK(text == expected);
}

TEST_CASE("empty entry list still yields a valid file") {
    org::OrgOutputFile file = org::make_output_file("rss", "rss");
    std::string text = org::serialize_file(file);
    org::ParsedFile parsed = org::parse_string(text);
    CHECK(parsed.source_name == "rss");
    CHECK(parsed.source_tag == "rss");
    CHECK(parsed.entries.empty());
}

TEST_CASE("parse inverts serialize") {
    std::mt19937 rng(20080915);
    std::vector<TimelineEntry> entries;
    std::set<std::string> ids;
    while (entries.size() < 40) {
        TimelineEntry e = testing::random_entry(rng);
        if (ids.insert(e.id).second)
            entries.push_back(std::move(e));
    }
    org::OrgOutputFile file = org::make_output_file("corpus", "corpus", entries);
    std::string text = org::serialize_file(file);
    org::ParsedFile parsed = org::parse_string(text);

    REQUIRE(parsed.entries.size() == entries.size());
    for (size_t i = 0; i < entries.size(); ++i)
        CHECK(parsed.entries[i].entry == entries[i]);

    // Byte fixpoint: reserializing the parse result changes nothing.
    org::OrgOutputFile again = org::make_output_file(parsed.source_name, parsed.source_tag);
    for (const auto& p : parsed.entries)
        again.entries.push_back(p.entry);
    CHECK(org::serialize_file(again) == text);
}

TEST_CASE("parser reports positions and defects") {
    std::string good = org::serialize_file(
        org::make_output_file("x", "x", {photo_entry()}));

    SUBCASE("bad stamp carries its line number") {
        std::string bad = good;
        size_t pos = bad.find("<2008-09-15 Mon 14:34>");
        bad.replace(pos, 22, "<2008-09-15 Xxx 14:34>");
        try {
            org::parse_string(bad);
            FAIL("expected MalformedStamp");
        } catch (const MalformedStamp& e) {
            CHECK(e.line() == 5); // preamble is three lines, heading is one
        }
    }
    SUBCASE("unterminated drawer") {
        std::string bad = good.substr(0, good.size() - 9); // drop "   :END:\n"
        CHECK_THROWS_AS(org::parse_string(bad), MalformedDrawer);
    }
    SUBCASE("ID must be a 40-hex digest") {
        std::string bad = good;
        size_t pos = bad.find("   :ID: ");
        bad.replace(pos + 8, 40, std::string(40, 'z'));
        CHECK_THROWS_AS(org::parse_string(bad), MalformedDrawer);
    }
    SUBCASE("duplicate ids") {
        std::string block = org::serialize_entry(photo_entry());
        CHECK_THROWS_AS(org::parse_string(good + block), DuplicateId);
    }
    SUBCASE("empty input parses to zero entries") {
        CHECK(org::parse_string("").entries.empty());
    }
}

TEST_CASE("write_overwrite is atomic and deterministic") {
    fs::path dir = testing::fresh_dir("overwrite");
    fs::path out = dir / "photos.org";
    org::OrgOutputFile v1 = org::make_output_file("filenames", "filedatestamps",
                                                  {photo_entry()});

    org::WriteReport report = org::write_overwrite(out, v1);
    CHECK(report.entries_written == 1);
    std::string bytes1 = testing::read_file(out);
    CHECK(report.bytes_written == bytes1.size());

    org::write_overwrite(out, v1);
    CHECK(testing::read_file(out) == bytes1);

    SUBCASE("crash between temp write and rename leaves the target intact") {
        org::OrgOutputFile v2 = v1;
        v2.entries.push_back(make_entry(make_timestamp({2008, 9, 16}), "second"));
        CHECK_THROWS_AS(org::write_overwrite(out, v2, [] { throw IoError("injected"); }),
                        IoError);
        CHECK(testing::read_file(out) == bytes1);
    }
    SUBCASE("internal duplicate ids are rejected before any write") {
        org::OrgOutputFile dup = v1;
        dup.entries.push_back(dup.entries.front());
        CHECK_THROWS_AS(org::write_overwrite(out, dup), DuplicateId);
        CHECK(testing::read_file(out) == bytes1);
    }
    fs::remove_all(dir);
}

TEST_CASE("sync_append recognizes known entries") {
    fs::path dir = testing::fresh_dir("append");
    fs::path out = dir / "feed.org";

    std::mt19937 rng(42);
    std::vector<TimelineEntry> items;
    std::set<std::string> ids;
    while (items.size() < 20) {
        TimelineEntry e = testing::random_entry(rng);
        if (ids.insert(e.id).second)
            items.push_back(std::move(e));
    }
    org::OrgOutputFile window = org::make_output_file("rss", "rss", items);

    org::AppendReport first = org::sync_append(out, window);
    CHECK(first.added == 20);
    CHECK(first.skipped == 0);
    std::string bytes1 = testing::read_file(out);

    org::AppendReport second = org::sync_append(out, window);
    CHECK(second.added == 0);
    CHECK(second.skipped == 20);
    CHECK(testing::read_file(out) == bytes1);

    SUBCASE("a window advanced by three items appends exactly those three") {
        std::vector<TimelineEntry> advanced(items.begin() + 3, items.end());
        while (advanced.size() < 20) {
            TimelineEntry e = testing::random_entry(rng);
            if (ids.insert(e.id).second)
                advanced.push_back(std::move(e));
        }
        org::OrgOutputFile next = org::make_output_file("rss", "rss", advanced);
        org::AppendReport third = org::sync_append(out, next);
        CHECK(third.added == 3);
        CHECK(third.skipped == 17);

        // Monotonicity: the old content is a byte prefix of the new.
        std::string bytes2 = testing::read_file(out);
        CHECK(bytes2.substr(0, bytes1.size()) == bytes1);
        CHECK(org::parse_file(out).entries.size() == 23);
    }
    SUBCASE("corrupted existing file aborts without writing") {
        std::string damaged = bytes1;
        damaged.replace(damaged.find(":PROPERTIES:"), 12, ":PROPERTIE$:");
        testing::write_file(out, damaged);
        CHECK_THROWS_AS(org::sync_append(out, window), MalformedExisting);
        CHECK(testing::read_file(out) == damaged);
    }
    fs::remove_all(dir);
}

TEST_CASE("error entries surface the failure on the timeline") {
    TimelineEntry entry = org::make_error_entry("row 3: not-a-date", "bank.csv:4");
    CHECK(entry.summary == "Memacs error: row 3: not-a-date");
    CHECK(entry.tags == std::vector<std::string>{"Memacs", "error"});
    REQUIRE(entry.properties.size() == 1);
    CHECK(entry.properties[0] == std::pair<std::string, std::string>{"ORIGIN", "bank.csv:4"});

    // Stamped with the current local day so it shows on today's agenda.
    std::time_t now = std::time(nullptr);
    std::tm local{};
    localtime_r(&now, &local);
    CHECK(entry.timestamp.date.year == local.tm_year + 1900);

    TimelineEntry other = org::make_error_entry("different problem", "bank.csv:9");
    CHECK(entry.id != other.id);
}

TEST_CASE("make_output_file validates its header material") {
    CHECK_THROWS_AS(org::make_output_file("", "x"), InvalidEntry);
    CHECK_THROWS_AS(org::make_output_file("x", "!!"), EmptyTag);
    CHECK(org::make_output_file("x", "a b").source_tag == "a_b");
}
