#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "chronorg/parsers/csv.hpp"
#include "chronorg/parsers/exif.hpp"
#include "chronorg/parsers/feed.hpp"
#include "chronorg/parsers/filenames.hpp"
#include "chronorg/parsers/gitlog.hpp"
#include "chronorg/parsers/ical.hpp"
#include "chronorg/parsers/mail.hpp"
#include "chronorg/parsers/phone_xml.hpp"
#include "support/oracles.hpp"

using namespace chronorg;
namespace fs = std::filesystem;

// ---------------------------------------------------------------- iCalendar

TEST_CASE("ical: scenario event") {
    std::string text = testing::read_file(testing::fixture("calendar.ics"));
    ical::ParseResult result = ical::parse_ical(text, "calendar.ics");
    CHECK(result.records_seen == 1);
    CHECK(result.errors.empty());
    REQUIRE(result.events.size() == 1);
    const ical::VEventRecord& event = result.events[0];
    CHECK(event.dtstart == CivilTime{{2008, 9, 15}, 14, 0, 0});
    CHECK(event.dtend == CivilTime{{2008, 9, 15}, 15, 0, 0});
    CHECK(event.summary == "tagstore presentation");
    CHECK(event.location == "seminar room IST");
    CHECK(event.uid == "20080915-tagstore-talk@example.org");

    ParseOutcome outcome = ical::to_outcome(result);
    REQUIRE(outcome.drafts.size() == 1);
    CHECK(render_timestamp(outcome.drafts[0].timestamp) == "<2008-09-15 Mon 14:00-15:00>");
    REQUIRE(outcome.drafts[0].properties.size() == 3);
    CHECK(outcome.drafts[0].properties[0] ==
          std::pair<std::string, std::string>{"CREATED", "2008-09-15T14:00:00"});
    CHECK(outcome.drafts[0].properties[1].first == "LOCATION");
    CHECK(outcome.drafts[0].properties[2].first == "UID");
}

TEST_CASE("ical: folding, all-day values, UTC conversion, text escapes") {
    std::string text = testing::read_file(testing::fixture("ical_variants.ics"));
    ical::ParseResult result = ical::parse_ical(text, "ical_variants.ics");
    CHECK(result.records_seen == 4);
    REQUIRE(result.events.size() == 3);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].message == "VEVENT is missing DTSTART");

    // Unfolded across space and tab continuation lines; frozen oracle.
    CHECK(result.events[0].summary ==
          "tagstore presentation with a deliberately long title that spans multiple folded "
          "lines for parser verification");
    CHECK(result.events[0].dtstart == CivilTime{{2008, 9, 15}, 9, 0, 0});

    CHECK(result.events[1].start_is_date_only);
    CHECK(result.events[1].dtstart.date == Date{2012, 12, 25});

    // 12:00Z is 14:00 in Vienna that day (CEST).
    CHECK(result.events[2].dtstart == CivilTime{{2008, 9, 15}, 14, 0, 0});
    CHECK(result.events[2].summary == "escaped, fields; here\nsecond line\\end");

    ParseOutcome outcome = ical::to_outcome(result);
    REQUIRE(outcome.drafts.size() == 3);
    CHECK(render_timestamp(outcome.drafts[1].timestamp) == "<2012-12-25 Tue>");
    // All-day events carry no seconds, so no CREATED property.
    for (const auto& [key, value] : outcome.drafts[1].properties)
        CHECK(key != "CREATED");
}

TEST_CASE("ical: all-day DTEND is exclusive") {
    std::string text = "BEGIN:VCALENDAR\r\n"
                       "BEGIN:VEVENT\r\n"
                       "DTSTART;VALUE=DATE:20081001\r\n"
                       "DTEND;VALUE=DATE:20081004\r\n"
                       "SUMMARY:retreat\r\n"
                       "END:VEVENT\r\n"
                       "BEGIN:VEVENT\r\n"
                       "DTSTART;VALUE=DATE:20081001\r\n"
                       "DTEND;VALUE=DATE:20081002\r\n"
                       "SUMMARY:one day\r\n"
                       "END:VEVENT\r\n"
                       "END:VCALENDAR\r\n";
    ParseOutcome outcome = ical::to_outcome(ical::parse_ical(text));
    REQUIRE(outcome.drafts.size() == 2);
    CHECK(render_timestamp(outcome.drafts[0].timestamp) ==
          "<2008-10-01 Wed>--<2008-10-03 Fri>");
    CHECK(render_timestamp(outcome.drafts[1].timestamp) == "<2008-10-01 Wed>");
}

TEST_CASE("ical: non-calendar input") {
    CHECK_THROWS_AS(ical::parse_ical("<html>nope</html>"), NotICalendar);
    CHECK_THROWS_AS(ical::parse_ical(""), NotICalendar);
}

// --------------------------------------------------------------------- mail

TEST_CASE("mail: rfc822 dates") {
    CHECK(mail::parse_rfc822_date("Mon, 15 Sep 2008 15:53:00 +0200") ==
          CivilTime{{2008, 9, 15}, 15, 53, 0});
    // Weekday token optional, and never validated.
    CHECK(mail::parse_rfc822_date("15 Sep 2008 15:53:00 +0200") ==
          CivilTime{{2008, 9, 15}, 15, 53, 0});
    CHECK(mail::parse_rfc822_date("Fri, 15 Sep 2008 15:53:00 +0200") ==
          CivilTime{{2008, 9, 15}, 15, 53, 0});
    // Seconds optional.
    CHECK(mail::parse_rfc822_date("15 Sep 2008 15:53 +0200") ==
          CivilTime{{2008, 9, 15}, 15, 53, 0});
    // 13:53 UTC is 15:53 Vienna summer time.
    CHECK(mail::parse_rfc822_date("Mon, 15 Sep 2008 13:53:00 GMT") ==
          CivilTime{{2008, 9, 15}, 15, 53, 0});
    CHECK(mail::parse_rfc822_date("Mon, 15 Sep 2008 09:53:00 EDT") == // UTC-4
          CivilTime{{2008, 9, 15}, 15, 53, 0});
    // Two-digit years per RFC 2822 interpretation.
    CHECK(mail::parse_rfc822_date("15 Sep 08 12:00:00 +0000")->date == Date{2008, 9, 15});
    CHECK(mail::parse_rfc822_date("15 Sep 98 12:00:00 +0000")->date == Date{1998, 9, 15});
    // Missing zone: taken as local wall time.
    CHECK(mail::parse_rfc822_date("15 Sep 2008 15:53:00") ==
          CivilTime{{2008, 9, 15}, 15, 53, 0});
    CHECK(!mail::parse_rfc822_date("not a date"));
    CHECK(!mail::parse_rfc822_date("32 Sep 2008 12:00:00 +0000"));
    CHECK(!mail::parse_rfc822_date(""));
}

TEST_CASE("mail: encoded words") {
    CHECK(mail::decode_encoded_words("=?UTF-8?B?w4RwZmVs?=") == "Äpfel");
    CHECK(mail::decode_encoded_words("=?ISO-8859-1?Q?Gr=FC=DFe?=") == "Grüße");
    CHECK(mail::decode_encoded_words("=?utf-8?q?caf=C3=A9_list?=") == "café list");
    // Whitespace between adjacent encoded words disappears.
    CHECK(mail::decode_encoded_words("=?utf-8?B?w4Q?= =?utf-8?B?cGZlbA==?=") == "Äpfel");
    // Plain text passes through untouched.
    CHECK(mail::decode_encoded_words("plain subject") == "plain subject");

    std::vector<std::string> failures;
    std::string kept = mail::decode_encoded_words("=?KOI8-R?B?8NLJ18XU?=", &failures);
    CHECK(kept == "=?KOI8-R?B?8NLJ18XU?=");
    CHECK(failures.size() == 1);
}

TEST_CASE("mail: single message fixture") {
    mail::ParseResult result = mail::parse_path(testing::fixture("msg1.eml").string());
    CHECK(result.records_seen == 1);
    REQUIRE(result.messages.size() == 1);
    const mail::MessageRecord& m = result.messages[0];
    CHECK(m.date == CivilTime{{2008, 9, 15}, 15, 53, 0});
    CHECK(m.from == "Martin Gruber <martin.gruber@example.org>");
    CHECK(m.subject == "tagstore slides");
    CHECK(m.message_id == "20080915135300.GA2342@mail.example.org");

    ParseOutcome outcome = mail::to_outcome(result);
    REQUIRE(outcome.drafts.size() == 1);
    CHECK(outcome.drafts[0].summary ==
          "Martin Gruber <martin.gruber@example.org>: tagstore slides");
    CHECK(outcome.drafts[0].link == "message-id:20080915135300.GA2342@mail.example.org");
}

TEST_CASE("mail: mbox splitting and maildir scan") {
    mail::ParseResult result = mail::parse_path(testing::fixture("mbox.txt").string());
    CHECK(result.records_seen == 2);
    REQUIRE(result.messages.size() == 2);
    CHECK(result.messages[0].subject == "tagstore slides");
    CHECK(result.messages[1].subject == "Äpfel");
    CHECK(result.messages[1].date == CivilTime{{2008, 9, 16}, 8, 0, 0});

    SUBCASE("maildir layout") {
        fs::path dir = testing::fresh_dir("maildir");
        fs::create_directories(dir / "cur");
        fs::create_directories(dir / "new");
        testing::write_file(dir / "cur" / "1.msg",
                            testing::read_file(testing::fixture("msg1.eml")));
        testing::write_file(dir / "new" / "2.msg",
                            "Date: Tue, 16 Sep 2008 09:00:00 +0200\n"
                            "From: a@example.org\nSubject: later\n\nbody\n");
        mail::ParseResult md = mail::parse_path(dir.string());
        CHECK(md.records_seen == 2);
        REQUIRE(md.messages.size() == 2);
        // Sorted by date, not by directory order.
        CHECK(md.messages[0].subject == "tagstore slides");
        CHECK(md.messages[1].subject == "later");
        fs::remove_all(dir);
    }
    SUBCASE("missing or unreadable path") {
        CHECK_THROWS_AS(mail::parse_path("/nonexistent/mailbox"), SourceUnreadable);
    }
}

TEST_CASE("mail: messages without a usable date become errors") {
    mail::ParseResult result = mail::parse_message("From: x@example.org\nSubject: s\n\nbody",
                                                   "m");
    CHECK(result.records_seen == 1);
    CHECK(result.messages.empty());
    REQUIRE(result.errors.size() == 1);

    mail::ParseResult bad = mail::parse_message(
        "Date: yesterday-ish\nFrom: x@example.org\nSubject: s\n\nbody", "m");
    CHECK(bad.messages.empty());
    CHECK(bad.errors.size() == 1);
}

// --------------------------------------------------------------------- feed

TEST_CASE("feed: iso8601 dates") {
    CHECK(feed::parse_iso8601("2008-09-15T17:38:00+02:00") ==
          CivilTime{{2008, 9, 15}, 17, 38, 0});
    CHECK(feed::parse_iso8601("2008-09-15T15:38:00Z") ==
          CivilTime{{2008, 9, 15}, 17, 38, 0});
    CHECK(feed::parse_iso8601("2008-09-15 17:38:00") ==
          CivilTime{{2008, 9, 15}, 17, 38, 0});
    CHECK(feed::parse_iso8601("2008-09-15T17:38:00.500+0200") ==
          CivilTime{{2008, 9, 15}, 17, 38, 0});
    CHECK(!feed::parse_iso8601("2008-09-15"));
    CHECK(!feed::parse_iso8601("15.09.2008 17:38"));
}

TEST_CASE("feed: twitter-style rss") {
    feed::ParseResult result =
        feed::parse_feed(testing::read_file(testing::fixture("twitter.xml")), "twitter.xml");
    CHECK(result.records_seen == 1);
    REQUIRE(result.items.size() == 1);
    CHECK(result.items[0].title == "enjoying the tagstore presentation right now");
    CHECK(result.items[0].link == "http://twitter.com/exampleuser/status/919191919");
    CHECK(result.items[0].date == CivilTime{{2008, 9, 15}, 14, 38, 0});
    CHECK(result.items[0].categories.empty());
}

TEST_CASE("feed: delicious-style rss carries categories as tags") {
    feed::ParseResult result =
        feed::parse_feed(testing::read_file(testing::fixture("delicious.xml")), "delicious.xml");
    REQUIRE(result.items.size() == 1);
    CHECK(result.items[0].date == CivilTime{{2008, 9, 15}, 15, 8, 0});
    CHECK(result.items[0].categories == std::vector<std::string>{"2008_09", "software"});

    ParseOutcome outcome = feed::to_outcome(result);
    REQUIRE(outcome.drafts.size() == 1);
    CHECK(outcome.drafts[0].tags == std::vector<std::string>{"2008_09", "software"});
}

TEST_CASE("feed: atom entries and dateless errors") {
    feed::ParseResult result =
        feed::parse_feed(testing::read_file(testing::fixture("atom.xml")), "atom.xml");
    CHECK(result.records_seen == 2);
    REQUIRE(result.items.size() == 1);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.items[0].title == "atom entry about tagging");
    CHECK(result.items[0].link == "http://blog.example.org/2008/09/tagging");
    CHECK(result.items[0].date == CivilTime{{2008, 9, 15}, 11, 8, 0});
    CHECK(result.items[0].categories == std::vector<std::string>{"pim"});
}

TEST_CASE("feed: twenty-item window parses wholly") {
    feed::ParseResult result =
        feed::parse_feed(testing::read_file(testing::fixture("rss20.xml")), "rss20.xml");
    CHECK(result.records_seen == 20);
    CHECK(result.items.size() == 20);
    CHECK(result.items[0].title == "feed item number 01");
    CHECK(result.items[19].date.date == Date{2008, 9, 20});
}

TEST_CASE("feed: non-feed xml") {
    CHECK_THROWS_AS(feed::parse_feed("<html><body/></html>"), NotAFeed);
    CHECK_THROWS_AS(feed::parse_feed("plain text"), Error);
}

// --------------------------------------------------------------------- exif

TEST_CASE("exif: datetime original in both byte orders") {
    CivilTime ii = exif::read_datetime_file(testing::fixture("img_exif_ii.jpg").string());
    CHECK(ii == CivilTime{{2008, 9, 15}, 14, 34, 56});
    CivilTime mm = exif::read_datetime_file(testing::fixture("img_exif_mm.jpg").string());
    CHECK(mm == CivilTime{{2008, 9, 15}, 14, 34, 56});
}

TEST_CASE("exif: falls back to plain DateTime") {
    CivilTime t =
        exif::read_datetime_file(testing::fixture("img_exif_datetime_only.jpg").string());
    CHECK(t == CivilTime{{2008, 9, 15}, 14, 35, 10});
}

TEST_CASE("exif: typed failures") {
    CHECK_THROWS_AS(exif::read_datetime_file(testing::fixture("img_plain.jpg").string()),
                    NoExifSegment);
    CHECK_THROWS_AS(exif::read_datetime_file("/nonexistent.jpg"), SourceUnreadable);

    std::string valid = testing::read_file(testing::fixture("img_exif_ii.jpg"));
    CHECK_THROWS_AS(exif::read_datetime(std::string_view(valid).substr(0, 40)), Error);
    CHECK_THROWS_AS(exif::read_datetime(""), NoExifSegment);
    CHECK_THROWS_AS(exif::read_datetime("not a jpeg at all"), NoExifSegment);
}

// ---------------------------------------------------------------- filenames

TEST_CASE("filenames: stamp matching") {
    auto date_only = filenames::match_stamp("2012-04-13_Document.txt");
    REQUIRE(date_only.has_value());
    CHECK(date_only->date == Date{2012, 4, 13});
    CHECK(!date_only->time.has_value());

    auto timed = filenames::match_stamp("2008-09-15T14.34_IMG0042.jpg");
    REQUIRE(timed.has_value());
    CHECK(timed->time == ClockTime{14, 34});
    CHECK(!timed->second.has_value());

    auto seconds = filenames::match_stamp("2008-09-15T14.34.56_IMG0042.jpg");
    REQUIRE(seconds.has_value());
    CHECK(seconds->second == 56u);

    CHECK(!filenames::match_stamp("IMG0042.jpg").has_value());
    CHECK(!filenames::match_stamp("2008-13-01_bad.txt").has_value()); // impossible date
    // A name that merely begins with a date still matches date-only, and a
    // clock that cannot exist falls back the same way.
    for (const char* name : {"2008-09-15x14.34_sep.jpg", "2008-09-15T25.00_file.txt"}) {
        auto fallback = filenames::match_stamp(name);
        REQUIRE(fallback.has_value());
        CHECK(!fallback->time.has_value());
    }
}

TEST_CASE("filenames: tree scan") {
    filenames::ScanResult result =
        filenames::scan_tree(testing::fixture("tree").string());
    CHECK(result.records_seen == 4); // every regular file, matching or not
    REQUIRE(result.files.size() == 3);
    // Sorted by path: docs/... before photos/...
    CHECK(result.files[0].name == "2008-09-15T16.17_tagstore-handout.pdf");
    CHECK(result.files[1].name == "2012-04-13_Document.txt");
    CHECK(result.files[2].name == "2008-09-15T14.34_IMG0042.jpg");
    CHECK(fs::path(result.files[2].path).is_absolute());

    ParseOutcome outcome = filenames::to_outcome(result);
    // Minute-only stamps carry no seconds, hence no CREATED.
    for (const auto& draft : outcome.drafts)
        for (const auto& [key, value] : draft.properties)
            CHECK(key != "CREATED");

    SUBCASE("ignore patterns prune both files and directories") {
        filenames::ScanResult pruned =
            filenames::scan_tree(testing::fixture("tree").string(), {"photos", "*.pdf"});
        REQUIRE(pruned.files.size() == 1);
        CHECK(pruned.files[0].name == "2012-04-13_Document.txt");
    }
    SUBCASE("missing root") {
        CHECK_THROWS_AS(filenames::scan_tree("/nonexistent/tree"), SourceUnreadable);
    }
}

// ---------------------------------------------------------------------- csv

TEST_CASE("csv: timestamp format subset") {
    CHECK(csv::parse_with_format("2008-09-15 14:34", "%Y-%m-%d %H:%M") ==
          CivilTime{{2008, 9, 15}, 14, 34, 0});
    CHECK(csv::parse_with_format("15.09.2008", "%d.%m.%Y") ==
          CivilTime{{2008, 9, 15}, 0, 0, 0});
    CHECK(csv::parse_with_format("20080915143456", "%Y%m%d%H%M%S") ==
          CivilTime{{2008, 9, 15}, 14, 34, 56});
    CHECK(csv::parse_with_format("2008-09-15%", "%Y-%m-%d%%")->date.day == 15);
    CHECK(!csv::parse_with_format("2008-09-15", "%Y-%m-%d %H:%M")); // too short
    CHECK(!csv::parse_with_format("2008-09-15 extra", "%Y-%m-%d")); // trailing text
    CHECK(!csv::parse_with_format("2008-13-15", "%Y-%m-%d"));
    CHECK(!csv::parse_with_format("2008-09-15", "%Y-%m-%d %q")); // unknown directive
    CHECK(!csv::parse_with_format("15.09.2008", "%d.%m"));       // year is mandatory
}

TEST_CASE("csv: quoting") {
    CHECK(csv::split_record("a;b;c", ';') == std::vector<std::string>{"a", "b", "c"});
    CHECK(csv::split_record("a;\"b;c\";d", ';') == std::vector<std::string>{"a", "b;c", "d"});
    CHECK(csv::split_record("\"he said \"\"hi\"\"\";x", ';') ==
          std::vector<std::string>{"he said \"hi\"", "x"});
    CHECK(csv::split_record(";;", ';') == std::vector<std::string>{"", "", ""});
}

TEST_CASE("csv: bank statement fixture") {
    csv::Options options;
    options.delimiter = ';';
    options.timestamp_format = "%Y-%m-%d";
    options.summary_columns = {1, 2};
    ParseOutcome outcome = csv::parse_csv(testing::read_file(testing::fixture("bank.csv")),
                                          options, "bank.csv");
    CHECK(outcome.records_seen == 5); // header excluded
    REQUIRE(outcome.drafts.size() == 4);
    REQUIRE(outcome.errors.size() == 1);
    CHECK(outcome.errors[0].origin == "bank.csv:4");

    CHECK(outcome.drafts[0].summary == "Bookstore — -23.40");
    CHECK(render_timestamp(outcome.drafts[0].timestamp) == "<2008-09-01 Mon>");
    // Date-only format means no CREATED property.
    CHECK(outcome.drafts[0].properties.empty());
}

TEST_CASE("csv: short rows, tag columns, header control") {
    csv::Options options;
    options.delimiter = ',';
    options.skip_header = false;
    options.timestamp_format = "%Y-%m-%d %H:%M:%S";
    options.summary_columns = {1};
    options.tag_columns = {2};
    ParseOutcome outcome = csv::parse_csv("2008-09-15 12:00:05,lunch,food\n"
                                          "2008-09-15 13:00:00,short\n",
                                          options, "x.csv");
    CHECK(outcome.records_seen == 2);
    REQUIRE(outcome.drafts.size() == 1);
    CHECK(outcome.drafts[0].tags == std::vector<std::string>{"food"});
    // %H and %S present: seconds are known, CREATED appears.
    REQUIRE(outcome.drafts[0].properties.size() == 1);
    CHECK(outcome.drafts[0].properties[0].second == "2008-09-15T12:00:05");
    REQUIRE(outcome.errors.size() == 1);
    CHECK(outcome.errors[0].message.find("fields") != std::string::npos);
}

// ------------------------------------------------------------------- gitlog

TEST_CASE("gitlog: unit-separated dump") {
    gitlog::ParseResult result =
        gitlog::parse_log(testing::read_file(testing::fixture("git.log")), "git.log");
    CHECK(result.records_seen == 1);
    REQUIRE(result.commits.size() == 1);
    CHECK(result.commits[0].hash == "b7e23ec29af22b0b4e41da31e868d57226121c84");
    CHECK(result.commits[0].author == "John Smith");
    CHECK(result.commits[0].date == CivilTime{{2008, 9, 15}, 17, 38, 0});
    CHECK(result.commits[0].subject == "ideas about tagstore tag layer");

    ParseOutcome outcome = gitlog::to_outcome(result);
    REQUIRE(outcome.drafts.size() == 1);
    CHECK(outcome.drafts[0].summary == "John Smith: ideas about tagstore tag layer");
    CHECK(outcome.drafts[0].link == "commit:b7e23ec29af22b0b4e41da31e868d57226121c84");
}

TEST_CASE("gitlog: malformed lines become errors") {
    std::string unit = "\x1f";
    gitlog::ParseResult result = gitlog::parse_log(
        "nothex" + unit + "A" + unit + "2008-09-15T17:38:00+02:00" + unit + "s\n" +
        "too" + unit + "few\n" +
        "b7e23ec29af22b0b4e41da31e868d57226121c84" + unit + "A" + unit + "not a date" + unit +
        "s\n",
        "dump");
    CHECK(result.records_seen == 3);
    CHECK(result.commits.empty());
    CHECK(result.errors.size() == 3);
    CHECK(result.errors[1].origin == "dump:2");
}

// ------------------------------------------------------------------- phone

TEST_CASE("sms: backup xml with epoch milliseconds") {
    phone::SmsResult result =
        phone::parse_sms(testing::read_file(testing::fixture("sms.xml")), "sms.xml");
    CHECK(result.records_seen == 1);
    REQUIRE(result.messages.size() == 1);
    // 1221478500000 ms is 13:35 Vienna local time that day; frozen oracle.
    CHECK(result.messages[0].date == CivilTime{{2008, 9, 15}, 13, 35, 0});
    CHECK(result.messages[0].outgoing);

    ParseOutcome outcome = phone::to_outcome(result);
    REQUIRE(outcome.drafts.size() == 1);
    CHECK(outcome.drafts[0].summary == "SMS to +436641234567: join the tagstore talk?");
    CHECK(render_timestamp(outcome.drafts[0].timestamp) == "<2008-09-15 Mon 13:35>");
}

TEST_CASE("sms: long bodies truncate at eighty code points") {
    std::string body(300, 'x');
    std::string xml = "<smses><sms date=\"1221478500000\" address=\"+431\" type=\"1\" body=\"" +
                      body + "\"/></smses>";
    ParseOutcome outcome = phone::to_outcome(phone::parse_sms(xml));
    REQUIRE(outcome.drafts.size() == 1);
    CHECK(outcome.drafts[0].summary == "SMS from +431: " + std::string(80, 'x'));
}

TEST_CASE("calls: duration spans the stamp") {
    phone::CallResult result =
        phone::parse_calls(testing::read_file(testing::fixture("calls.xml")), "calls.xml");
    REQUIRE(result.calls.size() == 1);
    CHECK(result.calls[0].duration_seconds == 180);

    ParseOutcome outcome = phone::to_outcome(result);
    REQUIRE(outcome.drafts.size() == 1);
    CHECK(render_timestamp(outcome.drafts[0].timestamp) == "<2008-09-15 Mon 17:35-17:38>");
    CHECK(outcome.drafts[0].summary == "Call to +433161234567 (180s)");

    SUBCASE("sub-minute calls collapse to a point stamp") {
        std::string xml =
            "<calls><call date=\"1221492900000\" number=\"+43x\" duration=\"45\" type=\"1\"/>"
            "</calls>";
        ParseOutcome point = phone::to_outcome(phone::parse_calls(xml));
        REQUIRE(point.drafts.size() == 1);
        CHECK(render_timestamp(point.drafts[0].timestamp) == "<2008-09-15 Mon 17:35>");
        CHECK(point.drafts[0].summary == "Call from +43x (45s)");
    }
    SUBCASE("midnight-crossing calls keep the cross-day form") {
        // 2008-09-15 23:50 Vienna is 21:50Z = 1221515400 epoch seconds.
        std::string xml = "<calls><call date=\"1221515400000\" number=\"+43x\" "
                          "duration=\"1200\" type=\"2\"/></calls>";
        ParseOutcome crossing = phone::to_outcome(phone::parse_calls(xml));
        REQUIRE(crossing.drafts.size() == 1);
        CHECK(render_timestamp(crossing.drafts[0].timestamp) ==
              "<2008-09-15 Mon 23:50>--<2008-09-16 Tue 00:10>");
    }
}

TEST_CASE("phone: malformed records become errors") {
    phone::SmsResult result = phone::parse_sms(
        "<smses>"
        "<sms date=\"not-epoch\" address=\"+43\" type=\"1\" body=\"b\"/>"
        "<sms date=\"1221478500000\" address=\"+43\" type=\"9\" body=\"b\"/>"
        "<sms date=\"1221478500000\" type=\"1\" body=\"b\"/>"
        "</smses>");
    CHECK(result.records_seen == 3);
    CHECK(result.messages.empty());
    CHECK(result.errors.size() == 3);
}
