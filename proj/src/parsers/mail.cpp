#include "chronorg/parsers/mail.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace chronorg::mail {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = char(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> tokenize(std::string_view text) {
    std::vector<std::string_view> tokens;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        if (i > start)
            tokens.push_back(text.substr(start, i - start));
    }
    return tokens;
}

std::optional<unsigned> to_number(std::string_view token) {
    if (token.empty() || token.size() > 9)
        return std::nullopt;
    unsigned value = 0;
    for (char c : token) {
        if (c < '0' || c > '9')
            return std::nullopt;
        value = value * 10 + unsigned(c - '0');
    }
    return value;
}

std::optional<unsigned> month_number(std::string_view token) {
    static constexpr std::string_view names[] = {"jan", "feb", "mar", "apr", "may", "jun",
                                                 "jul", "aug", "sep", "oct", "nov", "dec"};
    std::string t = lower(token.substr(0, 3));
    for (unsigned i = 0; i < 12; ++i)
        if (t == names[i])
            return i + 1;
    return std::nullopt;
}

// RFC 5322 obsolete zone names that still show up in the wild.
std::optional<int> named_zone_offset(std::string_view zone) {
    std::string z = lower(zone);
    if (z == "ut" || z == "gmt" || z == "z" || z == "utc")
        return 0;
    if (z == "est")
        return -5 * 3600;
    if (z == "edt")
        return -4 * 3600;
    if (z == "cst")
        return -6 * 3600;
    if (z == "cdt")
        return -5 * 3600;
    if (z == "mst")
        return -7 * 3600;
    if (z == "mdt")
        return -6 * 3600;
    if (z == "pst")
        return -8 * 3600;
    if (z == "pdt")
        return -7 * 3600;
    return std::nullopt;
}

int base64_value(char c) {
    if (c >= 'A' && c <= 'Z')
        return c - 'A';
    if (c >= 'a' && c <= 'z')
        return c - 'a' + 26;
    if (c >= '0' && c <= '9')
        return c - '0' + 52;
    if (c == '+')
        return 62;
    if (c == '/')
        return 63;
    return -1;
}

std::optional<std::string> decode_base64(std::string_view text) {
    std::string out;
    int acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\r' || c == '\n')
            continue;
        int v = base64_value(c);
        if (v < 0)
            return std::nullopt;
        acc = (acc << 6) | v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(char((acc >> bits) & 0xFF));
        }
    }
    return out;
}

std::optional<std::string> decode_q(std::string_view text) {
    std::string out;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '_') {
            out.push_back(' ');
        } else if (c == '=') {
            if (i + 2 >= text.size())
                return std::nullopt;
            auto hex = [](char h) -> int {
                if (h >= '0' && h <= '9')
                    return h - '0';
                if (h >= 'A' && h <= 'F')
                    return h - 'A' + 10;
                if (h >= 'a' && h <= 'f')
                    return h - 'a' + 10;
                return -1;
            };
            int hi = hex(text[i + 1]);
            int lo = hex(text[i + 2]);
            if (hi < 0 || lo < 0)
                return std::nullopt;
            out.push_back(char(hi * 16 + lo));
            i += 2;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string latin1_to_utf8(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    for (unsigned char b : bytes) {
        if (b < 0x80) {
            out.push_back(char(b));
        } else {
            out.push_back(char(0xC0 | (b >> 6)));
            out.push_back(char(0x80 | (b & 0x3F)));
        }
    }
    return out;
}

// One encoded word "=?charset?enc?payload?=" starting at pos; returns the
// decoded text and advances end past it, or nullopt if not an encoded word.
struct WordResult {
    std::string text;
    bool decodable = true;
};

std::optional<WordResult> decode_word(std::string_view raw, size_t pos, size_t& end) {
    if (!raw.substr(pos).starts_with("=?"))
        return std::nullopt;
    size_t q1 = raw.find('?', pos + 2);
    if (q1 == std::string_view::npos)
        return std::nullopt;
    size_t q2 = raw.find('?', q1 + 1);
    if (q2 == std::string_view::npos)
        return std::nullopt;
    size_t close = raw.find("?=", q2 + 1);
    if (close == std::string_view::npos)
        return std::nullopt;

    std::string charset = lower(trim(raw.substr(pos + 2, q1 - pos - 2)));
    std::string encoding = lower(raw.substr(q1 + 1, q2 - q1 - 1));
    std::string_view payload = raw.substr(q2 + 1, close - q2 - 1);
    end = close + 2;

    std::optional<std::string> bytes;
    if (encoding == "b")
        bytes = decode_base64(payload);
    else if (encoding == "q")
        bytes = decode_q(payload);
    if (!bytes)
        return WordResult{std::string(raw.substr(pos, end - pos)), false};

    if (charset == "utf-8" || charset == "utf8" || charset == "us-ascii")
        return WordResult{*bytes, true};
    if (charset == "iso-8859-1" || charset == "latin1" || charset == "latin-1")
        return WordResult{latin1_to_utf8(*bytes), true};
    return WordResult{std::string(raw.substr(pos, end - pos)), false};
}

// Header block of one message: unfolded "Name: value" pairs, stopping at the
// first blank line.
std::vector<std::pair<std::string, std::string>> read_headers(std::string_view raw) {
    std::vector<std::pair<std::string, std::string>> headers;
    size_t pos = 0;
    while (pos < raw.size()) {
        size_t eol = raw.find('\n', pos);
        std::string_view line = raw.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        pos = eol == std::string_view::npos ? raw.size() : eol + 1;

        if (line.empty())
            break;
        if ((line.front() == ' ' || line.front() == '\t') && !headers.empty()) {
            headers.back().second += ' ';
            headers.back().second += trim(line);
            continue;
        }
        size_t colon = line.find(':');
        if (colon == std::string_view::npos)
            continue;
        headers.emplace_back(lower(line.substr(0, colon)),
                             std::string(trim(line.substr(colon + 1))));
    }
    return headers;
}

const std::string* find_header(const std::vector<std::pair<std::string, std::string>>& headers,
                               std::string_view name) {
    for (const auto& [key, value] : headers)
        if (key == name)
            return &value;
    return nullptr;
}

std::string read_whole_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SourceUnreadable("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

} // namespace

std::optional<CivilTime> parse_rfc822_date(std::string_view text) {
    std::vector<std::string_view> tokens = tokenize(text);
    size_t i = 0;
    // Optional weekday ("Mon," or "Mon"); present when the first token is
    // not a number. Its value is decorative and deliberately not checked.
    if (i < tokens.size() && !to_number(tokens[i].substr(0, 1)))
        ++i;

    if (i + 3 >= tokens.size())
        return std::nullopt;
    auto day = to_number(tokens[i]);
    auto month = month_number(tokens[i + 1]);
    auto year = to_number(tokens[i + 2]);
    if (!day || !month || !year)
        return std::nullopt;
    if (*year < 100)
        *year += *year < 50 ? 2000 : 1900;

    CivilTime t;
    t.date = Date{int(*year), *month, *day};
    if (!is_valid_date(t.date))
        return std::nullopt;

    std::string_view clock = tokens[i + 3];
    auto hour = to_number(clock.substr(0, clock.find(':')));
    size_t c1 = clock.find(':');
    if (c1 == std::string_view::npos || !hour || *hour > 23)
        return std::nullopt;
    std::string_view rest = clock.substr(c1 + 1);
    size_t c2 = rest.find(':');
    auto minute = to_number(rest.substr(0, c2));
    if (!minute || *minute > 59)
        return std::nullopt;
    std::optional<unsigned> second;
    if (c2 != std::string_view::npos) {
        second = to_number(rest.substr(c2 + 1));
        if (!second || *second > 60)
            return std::nullopt;
    }
    t.hour = *hour;
    t.minute = *minute;
    t.second = second ? (*second == 60 ? 59 : *second) : 0;

    if (i + 4 >= tokens.size())
        return t; // no zone: treat as local time
    std::string_view zone = tokens[i + 4];
    if ((zone.front() == '+' || zone.front() == '-') && zone.size() == 5) {
        auto hh = to_number(zone.substr(1, 2));
        auto mm = to_number(zone.substr(3, 2));
        if (!hh || !mm || *mm > 59)
            return std::nullopt;
        int offset = int(*hh * 3600 + *mm * 60);
        if (zone.front() == '-')
            offset = -offset;
        return local_from_offset_civil(t, offset);
    }
    if (auto offset = named_zone_offset(zone))
        return local_from_offset_civil(t, *offset);
    return t;
}

std::string decode_encoded_words(std::string_view raw, std::vector<std::string>* failures) {
    std::string out;
    size_t pos = 0;
    bool last_was_word = false;
    while (pos < raw.size()) {
        size_t word_start = raw.find("=?", pos);
        if (word_start == std::string_view::npos) {
            out.append(raw.substr(pos));
            break;
        }
        size_t end = 0;
        auto word = decode_word(raw, word_start, end);
        if (!word) {
            out.append(raw.substr(pos, word_start + 2 - pos));
            pos = word_start + 2;
            last_was_word = false;
            continue;
        }
        std::string_view between = raw.substr(pos, word_start - pos);
        // Whitespace between two adjacent encoded words is transparent.
        if (!(last_was_word && word->decodable && trim(between).empty()))
            out.append(between);
        if (!word->decodable && failures)
            failures->push_back("undecodable encoded word " + word->text);
        out += word->text;
        last_was_word = word->decodable;
        pos = end;
    }
    return out;
}

ParseResult parse_message(std::string_view raw, std::string_view origin_name) {
    ParseResult result;
    result.records_seen = 1;
    auto headers = read_headers(raw);

    const std::string* date_header = find_header(headers, "date");
    if (!date_header) {
        result.errors.push_back(
            RecordError{"message has no Date header", std::string(origin_name)});
        return result;
    }
    std::optional<CivilTime> date = parse_rfc822_date(*date_header);
    if (!date) {
        result.errors.push_back(RecordError{"unparseable Date header \"" + *date_header + "\"",
                                            std::string(origin_name)});
        return result;
    }

    MessageRecord record;
    record.date = *date;
    record.origin = std::string(origin_name);
    if (const std::string* from = find_header(headers, "from"))
        record.from = *from;
    std::vector<std::string> failures;
    if (const std::string* subject = find_header(headers, "subject"))
        record.subject = decode_encoded_words(*subject, &failures);
    if (const std::string* id = find_header(headers, "message-id")) {
        std::string_view v = trim(*id);
        if (v.size() >= 2 && v.front() == '<' && v.back() == '>')
            v = v.substr(1, v.size() - 2);
        if (!v.empty())
            record.message_id = std::string(v);
    }
    for (std::string& failure : failures)
        result.errors.push_back(RecordError{std::move(failure), std::string(origin_name)});
    result.messages.push_back(std::move(record));
    return result;
}

ParseResult parse_mbox(std::string_view raw, std::string_view origin_name) {
    ParseResult result;
    std::vector<std::pair<size_t, size_t>> spans; // [begin, end) of each message
    size_t pos = 0;
    std::optional<size_t> begin;
    while (pos <= raw.size()) {
        size_t eol = raw.find('\n', pos);
        std::string_view line =
            raw.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
        if (line.starts_with("From ")) {
            if (begin)
                spans.emplace_back(*begin, pos);
            begin = eol == std::string_view::npos ? raw.size() : eol + 1;
        }
        if (eol == std::string_view::npos)
            break;
        pos = eol + 1;
    }
    if (begin)
        spans.emplace_back(*begin, raw.size());

    size_t index = 1;
    for (auto [from, to] : spans) {
        std::string origin = std::string(origin_name) + ":msg" + std::to_string(index++);
        ParseResult one = parse_message(raw.substr(from, to - from), origin);
        result.records_seen += one.records_seen;
        std::move(one.messages.begin(), one.messages.end(), std::back_inserter(result.messages));
        std::move(one.errors.begin(), one.errors.end(), std::back_inserter(result.errors));
    }
    return result;
}

ParseResult parse_path(const std::string& path) {
    namespace fs = std::filesystem;
    fs::path p(path);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
        if (!fs::is_directory(p / "cur", ec) && !fs::is_directory(p / "new", ec))
            throw SourceUnreadable(path + " is neither a maildir nor a message file");
        ParseResult result;
        std::vector<fs::path> files;
        for (const char* sub : {"cur", "new"}) {
            fs::path dir = p / sub;
            if (!fs::is_directory(dir, ec))
                continue;
            for (const auto& item : fs::directory_iterator(dir))
                if (item.is_regular_file())
                    files.push_back(item.path());
        }
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files) {
            ParseResult one = parse_message(read_whole_file(file), file.string());
            result.records_seen += one.records_seen;
            std::move(one.messages.begin(), one.messages.end(),
                      std::back_inserter(result.messages));
            std::move(one.errors.begin(), one.errors.end(), std::back_inserter(result.errors));
        }
        // Deterministic regardless of how the filesystem ordered the files.
        std::stable_sort(result.messages.begin(), result.messages.end(),
                         [](const MessageRecord& a, const MessageRecord& b) {
                             if (a.date != b.date)
                                 return a.date < b.date;
                             return a.origin < b.origin;
                         });
        return result;
    }

    if (!fs::is_regular_file(p, ec))
        throw SourceUnreadable("cannot read " + path);
    std::string raw = read_whole_file(p);
    if (raw.starts_with("From "))
        return parse_mbox(raw, path);
    return parse_message(raw, path);
}

ParseOutcome to_outcome(const ParseResult& result) {
    ParseOutcome outcome;
    outcome.errors = result.errors;
    outcome.records_seen = result.records_seen;
    for (const MessageRecord& message : result.messages) {
        EntryDraft draft;
        draft.timestamp = make_timestamp(message.date.date, clock_of(message.date));
        std::string from = message.from.empty() ? "(unknown sender)" : message.from;
        draft.summary = from + ": " + message.subject;
        if (message.message_id)
            draft.link = "message-id:" + *message.message_id;
        draft.properties.emplace_back("CREATED", iso_local_string(message.date));
        outcome.drafts.push_back(std::move(draft));
    }
    return outcome;
}

} // namespace chronorg::mail
