#include "chronorg/parsers/exif.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "chronorg/errors.hpp"

namespace chronorg::exif {
namespace {

// All multi-byte reads go through this view so every access is checked
// against the buffer, whatever the declared offsets claim.
struct TiffView {
    std::string_view bytes;
    bool little_endian = true;

    uint8_t u8(uint64_t pos) const {
        if (pos >= bytes.size())
            throw TruncatedTiff("read past end of TIFF data");
        return uint8_t(bytes[pos]);
    }

    uint16_t u16(uint64_t pos) const {
        uint16_t a = u8(pos), b = u8(pos + 1);
        return little_endian ? uint16_t(a | (b << 8)) : uint16_t((a << 8) | b);
    }

    uint32_t u32(uint64_t pos) const {
        uint32_t a = u8(pos), b = u8(pos + 1), c = u8(pos + 2), d = u8(pos + 3);
        return little_endian ? (a | (b << 8) | (c << 16) | (d << 24))
                             : ((a << 24) | (b << 16) | (c << 8) | d);
    }

    std::string_view ascii(uint64_t pos, uint32_t count) const {
        if (count == 0 || pos + count > bytes.size())
            throw TruncatedTiff("ASCII value out of bounds");
        return bytes.substr(pos, count);
    }
};

struct IfdEntry {
    uint16_t tag = 0;
    uint16_t type = 0;
    uint32_t count = 0;
    uint64_t entry_pos = 0; // position of this 12-byte entry
};

constexpr uint16_t kTagExifIfd = 0x8769;
constexpr uint16_t kTagDateTimeOriginal = 0x9003;
constexpr uint16_t kTagDateTime = 0x0132;
constexpr uint16_t kTypeAscii = 2;

std::vector<IfdEntry> read_ifd(const TiffView& tiff, uint64_t offset) {
    uint16_t count = tiff.u16(offset);
    if (count > 512)
        throw TruncatedTiff("implausible IFD entry count");
    std::vector<IfdEntry> entries;
    entries.reserve(count);
    for (uint16_t i = 0; i < count; ++i) {
        uint64_t pos = offset + 2 + uint64_t(i) * 12;
        IfdEntry entry;
        entry.tag = tiff.u16(pos);
        entry.type = tiff.u16(pos + 2);
        entry.count = tiff.u32(pos + 4);
        entry.entry_pos = pos;
        entries.push_back(entry);
    }
    return entries;
}

const IfdEntry* find_tag(const std::vector<IfdEntry>& entries, uint16_t tag) {
    for (const IfdEntry& entry : entries)
        if (entry.tag == tag)
            return &entry;
    return nullptr;
}

// ASCII values of more than four bytes live at an offset; shorter ones are
// stored inline in the value field itself.
std::string_view ascii_value(const TiffView& tiff, const IfdEntry& entry) {
    if (entry.type != kTypeAscii)
        throw TruncatedTiff("expected an ASCII tag");
    uint64_t pos = entry.count <= 4 ? entry.entry_pos + 8 : tiff.u32(entry.entry_pos + 8);
    return tiff.ascii(pos, entry.count);
}

std::optional<unsigned> read_digits(std::string_view text, size_t pos, size_t count) {
    if (pos + count > text.size())
        return std::nullopt;
    unsigned value = 0;
    for (size_t i = 0; i < count; ++i) {
        char c = text[pos + i];
        if (c < '0' || c > '9')
            return std::nullopt;
        value = value * 10 + unsigned(c - '0');
    }
    return value;
}

// "2008:09:15 14:34:56", NUL-terminated in the file.
CivilTime parse_exif_datetime(std::string_view raw) {
    while (!raw.empty() && (raw.back() == '\0' || raw.back() == ' '))
        raw.remove_suffix(1);
    auto bad = [&] {
        return NoDateTimeOriginal("malformed EXIF date \"" + std::string(raw) + "\"");
    };
    if (raw.size() != 19 || raw[4] != ':' || raw[7] != ':' || raw[10] != ' ' ||
        raw[13] != ':' || raw[16] != ':')
        throw bad();
    auto year = read_digits(raw, 0, 4);
    auto month = read_digits(raw, 5, 2);
    auto day = read_digits(raw, 8, 2);
    auto hour = read_digits(raw, 11, 2);
    auto minute = read_digits(raw, 14, 2);
    auto second = read_digits(raw, 17, 2);
    if (!year || !month || !day || !hour || !minute || !second)
        throw bad();
    CivilTime t;
    t.date = Date{int(*year), *month, *day};
    if (!is_valid_date(t.date) || *hour > 23 || *minute > 59 || *second > 60)
        throw bad();
    t.hour = *hour;
    t.minute = *minute;
    t.second = *second == 60 ? 59 : *second;
    return t;
}

// Walks JPEG segments looking for APP1 with an Exif payload.
std::string_view find_exif_payload(std::string_view jpeg) {
    if (jpeg.size() < 4 || uint8_t(jpeg[0]) != 0xFF || uint8_t(jpeg[1]) != 0xD8)
        throw NoExifSegment("not a JPEG stream");
    size_t pos = 2;
    while (pos + 4 <= jpeg.size()) {
        if (uint8_t(jpeg[pos]) != 0xFF)
            throw NoExifSegment("broken JPEG marker structure");
        uint8_t marker = uint8_t(jpeg[pos + 1]);
        if (marker == 0xD8 || marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7)) {
            pos += 2; // standalone marker, no payload
            continue;
        }
        if (marker == 0xD9 || marker == 0xDA)
            break; // end of image / start of scan: no APP1 will follow
        size_t length = (uint8_t(jpeg[pos + 2]) << 8) | uint8_t(jpeg[pos + 3]);
        if (length < 2 || pos + 2 + length > jpeg.size())
            throw NoExifSegment("JPEG segment length out of bounds");
        if (marker == 0xE1) {
            std::string_view payload = jpeg.substr(pos + 4, length - 2);
            if (payload.starts_with(std::string_view("Exif\0\0", 6)))
                return payload.substr(6);
        }
        pos += 2 + length;
    }
    throw NoExifSegment("no APP1 Exif segment");
}

} // namespace

CivilTime read_datetime(std::string_view jpeg_bytes) {
    TiffView tiff{find_exif_payload(jpeg_bytes), true};

    if (tiff.bytes.size() < 8)
        throw TruncatedTiff("TIFF header truncated");
    if (tiff.bytes.substr(0, 2) == "II")
        tiff.little_endian = true;
    else if (tiff.bytes.substr(0, 2) == "MM")
        tiff.little_endian = false;
    else
        throw TruncatedTiff("bad TIFF byte-order mark");
    if (tiff.u16(2) != 42)
        throw TruncatedTiff("bad TIFF magic");

    std::vector<IfdEntry> ifd0 = read_ifd(tiff, tiff.u32(4));

    if (const IfdEntry* pointer = find_tag(ifd0, kTagExifIfd)) {
        std::vector<IfdEntry> exif_ifd = read_ifd(tiff, tiff.u32(pointer->entry_pos + 8));
        if (const IfdEntry* tag = find_tag(exif_ifd, kTagDateTimeOriginal))
            return parse_exif_datetime(ascii_value(tiff, *tag));
    }
    if (const IfdEntry* tag = find_tag(ifd0, kTagDateTime))
        return parse_exif_datetime(ascii_value(tiff, *tag));
    throw NoDateTimeOriginal("no DateTimeOriginal or DateTime tag");
}

CivilTime read_datetime_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SourceUnreadable("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = std::move(buf).str();
    return read_datetime(bytes);
}

} // namespace chronorg::exif
