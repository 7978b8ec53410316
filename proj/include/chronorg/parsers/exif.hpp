#pragma once
// Minimal EXIF reader for JPEG files: APP1 segment, TIFF header (II/MM),
// IFD0, Exif sub-IFD tag 0x9003 DateTimeOriginal with fallback to 0x0132
// DateTime. Every offset is bounds-checked against the buffer.

#include <optional>
#include <string>
#include <string_view>

#include "chronorg/core.hpp"

namespace chronorg::exif {

// "2008:09:15 14:34:56" from the first matching tag.
// Throws NoExifSegment, TruncatedTiff or NoDateTimeOriginal.
CivilTime read_datetime(std::string_view jpeg_bytes);

// File wrapper; throws SourceUnreadable on IO failure.
CivilTime read_datetime_file(const std::string& path);

} // namespace chronorg::exif
