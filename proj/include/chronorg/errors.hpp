#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chronorg {

// Base of every error this library throws. Per-record problems inside a
// connector run are not exceptions; they are collected as RecordError values
// and turned into error entries.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDate : public Error {
public:
    using Error::Error;
};

class InvertedRange : public Error {
public:
    using Error::Error;
};

class EmptyTag : public Error {
public:
    using Error::Error;
};

class InvalidEntry : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Parse errors that point at a specific input line; line 0 means the
// position is unknown or irrelevant (in-memory fragment parsing).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

class MalformedStamp : public ParseError {
public:
    using ParseError::ParseError;
};

class MalformedDrawer : public ParseError {
public:
    using ParseError::ParseError;
};

class DuplicateId : public ParseError {
public:
    using ParseError::ParseError;
};

class MalformedExisting : public Error {
public:
    using Error::Error;
};

class UnsupportedMode : public Error {
public:
    using Error::Error;
};

class SourceUnreadable : public Error {
public:
    using Error::Error;
};

class NotICalendar : public Error {
public:
    using Error::Error;
};

class NotAFeed : public Error {
public:
    using Error::Error;
};

class XmlError : public ParseError {
public:
    using ParseError::ParseError;
};

class NoExifSegment : public Error {
public:
    using Error::Error;
};

class NoDateTimeOriginal : public Error {
public:
    using Error::Error;
};

class TruncatedTiff : public Error {
public:
    using Error::Error;
};

class NoFilesMatched : public Error {
public:
    using Error::Error;
};

class ConfigError : public ParseError {
public:
    using ParseError::ParseError;
};

} // namespace chronorg
