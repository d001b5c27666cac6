#pragma once

#include <stdexcept>
#include <string>

namespace hetplan {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// File could not be read or written.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

// Malformed input text (JSON or trace DSL). Carries a source position when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0, int column = 0)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    static std::string format(const std::string& what, int line, int column) {
        if (line <= 0)
            return what;
        return "line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + what;
    }

    int line_;
    int column_;
};

// Well-formed input that violates an invariant. The message names the offending
// field path, e.g. "pes[0].opps: not ascending by freq_hz".
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(path) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace hetplan
