#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fcgtrack {

/// Malformed input text. Carries the file (may be empty for in-memory text)
/// and the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, std::size_t line, const std::string& what)
        : std::runtime_error(format(path, line, what)), path_(std::move(path)), line_(line) {}

    const std::string& path() const { return path_; }
    std::size_t line() const { return line_; }

private:
    static std::string format(const std::string& path, std::size_t line, const std::string& what) {
        std::string where = path.empty() ? std::string("<input>") : path;
        return where + ":" + std::to_string(line) + ": " + what;
    }

    std::string path_;
    std::size_t line_;
};

/// Missing/unreadable/unwritable file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fcgtrack
