#ifndef RITESCENE_ERRORS_HPP
#define RITESCENE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ritescene {

// I/O failures: missing directories, unreadable files. CLI exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed data or model files: bad PPM headers, bad JSON, version
// mismatches. CLI exit code 3.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated preconditions and internal invariants: dimension mismatches,
// out-of-range parameters. CLI exit code 4.
class InvariantError : public std::runtime_error {
public:
    explicit InvariantError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ritescene

#endif
