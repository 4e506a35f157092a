#pragma once

#include <stdexcept>
#include <string>

namespace l2t {

// Bad user-supplied configuration (maps to CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent document on disk (maps to CLI exit code 2).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Missing or unreadable file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operation called on an object that is not ready for it.
class InvalidState : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace l2t
