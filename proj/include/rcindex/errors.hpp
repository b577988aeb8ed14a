#pragma once

#include <stdexcept>
#include <string>

namespace rcindex {

// Error taxonomy mirrors the CLI exit codes: validation -> 1,
// numeric -> 2, io -> 3.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rcindex
