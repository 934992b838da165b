#pragma once

#include <stdexcept>
#include <string>

namespace rpt {

// Arguments violate a documented precondition.
struct validation_error : std::invalid_argument {
    explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A file or stream could not be read, written, or parsed.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rpt
