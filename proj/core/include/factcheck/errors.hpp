#pragma once

#include <stdexcept>

namespace factcheck {

// Malformed input content: bad file syntax, unknown labels, wrong format versions.
// Messages name the offending line where one exists.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem or network failure.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace factcheck
