#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace vlab {

/// Malformed input text (element/word/point/node-set literals).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iteration cap was exceeded.  The caps are generous; hitting one
/// signals a bug or a pathological input, not a normal failure mode.
struct CapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Global iteration cap, overridable through VLAB_MAX_ITERS.
inline long max_iters() {
    if (const char* s = std::getenv("VLAB_MAX_ITERS")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s) return v;
    }
    return 10000;
}

}  // namespace vlab
