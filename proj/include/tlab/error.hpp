#pragma once

#include <stdexcept>
#include <string>

namespace tlab {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A moment estimate with no usable mass (e.g. every projection is zero).
struct DegenerateEstimate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidPolygon : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Unsupported : std::logic_error {
    using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw InvalidArgument(what);
}

}  // namespace tlab
