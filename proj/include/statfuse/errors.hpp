#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace statfuse {

// Raised when two rasters that must share a grid do not, or when a
// resolution ratio does not divide the input dimensions.
class DimensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A metric or statistic whose denominator vanishes for the given input.
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computation produced or received a non-finite sample.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class RangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IOError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace statfuse
