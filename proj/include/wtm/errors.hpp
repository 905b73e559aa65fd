#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wtm {

// Correlation is undefined on (near-)constant pixel data.
class DegenerateWindowError : public std::runtime_error {
public:
    explicit DegenerateWindowError(const std::string& what) : std::runtime_error(what) {}
};

// A template whose weighted sum of squared deviations is below the variance floor.
class DegenerateTemplateError : public std::runtime_error {
public:
    explicit DegenerateTemplateError(const std::string& what) : std::runtime_error(what) {}
};

// Every candidate placement of a sliding-window search was skipped as degenerate.
class NoValidWindowError : public std::runtime_error {
public:
    explicit NoValidWindowError(const std::string& what) : std::runtime_error(what) {}
};

// Synthetic scene geometry cannot be realized (eyes overlap or exit the image).
class PlacementError : public std::runtime_error {
public:
    explicit PlacementError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input; position is a byte offset (binary formats) or a 1-based line number (text formats).
class ParseError : public std::runtime_error {
public:
    enum class Unit { Byte, Line };

    ParseError(const std::string& what, Unit unit, std::size_t position)
        : std::runtime_error(what + (unit == Unit::Byte ? " (byte " : " (line ") +
                             std::to_string(position) + ")"),
          unit_(unit),
          position_(position) {}

    static ParseError at_byte(const std::string& what, std::size_t offset) {
        return {what, Unit::Byte, offset};
    }
    static ParseError at_line(const std::string& what, std::size_t line) {
        return {what, Unit::Line, line};
    }

    Unit unit() const noexcept { return unit_; }
    std::size_t position() const noexcept { return position_; }

private:
    Unit unit_;
    std::size_t position_;
};

}  // namespace wtm
