#pragma once

#include <stdexcept>
#include <string>

#include "summatau/sequence.hpp"

namespace summatau {

/// Syntax error with a 0-based byte offset into the input.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t offset)
        : std::runtime_error(std::move(msg) + " at offset " + std::to_string(offset)),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Parses the sequence DSL:
///   spec := name [ "(" [arg ("," arg)*] ")" ]
///   arg  := ident "=" number
///   name, ident := [a-z_][a-z0-9_]*   (digits allowed after the first char;
///                                      pm1_pattern needs one)
///   number := decimal with optional sign/exponent
/// Whitespace-insensitive. The "seed" argument, where accepted, must be a
/// non-negative integer and is stored separately from real parameters.
SequenceSpec parse_spec(const std::string& text);

/// Canonical text for a spec; parse_spec(render_spec(s)) == s.
std::string render_spec(const SequenceSpec& spec);

} // namespace summatau
