#pragma once

// Line-oriented text records for signatures, fragments and finite maps.
//
//   signature <count> <arity_0> ... <arity_{count-1}>
//   fragment <length> <bits>        bits is a 0/1 string, or "-" when empty
//   finmap <from>:<to> ...          pairs in ascending order of <from>
//
// Fields are separated by single spaces.

#include <string>
#include <string_view>

#include "effint/model.hpp"

namespace effint {

std::string to_text(const Signature& sig);
std::string to_text(const DiagramFragment& frag);
std::string to_text(const FinMap& map);

/// Parsers take one record; `line` is reported in ParseError.
Signature parse_signature(std::string_view text, std::size_t line = 1);
DiagramFragment parse_fragment(std::string_view text, std::size_t line = 1);
FinMap parse_finmap(std::string_view text, std::size_t line = 1);

}  // namespace effint
