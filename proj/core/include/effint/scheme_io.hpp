#pragma once

// Text form of interpretation schemes.
//
//   interp-scheme v1
//   name <identifier>
//   source-arities <a_0> ...
//   target-arities <a_0> ...
//   <part> <side> <shape> <witnesses> [| <literal> | <literal> ...]
//
// <part> is "dom", "equiv" or "rel <i>"; <side> is "pos" or "neg"; <shape>
// lists block lengths joined by commas ("3" for a domain condition, "3,3"
// for an equivalence condition) or is "*" for a wildcard condition.
// Literals are "+ rel <j> <positions...>", "- rel <j> <positions...>",
// "+ eq <a> <b>" or "- eq <a> <b>". Positions index the concatenated blocks
// followed by the witnesses. Blank lines and lines starting with '#' are
// ignored.

#include <iosfwd>
#include <string>
#include <string_view>

#include "effint/interp.hpp"

namespace effint {

/// Throws ArgumentError for generated (non-listed) schemes.
std::string scheme_to_text(const InterpScheme& scheme);
/// Throws ParseError carrying the offending line number.
InterpScheme scheme_from_text(std::string_view text);

void save_scheme(const InterpScheme& scheme, const std::string& path);
InterpScheme load_scheme(const std::string& path);

std::string condition_to_text(const ExistentialCondition& c);

}  // namespace effint
