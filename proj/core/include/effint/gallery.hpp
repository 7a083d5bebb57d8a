#pragma once

// Worked structures, interpretations and functors with the property suites
// each is expected to pass.

#include <optional>
#include <string>
#include <vector>

#include "effint/biinterp.hpp"
#include "effint/functor.hpp"
#include "effint/interp.hpp"

namespace effint {

struct GalleryItem {
  std::string name;
  std::string description;
  Presentation base;
  std::optional<InterpScheme> scheme;
  std::optional<CompFunctor> functor;
  std::optional<BiInterpData> biinterp;
  /// Automorphisms of `base` used to sample morphisms between copies.
  std::vector<FinMap> automorphisms;
  /// Suite identifiers, in report order.
  std::vector<std::string> expected;
};

/// Item names in a fixed order.
std::vector<std::string> gallery_list();
/// Throws ArgumentError("unknown item: <name>") for a name not in the list.
GalleryItem gallery_item(const std::string& name);

/// An item for a listed scheme over the pure set or (omega,<), chosen by the
/// source signature. Throws ArgumentError for other sources.
GalleryItem item_from_scheme(const InterpScheme& scheme);

}  // namespace effint
