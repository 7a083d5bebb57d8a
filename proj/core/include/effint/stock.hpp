#pragma once

// Hand-written interpretation schemes used by the gallery and the tests.

#include "effint/interp.hpp"

namespace effint {

/// The identity interpretation: the domain is the codes (m, x) with m != x,
/// the code names x, and relation j holds of codes iff it holds of the
/// named elements.
InterpScheme identity_scheme(const Signature& sig);

/// 2-subsets of a pure set. The domain is the codes (f, x, y) of pairs with
/// distinct entries, (f, x, y) names {x, y}, and the single binary relation
/// holds iff the two subsets share exactly one element.
InterpScheme pairs_intersect_scheme();

}  // namespace effint
