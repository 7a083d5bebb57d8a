#include "effint/gallery.hpp"

#include "effint/collapse.hpp"
#include "effint/errors.hpp"
#include "effint/stock.hpp"

namespace effint {

namespace {

std::vector<FinMap> pure_set_automorphisms() {
  return {FinMap({{0, 1}, {1, 0}}),
          FinMap({{0, 1}, {1, 2}, {2, 0}}),
          FinMap({{1, 3}, {3, 1}}),
          FinMap({{0, 2}, {2, 3}, {3, 0}}),
          FinMap({{0, 3}, {1, 2}, {2, 1}, {3, 0}})};
}

const std::vector<std::string> kFunctorSuites = {
    "dom-dichotomy", "equivalence-laws", "canonical-embedding",
    "functor-laws",  "synthesized-functor-laws", "natural-square", "uniformity"};

std::vector<std::string> with_scheme_suites(bool relations) {
  std::vector<std::string> out{"scheme-soundness"};
  for (const auto& s : kFunctorSuites) {
    out.push_back(s);
    if (relations && s == "equivalence-laws") out.push_back("rq-partition");
  }
  return out;
}

}  // namespace

std::vector<std::string> gallery_list() {
  return {"constant", "identity-pure-set", "pairs-intersect", "identity-biinterp"};
}

GalleryItem gallery_item(const std::string& name) {
  if (name == "constant") {
    std::vector<std::string> expected = kFunctorSuites;
    expected.insert(expected.begin() + 2, "rq-partition");
    return {name,
            "constant functor from the pure set onto (omega,<)",
            pure_set(),
            std::nullopt,
            constant_functor(linear_order(), Signature::empty()),
            std::nullopt,
            pure_set_automorphisms(),
            expected};
  }
  if (name == "identity-pure-set") {
    auto s = identity_scheme(Signature::empty());
    s.name = "identity-pure-set";
    auto F = interp_to_functor(s);
    return {name, "identity interpretation of the pure set in itself", pure_set(), s, F,
            std::nullopt, pure_set_automorphisms(), with_scheme_suites(false)};
  }
  if (name == "pairs-intersect") {
    auto s = pairs_intersect_scheme();
    auto F = interp_to_functor(s);
    return {name, "2-subsets of the pure set, related when they share one element", pure_set(),
            s, F, std::nullopt, pure_set_automorphisms(), with_scheme_suites(true)};
  }
  if (name == "identity-biinterp") {
    auto d = identity_biinterp(pure_set());
    auto F = interp_to_functor(d.interpBinA);
    return {name,
            "the pure set bi-interpreted with itself by identity schemes",
            pure_set(),
            d.interpBinA,
            F,
            d,
            pure_set_automorphisms(),
            {"functor-laws", "pseudo-inverse", "effective-iso-A", "effective-iso-B",
             "broken-lambda-detected", "char-conditions", "char-shift-detected",
             "theta-equivariance"}};
  }
  throw ArgumentError("unknown item: " + name);
}

GalleryItem item_from_scheme(const InterpScheme& scheme) {
  scheme.validate();
  std::optional<Presentation> base;
  std::vector<FinMap> autos;
  if (scheme.source == Signature::empty()) {
    base = pure_set();
    autos = pure_set_automorphisms();
  } else if (scheme.source == Signature({2})) {
    base = linear_order();
  } else {
    throw ArgumentError("no stock base structure for the source signature of " + scheme.name);
  }
  const bool relations = scheme.target.relation_count().value_or(0) > 0;
  return {scheme.name.empty() ? "scheme" : scheme.name,
          "scheme loaded from file",
          *base,
          scheme,
          interp_to_functor(scheme),
          std::nullopt,
          autos,
          with_scheme_suites(relations)};
}

}  // namespace effint
