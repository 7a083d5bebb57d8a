#include <random>

#include "doctest.h"
#include "effint/biinterp.hpp"
#include "effint/errors.hpp"
#include "effint/stock.hpp"

using namespace effint;

namespace {

constexpr std::uint64_t kFuel = 1u << 22;

Elem run_lambda(const Functional& l, const Presentation& X, Elem i) {
  const auto o = run_total(l, OracleTriple::diagram(DiagramSource::total(X)), i, kFuel);
  REQUIRE(o.halted());
  return o.value;
}

std::vector<FinMap> autos() {
  return {FinMap({{0, 1}, {1, 0}}), FinMap({{0, 1}, {1, 2}, {2, 0}}), FinMap({{1, 3}, {3, 1}}),
          FinMap({{0, 2}, {2, 3}, {3, 0}}), FinMap({{0, 3}, {1, 2}, {2, 1}, {3, 0}})};
}

std::vector<Presentation> copies() {
  std::vector<Presentation> out{pure_set()};
  for (const auto& a : {autos()[1], autos()[4]}) out.push_back(pull_back(pure_set(), MorphismOracle::from_permutation(a)));
  return out;
}

Term code(const std::vector<Term>& b, std::size_t index, const Term& marker) {
  std::vector<Term> items{marker};
  items.insert(items.end(), b.begin(), b.end());
  for (std::size_t k = 0; k < index; ++k) items.push_back(marker);
  return Term(std::move(items));
}

Term leaf_code(const Tuple& b, std::size_t index, Elem marker) {
  std::vector<Term> items;
  for (Elem e : b) items.emplace_back(e);
  return code(items, index, Term(marker));
}

}  // namespace

TEST_CASE("decode_map reads nested codes") {
  const PresentationOracle base(pure_set());
  const Term inner0 = leaf_code({4, 6}, 1, 9);  // names 6
  const Term inner1 = leaf_code({2}, 0, 0);     // names 2
  const Term marker = leaf_code({7}, 0, 8);
  CHECK(decode_map(1)(base, inner0) == 6);
  CHECK(decode_map(2)(base, code({inner0, inner1}, 0, marker)) == 6);
  CHECK(decode_map(2)(base, code({inner0, inner1}, 1, marker)) == 2);
  CHECK_THROWS_AS(decode_map(2)(base, inner0), DecodeError);
  CHECK_THROWS_AS(decode_map(1)(base, leaf_code({4, 9, 6}, 0, 9)), DecodeError);
}

TEST_CASE("decoding commutes with lifting through nested codes") {
  const PresentationOracle base(pure_set());
  const std::vector<MorphismOracle::MapFn> maps{[](Elem n) { return n + 10; },
                                                [](Elem n) { return n ^ 3; },
                                                [](Elem n) { return 2 * n + 1; }};
  for (Elem a = 0; a < 4; ++a) {
    for (Elem b = 0; b < 4; ++b) {
      if (a == b) continue;
      for (std::size_t i = 0; i < 2; ++i) {
        const Term t = code({leaf_code({a, b}, i, 5), leaf_code({b}, 0, 6)}, i, leaf_code({a}, 0, 7));
        for (const auto& f : maps) {
          CHECK(decode_map(2)(base, lift_term(f, t)) == f(decode_map(2)(base, t)));
          for (const auto& g : maps) {
            const MorphismOracle::MapFn fg = [&](Elem n) { return f(g(n)); };
            CHECK(lift_term(f, lift_term(g, t)) == lift_term(fg, t));
          }
        }
      }
    }
  }
}

TEST_CASE("identity bi-interpretation of the pure set") {
  const auto d = identity_biinterp(pure_set());
  const auto t = biinterp_to_bitransform(d);
  for (Elem i = 0; i < 10; ++i) {
    CHECK(run_lambda(t.lambdaA, pure_set(), i) == i);
    CHECK(run_lambda(t.lambdaA_inverse, pure_set(), i) == i);
    CHECK(run_lambda(t.lambdaB, pure_set(), i) == i);
  }
}

TEST_CASE("identity bi-interpretation of (omega,<) preserves the order") {
  const auto d = identity_biinterp(linear_order());
  const auto t = biinterp_to_bitransform(d);
  const auto GF = apply_to_presentation(t.G, apply_to_presentation(t.F, linear_order(), kFuel), kFuel);
  std::vector<Elem> lam;
  for (Elem i = 0; i < 10; ++i) lam.push_back(run_lambda(t.lambdaA, linear_order(), i));
  for (Elem x = 0; x < 10; ++x) {
    for (Elem y = 0; y < 10; ++y) CHECK(GF.holds(0, {lam[x], lam[y]}) == (x < y));
  }
}

TEST_CASE("pseudo-inverse conditions") {
  const auto d = identity_biinterp(pure_set());
  const auto t = biinterp_to_bitransform(d);
  const auto r = check_pseudo_inverse(t, copies(), copies(), 10, kFuel);
  CHECK(r.ok());
  CHECK(r.points_checked >= 60);

  auto broken = t;
  broken.lambdaB = twist_output(t.lambdaB, 0, 1);
  const auto b = check_pseudo_inverse(broken, {pure_set()}, {}, 10, kFuel);
  REQUIRE_FALSE(b.failures.empty());
  const Elem p = b.failures.front().point;
  CHECK((p == 0 || p == 1));
}

TEST_CASE("effective isomorphism with the identity") {
  SUBCASE("identity functors, identity lambda") {
    const auto I = identity_functor(Signature::empty());
    const Functional id([](Machine&, Elem i) { return i; }, "id");
    CHECK(check_effective_iso_identity(I, I, id, copies(), autos(), 10, kFuel).ok());
  }
  SUBCASE("derived lambda") {
    const auto t = biinterp_to_bitransform(identity_biinterp(pure_set()));
    CHECK(check_effective_iso_identity(t.F, t.G, t.lambdaA, copies(), autos(), 10, kFuel).ok());
    CHECK(check_effective_iso_identity(t.G, t.F, t.lambdaB, copies(), autos(), 10, kFuel).ok());
  }
  SUBCASE("a lambda ignoring the morphism fails") {
    const auto t = biinterp_to_bitransform(identity_biinterp(pure_set()));
    const auto r = check_effective_iso_identity(t.F, t.G, twist_output(t.lambdaA, 0, 1), copies(),
                                                autos(), 10, kFuel);
    CHECK_FALSE(r.failures.empty());
  }
}

TEST_CASE("characteristic conditions are invariant under automorphisms") {
  const auto d = identity_biinterp(pure_set());
  CHECK(check_char_conditions(d, decode_map(1), decode_map(1), 10, kFuel).ok());
  for (const auto& pi : autos()) {
    const auto alpha = after_permutation(decode_map(1), pi);
    CAPTURE(alpha.name);
    const auto r = check_char_conditions(d, alpha, decode_map(1), 10, kFuel);
    CHECK(r.ok());
    CHECK(r.points_checked > 0);
  }
}

TEST_CASE("a shifted g breaks the characteristic conditions") {
  auto d = identity_biinterp(pure_set());
  d.g = shifted(d.g, 1);
  CHECK_FALSE(check_char_conditions(d, decode_map(1), decode_map(1), 10, kFuel).failures.empty());
}

TEST_CASE("theta is equivariant") {
  const auto d = identity_biinterp(pure_set());
  const auto t = biinterp_to_bitransform(d);
  CHECK(check_theta_equivariance(d, t, copies(), autos(), 8, kFuel).ok());
}

TEST_CASE("functor image oracle charges its base") {
  const auto F = interp_to_functor(pairs_intersect_scheme());
  const PresentationOracle base(pure_set());
  const FunctorImageOracle img(F, base, kFuel);
  const Tuple args{0, 1};
  CHECK(img.holds(0, args) == apply_to_presentation(F, pure_set(), kFuel).holds(0, {0, 1}));
  const FunctorImageOracle starved(F, base, 2);
  CHECK_THROWS_AS(starved.holds(0, args), FuelExhausted);
}
