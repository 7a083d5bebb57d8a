#include <random>

#include "doctest.h"
#include "effint/collapse.hpp"
#include "effint/errors.hpp"
#include "effint/functor.hpp"
#include "effint/stock.hpp"
#include "oracles.hpp"

using namespace effint;

namespace {

constexpr std::uint64_t kFuel = 1u << 22;

std::vector<MorphismPair> random_pairs(std::size_t n, std::size_t span, unsigned seed) {
  std::mt19937 rng(seed);
  const auto perms = permutations_of_prefix(span);
  std::vector<MorphismPair> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back({perms[rng() % perms.size()], perms[rng() % perms.size()]});
  return out;
}

}  // namespace

TEST_CASE("cantor pairing and fact codes round trip") {
  for (std::uint64_t x = 0; x < 30; ++x) {
    for (std::uint64_t y = 0; y < 30; ++y) CHECK(cantor_unpair(cantor_pair(x, y)) == std::pair{x, y});
  }
  const Signature sig({2, 1, 3});
  for (std::size_t rel = 0; rel < 3; ++rel) {
    Tuple args(sig.arity(rel));
    for (std::size_t k = 0; k < args.size(); ++k) args[k] = 3 * k + rel;
    const auto back = decode_fact(encode_fact(rel, args), sig);
    REQUIRE(back.has_value());
    CHECK(back->first == rel);
    CHECK(back->second == args);
  }
  CHECK_THROWS_AS(cantor_pair(~std::uint64_t{0}, 1), ArgumentError);
}

TEST_CASE("constant functor outputs its copy for every input") {
  const auto F = constant_functor(linear_order(), Signature::empty());
  const auto copy = pull_back(pure_set(), MorphismOracle::from_permutation(FinMap({{0, 4}, {4, 0}})));
  for (const auto& in : {pure_set(), copy}) {
    const auto out = apply_to_presentation(F, in, kFuel);
    for (Elem x = 0; x < 10; ++x) {
      for (Elem y = 0; y < 10; ++y) CHECK(out.holds(0, {x, y}) == (x < y));
    }
  }
  const auto f = MorphismOracle::from_permutation(FinMap({{0, 1}, {1, 2}, {2, 0}}));
  const auto Ff = apply_to_morphism(F, pure_set(), f, pure_set(), kFuel);
  for (Elem n = 0; n < 20; ++n) CHECK(Ff.forward(n) == n);
}

TEST_CASE("identity functor on (omega,<)") {
  const auto F = identity_functor(Signature({2}));
  const auto out = apply_to_presentation(F, linear_order(), kFuel);
  for (Elem x = 0; x < 10; ++x) {
    for (Elem y = 0; y < 10; ++y) CHECK(out.holds(0, {x, y}) == (x < y));
  }
}

TEST_CASE("pairs functor on the pure set is the 2-subset intersection graph") {
  const auto F = interp_to_functor(pairs_intersect_scheme());
  const auto out = apply_to_presentation(F, pure_set(), kFuel);
  const auto c = oracle::brute_collapse(oracle::pairs_denote, 3, 6);
  for (Elem x = 0; x < 6; ++x) {
    for (Elem y = 0; y < 6; ++y) CHECK(out.holds(0, {x, y}) == oracle::meet_once(c.names[x], c.names[y]));
  }
}

TEST_CASE("pairs functor on a transposition permutes subsets") {
  const auto F = interp_to_functor(pairs_intersect_scheme());
  const auto c = oracle::brute_collapse(oracle::pairs_denote, 3, 40);
  const auto f = MorphismOracle::from_permutation(FinMap({{0, 1}, {1, 0}}));
  const auto Ff = apply_to_morphism(F, pure_set(), f, pure_set(), kFuel);
  for (Elem i = 0; i < 15; ++i) {
    std::set<Elem> img;
    for (Elem e : c.names[i]) img.insert(f.forward(e));
    const auto want = c.index_of(img);
    REQUIRE(want.has_value());
    CHECK(Ff.forward(i) == *want);
    CHECK(Ff.backward(Ff.forward(i)) == i);
  }
}

TEST_CASE("F(id) is the identity") {
  for (const auto& s : {identity_scheme(Signature::empty()), pairs_intersect_scheme()}) {
    const auto F = interp_to_functor(s);
    const auto Fid = apply_to_morphism(F, pure_set(), MorphismOracle::identity(), pure_set(), kFuel);
    for (Elem n = 0; n < 20; ++n) CHECK(Fid.forward(n) == n);
  }
}

TEST_CASE("F(f) forward and backward are mutually inverse") {
  const auto F = interp_to_functor(pairs_intersect_scheme());
  const auto f = MorphismOracle::from_permutation(FinMap({{0, 2}, {2, 3}, {3, 0}}));
  const auto B = pull_back(pure_set(), f.inverse());
  const auto Ff = apply_to_morphism(F, pure_set(), f, B, kFuel);
  for (Elem n = 0; n < 20; ++n) {
    CHECK(Ff.backward(Ff.forward(n)) == n);
    CHECK(Ff.forward(Ff.backward(n)) == n);
  }
}

TEST_CASE("functor laws") {
  const auto samples = random_pairs(10, 4, 7);
  SUBCASE("constant") {
    const auto r = check_functor_laws(constant_functor(linear_order(), Signature::empty()), pure_set(), samples, 20, kFuel);
    CHECK(r.ok());
    CHECK(r.points_checked > 0);
  }
  SUBCASE("identity") {
    CHECK(check_functor_laws(identity_functor(Signature({2})), linear_order(), samples, 20, kFuel).ok());
  }
  SUBCASE("synthesized from the identity scheme") {
    CHECK(check_functor_laws(interp_to_functor(identity_scheme(Signature::empty())), pure_set(), samples, 20, kFuel).ok());
  }
  SUBCASE("synthesized from the pairs scheme") {
    const auto r = check_functor_laws(interp_to_functor(pairs_intersect_scheme()), pure_set(), samples, 20, kFuel);
    CHECK(r.ok());
    CHECK(r.violations.empty());
  }
}

TEST_CASE("a functor ignoring the morphism breaks composition") {
  // phi_star answers with f applied twice: F(id) = id but F(f . g) differs.
  auto F = identity_functor(Signature::empty());
  F.phi_star = Functional([](Machine& m, Elem i) { return m.map(m.map(i)); }, "square");
  const std::vector<MorphismPair> samples{{FinMap({{0, 1}, {1, 2}, {2, 0}}), FinMap({{0, 1}, {1, 0}})}};
  const auto r = check_functor_laws(F, pure_set(), samples, 6, kFuel);
  CHECK_FALSE(r.ok());
}

TEST_CASE("outputs depend on the diagram only") {
  const auto F = interp_to_functor(identity_scheme(Signature({2})));
  const Presentation twin(Signature({2}), [](std::size_t, std::span<const Elem> a) { return a[0] < a[1]; }, "twin");
  REQUIRE(twin.identity() != linear_order().identity());
  const auto a = apply_to_presentation(F, linear_order(), kFuel);
  const auto b = apply_to_presentation(F, twin, kFuel);
  for (Elem x = 0; x < 8; ++x) {
    for (Elem y = 0; y < 8; ++y) CHECK(a.holds(0, {x, y}) == b.holds(0, {x, y}));
  }
}

TEST_CASE("running out of fuel surfaces as an error") {
  const auto F = interp_to_functor(pairs_intersect_scheme());
  const auto out = apply_to_presentation(F, pure_set(), 3);
  CHECK_THROWS_AS(out.holds(0, {5, 9}), FuelExhausted);
}

TEST_CASE("permutations_of_prefix") {
  CHECK(permutations_of_prefix(0).size() == 1);
  CHECK(permutations_of_prefix(4).size() == 24);
  for (const auto& p : permutations_of_prefix(3)) CHECK(p.is_permutation_of_prefix(3));
}
