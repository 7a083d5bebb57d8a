#include <random>
#include <set>

#include "doctest.h"
#include "effint/errors.hpp"
#include "effint/functor.hpp"
#include "effint/model.hpp"
#include "effint/text_io.hpp"
#include "oracles.hpp"

using namespace effint;

namespace {

Presentation pairs_base() {
  // One binary, one unary and one ternary relation, all arithmetic.
  return Presentation(Signature({2, 1, 3}),
                      [](std::size_t rel, std::span<const Elem> a) {
                        switch (rel) {
                          case 0: return (a[0] + 2 * a[1]) % 3 == 0;
                          case 1: return a[0] % 2 == 1;
                          default: return a[0] + a[1] > a[2];
                        }
                      },
                      "arith");
}

FinMap random_perm(std::mt19937& rng, std::size_t n) {
  std::vector<Elem> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = i;
  std::shuffle(img.begin(), img.end(), rng);
  return FinMap::from_images(img);
}

}  // namespace

TEST_CASE("fragment of the pure set has no bits") {
  Tuple b{5, 9};
  auto f = fragment_of(pure_set(), b);
  CHECK(f.length() == 2);
  CHECK(f.bits().empty());
}

TEST_CASE("fragment of (omega,<) at (3,1)") {
  Tuple b{3, 1};
  auto f = fragment_of(linear_order(), b);
  CHECK(f.length() == 2);
  CHECK(f.bits() == std::vector<bool>{false, false, true, false});
}

TEST_CASE("fragment layout agrees with an independent evaluator") {
  const auto pres = pairs_base();
  for (Elem x = 0; x < 4; ++x) {
    for (Elem y = 0; y < 4; ++y) {
      Tuple b{x, 7, y, 2};
      CHECK(fragment_of(pres, b).bits() == oracle::fragment_bits(pres, b));
    }
  }
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(fragment_size(pres.signature(), k) ==
          oracle::fragment_bits(pres, Tuple(k, 0)).size());
  }
}

TEST_CASE("fragment is prefix monotone") {
  const auto pres = pairs_base();
  Tuple c{4, 0, 6, 1, 3};
  const auto big = fragment_of(pres, c);
  for (std::size_t k = 0; k <= c.size(); ++k) {
    Tuple b(c.begin(), c.begin() + k);
    const auto small = fragment_of(pres, b);
    const std::size_t rels = pres.signature().relations_below(k);
    for (std::size_t j = 0; j < rels; ++j) {
      const std::size_t a = pres.signature().arity(j);
      Tuple args(a, 0);
      for (;;) {
        auto s = small.lookup(pres.signature(), j, args);
        auto l = big.lookup(pres.signature(), j, args);
        REQUIRE(s.has_value());
        REQUIRE(l.has_value());
        CHECK(*s == *l);
        std::size_t p = 0;
        while (p < a && ++args[p] == k) args[p++] = 0;
        if (p == a) break;
      }
    }
  }
}

TEST_CASE("apply_perm") {
  Tuple x{7, 8, 9};
  CHECK(apply_perm(x, FinMap::identity_prefix(3)) == Tuple{7, 8, 9});
  CHECK(apply_perm(x, FinMap({{0, 2}, {1, 0}, {2, 1}})) == Tuple{9, 7, 8});
  CHECK_THROWS_AS(apply_perm(x, FinMap({{0, 1}, {1, 0}})), ArgumentError);
  CHECK_THROWS_AS(apply_perm(x, FinMap({{0, 3}, {1, 1}, {2, 2}})), ArgumentError);
}

TEST_CASE("apply_perm is a right action") {
  std::mt19937 rng(12345);
  for (int n = 0; n < 100; ++n) {
    const std::size_t len = 1 + rng() % 6;
    Tuple x(len);
    for (auto& e : x) e = rng() % 20;
    const FinMap s = random_perm(rng, len);
    const FinMap r = random_perm(rng, len);
    CHECK(apply_perm(apply_perm(x, s), r) == apply_perm(x, s.after(r)));
  }
}

TEST_CASE("apply_perm group laws are exhaustive for length <= 6") {
  for (std::size_t len = 1; len <= 6; ++len) {
    Tuple x(len);
    for (std::size_t i = 0; i < len; ++i) x[i] = 10 + i;
    CHECK(apply_perm(x, FinMap::identity_prefix(len)) == x);
    for (const FinMap& s : permutations_of_prefix(len)) {
      CHECK(apply_perm(apply_perm(x, s), s.inverse()) == x);
    }
  }
}

TEST_CASE("encode_pair") {
  Tuple b{2, 5};
  CHECK(encode_pair(b, 0, 0) == Tuple{0, 2, 5});
  CHECK(encode_pair(b, 3, 7) == Tuple{7, 2, 5, 7, 7, 7});
  CHECK_THROWS_AS(encode_pair(b, 1, 5), ArgumentError);
  CHECK(encode_pair(b, 1) == Tuple{6, 2, 5, 6});
}

TEST_CASE("decode_pair") {
  CHECK(decode_pair(Tuple{0, 2, 5}) == DecodedPair{{2, 5}, 0});
  CHECK(decode_pair(Tuple{7, 2, 5, 7, 7, 7}) == DecodedPair{{2, 5}, 3});
  CHECK_THROWS_AS(decode_pair(Tuple{7, 2, 7, 5, 7}), DecodeError);
  CHECK_THROWS_AS(decode_pair(Tuple{}), DecodeError);
  CHECK_FALSE(try_decode_pair(Tuple{7, 2, 7, 5}).has_value());
}

TEST_CASE("pair coding round trips exhaustively") {
  std::size_t checked = 0;
  for (std::size_t len = 0; len <= 4; ++len) {
    Tuple b(len, 0);
    for (;;) {
      for (std::size_t m = 0; m <= 5; ++m) {
        for (Elem fresh : {Elem{10}, Elem{11}, Elem{42}}) {
          const auto code = encode_pair(b, m, fresh);
          const auto back = decode_pair(code);
          CHECK(back.tuple == b);
          CHECK(back.index == m);
          ++checked;
        }
      }
      std::size_t p = 0;
      while (p < len && ++b[p] == 10) b[p++] = 0;
      if (p == len) break;
    }
  }
  CHECK(checked > 10000);
}

TEST_CASE("pull_back") {
  const auto lo = linear_order();
  const auto same = pull_back(lo, MorphismOracle::identity());
  for (Elem x = 0; x < 20; ++x) {
    for (Elem y = 0; y < 10; ++y) CHECK(same.holds(0, {x, y}) == lo.holds(0, {x, y}));
  }
  const auto swapped = pull_back(lo, MorphismOracle::from_permutation(FinMap({{0, 1}, {1, 0}})));
  CHECK_FALSE(swapped.holds(0, {0, 1}));
  CHECK(swapped.holds(0, {1, 0}));
}

TEST_CASE("pull_back diagram prefixes come from f on the base") {
  const auto base = pairs_base();
  const auto f = MorphismOracle::from_permutation(FinMap({{0, 3}, {3, 5}, {5, 0}, {1, 2}, {2, 1}}));
  const auto bf = pull_back(base, f);
  for (std::size_t n = 0; n <= 8; ++n) {
    Tuple ids(n), img(n);
    for (std::size_t i = 0; i < n; ++i) {
      ids[i] = i;
      img[i] = f.forward(i);
    }
    CHECK(fragment_of(bf, ids).bits() == oracle::fragment_bits(base, img));
  }
}

TEST_CASE("pulled back copies are isomorphic through the attached map") {
  const auto base = pairs_base();
  const auto f = MorphismOracle::from_permutation(FinMap({{0, 2}, {2, 4}, {4, 0}}));
  const auto bf = pull_back(base, f);
  for (Elem x = 0; x < 6; ++x) {
    for (Elem y = 0; y < 6; ++y) {
      CHECK(bf.holds(0, {x, y}) == base.holds(0, {f.forward(x), f.forward(y)}));
      for (Elem z = 0; z < 6; ++z) {
        CHECK(bf.holds(2, {x, y, z}) ==
              base.holds(2, {f.forward(x), f.forward(y), f.forward(z)}));
      }
    }
  }
}

TEST_CASE("morphism oracles invert and compose") {
  const auto f = MorphismOracle::from_permutation(FinMap({{0, 1}, {1, 2}, {2, 0}}));
  const auto g = MorphismOracle::from_permutation(FinMap({{1, 3}, {3, 4}, {4, 1}}));
  for (Elem n = 0; n < 30; ++n) {
    CHECK(f.backward(f.forward(n)) == n);
    CHECK(f.forward(f.backward(n)) == n);
    CHECK(f.after(g).forward(n) == f.forward(g.forward(n)));
    CHECK(f.inverse().forward(n) == f.backward(n));
  }
  CHECK_THROWS_AS(MorphismOracle::from_permutation(FinMap(std::map<Elem, Elem>{{0, 1}})), ArgumentError);
}

TEST_CASE("lift_to_tuples and lift_term") {
  auto id = lift_to_tuples([](Elem n) { return n; });
  CHECK(id(Tuple{1, 2, 3}) == Tuple{1, 2, 3});
  auto succ = lift_to_tuples([](Elem n) { return n + 1; });
  CHECK(succ(Tuple{0, 0}) == Tuple{1, 1});
  const MorphismOracle::MapFn f = [](Elem n) { return 3 * n + 1; };
  const Term t(std::vector<Term>{Term(std::vector<Term>{Term(0), Term(1)}), Term(std::vector<Term>{Term(2)})});
  const Term want(std::vector<Term>{Term(std::vector<Term>{Term(1), Term(4)}),
                                    Term(std::vector<Term>{Term(7)})});
  CHECK(lift_term(f, t) == want);
}

TEST_CASE("lifting is functorial on nested terms") {
  const MorphismOracle::MapFn f = [](Elem n) { return n ^ 5; };
  const MorphismOracle::MapFn g = [](Elem n) { return n + 2; };
  const MorphismOracle::MapFn fg = [&](Elem n) { return f(g(n)); };
  for (Elem a = 0; a < 4; ++a) {
    for (Elem b = 0; b < 4; ++b) {
      const Term t(std::vector<Term>{Term(std::vector<Term>{Term(a), Term(b)}), Term(a + b)});
      CHECK(lift_term(f, lift_term(g, t)) == lift_term(fg, t));
    }
  }
}

TEST_CASE("canonical order agrees with a sorted brute-force listing") {
  const auto want = oracle::canonical_prefix(7);
  TupleEnumerator e;
  for (const Tuple& t : want) CHECK(e.next() == t);
}

TEST_CASE("canonical_less is a strict order matching the oracle") {
  const auto all = oracle::canonical_prefix(6);
  for (std::size_t i = 0; i < all.size(); i += 7) {
    for (std::size_t j = 0; j < all.size(); j += 5) {
      CHECK(canonical_less(all[i], all[j]) == (i < j));
    }
  }
}

TEST_CASE("pair_codes enumerates exactly the well-formed codes in canonical order") {
  std::vector<Tuple> want;
  for (const Tuple& t : oracle::canonical_prefix(11)) {
    if (t.empty()) continue;
    const Elem m = t[0];
    std::size_t end = t.size();
    while (end > 1 && t[end - 1] == m) --end;
    std::set<Elem> seen;
    bool ok = true;
    for (std::size_t i = 1; i < end; ++i) ok = ok && t[i] != m && seen.insert(t[i]).second;
    if (ok) want.push_back(t);
  }
  auto e = TupleEnumerator::pair_codes();
  for (const Tuple& t : want) CHECK(e.next() == t);
}

TEST_CASE("length filter skips lengths") {
  TupleEnumerator e([](std::size_t n) { return n == 2; });
  for (int k = 0; k < 50; ++k) CHECK(e.next().size() == 2);
}

TEST_CASE("text records round trip") {
  const Signature sig({2, 1, 3});
  CHECK(parse_signature(to_text(sig)) == sig);
  const auto frag = fragment_of(linear_order(), Tuple{3, 1, 4});
  CHECK(parse_fragment(to_text(frag)) == frag);
  const auto empty = fragment_of(pure_set(), Tuple{3});
  CHECK(parse_fragment(to_text(empty)) == empty);
  const FinMap m({{0, 4}, {2, 1}, {4, 0}});
  CHECK(parse_finmap(to_text(m)) == m);
  CHECK_THROWS_AS(parse_fragment("fragment 2 0101x", 9), ParseError);
  try {
    parse_finmap("finmap 1:2 3", 7);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
  }
}

TEST_CASE("signatures") {
  const Signature s({2, 1});
  CHECK(s.arity(1) == 1);
  CHECK_THROWS_AS(s.arity(2), ArgumentError);
  CHECK(s.relations_below(1) == 1);
  const auto u = Signature::unbounded([](std::size_t i) { return i % 3 + 1; });
  CHECK_FALSE(u.relation_count().has_value());
  CHECK(u.arity(5) == 3);
  CHECK(u.relations_below(4) == 4);
}
