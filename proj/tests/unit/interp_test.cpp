#include <algorithm>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "effint/errors.hpp"
#include "effint/interp.hpp"
#include "effint/scheme_io.hpp"
#include "effint/stock.hpp"
#include "oracles.hpp"

using namespace effint;

namespace {

ExistentialCondition between_condition() {
  ExistentialCondition c;
  c.shape = {2};
  c.witness_count = 1;
  c.literals = {Literal::relation(0, {0, 2}), Literal::relation(0, {2, 1})};
  return c;
}

std::vector<Tuple> members_below(const oracle::Denote& denote, std::size_t len, Elem bound) {
  std::vector<Tuple> out;
  for (const Tuple& t : tuples_within({len, bound})) {
    if (denote(t)) out.push_back(t);
  }
  return out;
}

const DeltaBudget kBudget{24, 1u << 22};

}  // namespace

TEST_CASE("sat_condition") {
  ExistentialCondition empty;
  empty.shape = {2};
  CHECK(sat_condition(linear_order(), empty, Tuple{4, 1}, 0));
  const auto c = between_condition();
  CHECK(sat_condition(linear_order(), c, Tuple{1, 3}, 10));
  for (std::size_t bound = 0; bound < 20; ++bound) {
    CHECK_FALSE(sat_condition(linear_order(), c, Tuple{1, 2}, bound));
  }
  // Witness 2 is the only one between 1 and 3.
  CHECK_FALSE(sat_condition(linear_order(), c, Tuple{1, 3}, 2));
  CHECK(sat_condition(linear_order(), c, Tuple{1, 3}, 3));
}

TEST_CASE("identity domain decisions") {
  const auto s = identity_scheme(Signature::empty());
  const PresentationOracle o(pure_set());
  CHECK(decide_delta(o, s.dom, {encode_pair(Tuple{5}, 0)}, kBudget).verdict == Verdict::In);
  CHECK(decide_delta(o, s.dom, {Tuple{5, 5}}, kBudget).verdict == Verdict::Out);
  CHECK(decide_delta(o, s.dom, {Tuple{6, 5, 6}}, kBudget).verdict == Verdict::Out);
  CHECK(decide_delta(o, s.dom, {Tuple{}}, kBudget).verdict == Verdict::Out);
}

TEST_CASE("pairs equivalence identifies reordered codes") {
  const auto s = pairs_intersect_scheme();
  const PresentationOracle o(pure_set());
  CHECK(decide_delta(o, s.equiv, {Tuple{0, 2, 5}, Tuple{0, 5, 2}}, kBudget).verdict == Verdict::In);
  CHECK(decide_delta(o, s.equiv, {Tuple{0, 2, 5}, Tuple{1, 2, 5}}, kBudget).verdict == Verdict::In);
  CHECK(decide_delta(o, s.equiv, {Tuple{0, 2, 5}, Tuple{0, 2, 4}}, kBudget).verdict == Verdict::Out);
}

TEST_CASE("pairs equivalence matches set equality exhaustively") {
  const auto s = pairs_intersect_scheme();
  const PresentationOracle o(pure_set());
  const auto m = members_below(oracle::pairs_denote, 3, 6);
  REQUIRE(m.size() == 120);
  std::vector<std::vector<bool>> eq(m.size(), std::vector<bool>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      const auto v = decide_delta(o, s.equiv, {m[i], m[j]}, kBudget).verdict;
      REQUIRE(v != Verdict::Unknown);
      eq[i][j] = v == Verdict::In;
      CHECK(eq[i][j] == (oracle::pairs_denote(m[i]) == oracle::pairs_denote(m[j])));
    }
  }
  std::size_t violations = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    violations += !eq[i][i];
    for (std::size_t j = 0; j < m.size(); ++j) {
      violations += eq[i][j] != eq[j][i];
      if (!eq[i][j]) continue;
      for (std::size_t k = 0; k < m.size(); ++k) violations += eq[j][k] && !eq[i][k];
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("pairs relation is the share-one-element relation and congruent") {
  const auto s = pairs_intersect_scheme();
  const PresentationOracle o(pure_set());
  const auto m = members_below(oracle::pairs_denote, 3, 5);
  for (const Tuple& x : m) {
    for (const Tuple& y : m) {
      const auto v = decide_delta(o, s.relations[0], {x, y}, kBudget).verdict;
      REQUIRE(v != Verdict::Unknown);
      CHECK((v == Verdict::In) ==
            oracle::meet_once(*oracle::pairs_denote(x), *oracle::pairs_denote(y)));
    }
  }
}

TEST_CASE("stock schemes partition their inputs") {
  for (const auto& s : {identity_scheme(Signature::empty()), identity_scheme(Signature({2})),
                        pairs_intersect_scheme()}) {
    CAPTURE(s.name);
    const Presentation base = s.source == Signature::empty() ? pure_set() : linear_order();
    const PresentationOracle o(base);
    std::size_t unknown = 0;
    for (const Tuple& t : tuples_within({4, 4})) {
      unknown += decide_delta(o, s.dom, {t}, kBudget).verdict == Verdict::Unknown;
    }
    CHECK(unknown == 0);
  }
}

TEST_CASE("identity relation on (omega,<) follows the named elements") {
  const auto s = identity_scheme(Signature({2}));
  const PresentationOracle o(linear_order());
  for (Elem x = 0; x < 5; ++x) {
    for (Elem y = 0; y < 5; ++y) {
      const auto v = decide_delta(o, s.relations[0], {encode_pair(Tuple{x}, 0), encode_pair(Tuple{y}, 0)}, kBudget);
      CHECK((v.verdict == Verdict::In) == (x < y));
    }
  }
}

TEST_CASE("larger budgets only refine unknown verdicts") {
  const auto s = pairs_intersect_scheme();
  const PresentationOracle o(pure_set());
  for (const Tuple& t : tuples_within({3, 4})) {
    Verdict seen = Verdict::Unknown;
    for (std::size_t rounds = 0; rounds < 8; ++rounds) {
      const auto v = decide_delta(o, s.dom, {t}, DeltaBudget{rounds + 1, 1u << 20}).verdict;
      if (seen != Verdict::Unknown) CHECK(v == seen);
      if (v != Verdict::Unknown) seen = v;
    }
    CHECK(seen != Verdict::Unknown);
  }
}

TEST_CASE("a scheme firing on both sides is unsound") {
  ExistentialCondition any;
  any.wildcard = true;
  DeltaScheme d{SigmaScheme::listed({any}), SigmaScheme::listed({any})};
  CHECK_THROWS_AS(decide_delta(pure_set(), d, {Tuple{1}}, kBudget), SchemeUnsound);
}

TEST_CASE("enumerate_members of the identity domain") {
  const auto s = identity_scheme(Signature::empty());
  const auto got = enumerate_members(pure_set(), s.dom, {2, 3}, kBudget);
  auto want = members_below(oracle::identity_denote, 2, 3);
  std::sort(want.begin(), want.end(), oracle::canonical_before);
  CHECK(got.unknown.empty());
  CHECK(got.members == want);
  CHECK(want.size() == 6);
  CHECK(enumerate_members(pure_set(), s.dom, {2, 3}, kBudget).members == got.members);
}

TEST_CASE("an empty positive side enumerates nothing") {
  ExistentialCondition any;
  any.wildcard = true;
  DeltaScheme d{SigmaScheme::listed({}), SigmaScheme::listed({any})};
  CHECK(enumerate_members(pure_set(), d, {3, 4}, kBudget).members.empty());
}

TEST_CASE("tuples_within is canonical and complete") {
  const auto got = tuples_within({3, 4});
  CHECK(got.size() == 1 + 4 + 16 + 64);
  CHECK(std::is_sorted(got.begin(), got.end(), oracle::canonical_before));
}

TEST_CASE("conditions are validated against the signature") {
  auto c = between_condition();
  CHECK_NOTHROW(c.validate(Signature({2})));
  CHECK_THROWS_AS(c.validate(Signature::empty()), ArgumentError);
  c.literals.push_back(Literal::eq(0, 3));
  CHECK_THROWS_AS(c.validate(Signature({2})), ArgumentError);
}

TEST_CASE("scheme text round trips") {
  for (const auto& s : {identity_scheme(Signature::empty()), identity_scheme(Signature({2, 1})),
                        pairs_intersect_scheme()}) {
    CAPTURE(s.name);
    const auto text = scheme_to_text(s);
    CHECK(scheme_from_text(text) == s);
    CHECK(scheme_to_text(scheme_from_text(text)) == text);
  }
}

TEST_CASE("scheme files save and load") {
  const auto path = std::filesystem::temp_directory_path() / "effint_interp_test.scheme";
  const auto s = pairs_intersect_scheme();
  save_scheme(s, path.string());
  CHECK(load_scheme(path.string()) == s);
  std::filesystem::remove(path);
}

TEST_CASE("a malformed literal names its line") {
  auto text = scheme_to_text(identity_scheme(Signature::empty()));
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  std::size_t target = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].rfind("dom pos", 0) == 0) target = i;
  }
  REQUIRE(target > 0);
  lines[target] += " | + rel x 0";
  std::string broken;
  for (const auto& l : lines) broken += l + "\n";
  try {
    scheme_from_text(broken);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == target + 1);
  }
  CHECK_THROWS_AS(scheme_from_text("interp-scheme v2\n"), ParseError);
}
