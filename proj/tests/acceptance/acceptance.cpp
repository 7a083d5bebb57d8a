// Acceptance gate: one PASS/FAIL line per criterion, each checked against
// brute-force oracles and a wall-clock limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "effint/biinterp.hpp"
#include "effint/collapse.hpp"
#include "effint/errors.hpp"
#include "effint/gallery.hpp"
#include "effint/stock.hpp"
#include "effint/suite.hpp"
#include "effint/transforms.hpp"
#include "oracles.hpp"

using namespace effint;

namespace {

const BudgetProfile kProfile = default_profile();
const std::uint64_t kFuel = kProfile.fuel;
const EquivBudget kEquiv{12, kFuel, true};
const RelBudget kRel{64, kFuel, kEquiv, true};
const TupleBound kPoints{3, 4};
constexpr Elem kIndices = 5;

struct Finding {
  bool ok = true;
  std::string detail;
};

struct Check {
  int id;
  std::string name;
  double limit_s;  // 0: no limit
  std::function<Finding()> body;
};

bool injective(const Tuple& b) { return std::set<Elem>(b.begin(), b.end()).size() == b.size(); }

/// A functor over the pure set together with what the oracles know of it.
struct Subject {
  std::string name;
  CompFunctor F;
  // Collapse of the underlying interpretation; empty for the constant functor.
  std::optional<oracle::Collapse> collapse;
};

Subject scheme_subject(const std::string& item, const oracle::Denote& denote, std::size_t len) {
  return {item, *gallery_item(item).functor, oracle::brute_collapse(denote, len, 40)};
}

Subject identity_subject() { return scheme_subject("identity-pure-set", oracle::identity_denote, 2); }
Subject pairs_subject() { return scheme_subject("pairs-intersect", oracle::pairs_denote, 3); }
Subject constant_subject() { return {"constant", *gallery_item("constant").functor, std::nullopt}; }

/// Oracle for the domain: b injective and the class-i representative
/// mentions only positions below |b|. The constant functor reads nothing.
bool expect_in(const Subject& s, const Tuple& b, Elem i) {
  if (!injective(b)) return false;
  if (!s.collapse) return true;
  for (Elem e : s.collapse->reps.at(i)) {
    if (e >= b.size()) return false;
  }
  return true;
}

/// Point of F(pure set) named by (b, i).
std::size_t expect_index(const Subject& s, const DomPoint& p) {
  if (!s.collapse) return p.i;
  std::set<Elem> named;
  for (Elem e : s.collapse->names.at(p.i)) named.insert(p.b.at(e));
  return *s.collapse->index_of(named);
}

std::vector<DomPoint> in_points(const Subject& s) {
  std::vector<DomPoint> out;
  for (const Tuple& b : tuples_within(kPoints)) {
    for (Elem i = 0; i < kIndices; ++i) {
      if (auto p = certify(s.F, pure_set(), b, i, kFuel)) out.push_back(*p);
    }
  }
  return out;
}

std::string pt(const DomPoint& p) { return "(" + to_string(p.b) + ";" + std::to_string(p.i) + ")"; }

// --- 1 ----------------------------------------------------------------------

Finding dom_dichotomy() {
  std::size_t total = 0, in = 0;
  for (const auto& s : {identity_subject(), pairs_subject()}) {
    for (const Tuple& b : tuples_within(kPoints)) {
      for (Elem i = 0; i < kIndices; ++i) {
        ++total;
        const auto v = dom_contains(s.F, pure_set(), b, i, kFuel).verdict;
        const DomPoint p{b, i};
        if (v == Verdict::Unknown) return {false, s.name + " unknown at " + pt(p)};
        if ((v == Verdict::In) != expect_in(s, b, i)) {
          return {false, s.name + " misclassified " + pt(p) + " as " + to_string(v)};
        }
        in += v == Verdict::In;
      }
    }
  }
  return {true, "points=" + std::to_string(total) + " in=" + std::to_string(in) + " unknown=0 mismatches=0"};
}

// --- 2 ----------------------------------------------------------------------

Finding equivalence_laws() {
  std::size_t pairs = 0;
  for (const auto& s : {identity_subject(), pairs_subject()}) {
    const auto pts = in_points(s);
    const std::size_t n = pts.size();
    std::vector<std::vector<bool>> eq(n, std::vector<bool>(n));
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        const auto v = equiv_decide(s.F, pts[p], pts[q], pure_set(), kEquiv).verdict;
        if (v == EquivVerdict::Unknown) return {false, s.name + " undecided " + pt(pts[p]) + "~" + pt(pts[q])};
        eq[p][q] = v == EquivVerdict::Equivalent;
        if (eq[p][q] != (expect_index(s, pts[p]) == expect_index(s, pts[q]))) {
          return {false, s.name + " oracle disagrees at " + pt(pts[p]) + "~" + pt(pts[q])};
        }
        ++pairs;
      }
    }
    for (std::size_t p = 0; p < n; ++p) {
      if (!eq[p][p]) return {false, s.name + " reflexivity " + pt(pts[p])};
      for (std::size_t q = 0; q < n; ++q) {
        if (eq[p][q] != eq[q][p]) return {false, s.name + " symmetry " + pt(pts[p]) + "," + pt(pts[q])};
        if (!eq[p][q]) continue;
        for (std::size_t r = 0; r < n; ++r) {
          if (eq[q][r] && !eq[p][r]) return {false, s.name + " transitivity at " + pt(pts[p])};
        }
      }
    }
  }
  return {true, "decided-pairs=" + std::to_string(pairs) + " violations=0"};
}

// --- 3 ----------------------------------------------------------------------

Finding rq_partition() {
  const auto s = pairs_subject();
  const auto pts = in_points(s);
  std::size_t r_count = 0, q_count = 0;
  std::map<std::pair<std::size_t, std::size_t>, Verdict> by_class;
  for (const auto& x : pts) {
    for (const auto& y : pts) {
      RelResult res;
      try {
        res = rel_decide(s.F, 0, {x, y}, pure_set(), kRel);
      } catch (const FunctorBroken& e) {
        return {false, "R and Q overlap at " + pt(x) + "," + pt(y)};
      }
      if (res.verdict == Verdict::Unknown) return {false, "uncovered " + pt(x) + "," + pt(y)};
      const auto cx = expect_index(s, x), cy = expect_index(s, y);
      const bool want = oracle::meet_once(s.collapse->names[cx], s.collapse->names[cy]);
      if ((res.verdict == Verdict::In) != want) return {false, "oracle disagrees at " + pt(x) + "," + pt(y)};
      auto [it, fresh] = by_class.emplace(std::pair{cx, cy}, res.verdict);
      if (!fresh && it->second != res.verdict) return {false, "congruence " + pt(x) + "," + pt(y)};
      (res.verdict == Verdict::In ? r_count : q_count) += 1;
    }
  }
  return {true, "points=" + std::to_string(pts.size()) + " R=" + std::to_string(r_count) +
                    " Q=" + std::to_string(q_count) + " overlap=0 uncovered=0"};
}

// --- 4 ----------------------------------------------------------------------

Finding canonicity() {
  constexpr Elem kEmbed = 20;
  constexpr Elem kTransport = 6;
  std::size_t checked = 0;
  for (const auto& s : {constant_subject(), identity_subject(), pairs_subject()}) {
    std::vector<DomPoint> emb;
    for (Elem i = 0; i < kEmbed; ++i) emb.push_back(canonical_embed(s.F, pure_set(), i, kFuel));
    for (Elem i = 0; i < kEmbed; ++i) {
      if (expect_index(s, emb[i]) != i) return {false, s.name + " embedding of " + std::to_string(i) + " names another point"};
      for (Elem j = i + 1; j < kEmbed; ++j) {
        if (equiv_decide(s.F, emb[i], emb[j], pure_set(), kEquiv).verdict != EquivVerdict::Inequivalent) {
          return {false, s.name + " not injective at " + std::to_string(i) + "," + std::to_string(j)};
        }
      }
    }
    for (const auto& p : in_points(s)) {
      std::size_t hits = 0;
      for (const auto& e : emb) hits += equiv_decide(s.F, p, e, pure_set(), kEquiv).verdict == EquivVerdict::Equivalent;
      const bool below = expect_index(s, p) < kEmbed;
      if (hits != (below ? 1u : 0u)) return {false, s.name + " class of " + pt(p) + " has " + std::to_string(hits) + " images"};
      ++checked;
    }
    const auto rels = s.F.target.relation_count().value_or(0);
    for (std::size_t r = 0; r < rels; ++r) {
      for (Elem x = 0; x < kTransport; ++x) {
        for (Elem y = 0; y < kTransport; ++y) {
          const auto res = rel_decide(s.F, r, {emb[x], emb[y]}, pure_set(), kRel);
          const bool want = s.collapse ? oracle::meet_once(s.collapse->names[x], s.collapse->names[y]) : x < y;
          if (res.verdict != (want ? Verdict::In : Verdict::Out)) {
            return {false, s.name + " transport mismatch at " + std::to_string(x) + "," + std::to_string(y)};
          }
        }
      }
    }
  }
  return {true, "functors=3 embeds=20 classes-checked=" + std::to_string(checked) + " transport=6x6"};
}

// --- 5 ----------------------------------------------------------------------

/// Permutations of {0..3} moving at most three points.
std::vector<FinMap> small_support() {
  std::vector<FinMap> out;
  for (const auto& p : permutations_of_prefix(4)) {
    std::size_t moved = 0;
    for (const auto& [a, b] : p.pairs()) moved += a != b;
    if (moved <= 3) out.push_back(p);
  }
  return out;
}

Finding functor_laws() {
  const auto perms = small_support();
  std::vector<MorphismPair> samples;
  for (const auto& f : perms) {
    for (const auto& g : perms) samples.push_back({f, g});
  }
  std::size_t points = 0, functors = 0;
  std::vector<std::pair<std::string, CompFunctor>> subjects;
  for (const auto& s : {constant_subject(), identity_subject(), pairs_subject()}) {
    subjects.emplace_back(s.name, s.F);
    LambdaEvaluator L(s.F);
    subjects.emplace_back(s.name + "/round-trip", L.round_trip());
  }
  for (const auto& [name, F] : subjects) {
    const auto r = check_functor_laws(F, pure_set(), samples, 20, kFuel);
    if (!r.ok()) {
      const std::string what = r.violations.empty() ? "fuel" : r.violations.front().law + "@" + std::to_string(r.violations.front().point);
      return {false, name + " " + what};
    }
    points += r.points_checked;
    ++functors;
  }
  return {true, "functors=" + std::to_string(functors) + " perms=" + std::to_string(perms.size()) +
                    " pairs=" + std::to_string(samples.size()) + " points=" + std::to_string(points) + " violations=0"};
}

// --- 6 ----------------------------------------------------------------------

Finding naturality() {
  const auto autos = gallery_item("pairs-intersect").automorphisms;
  const std::vector<FinMap> pulls{FinMap{}, autos[1], autos[4]};
  std::vector<Presentation> copies;
  for (const auto& p : pulls) copies.push_back(pull_back(pure_set(), MorphismOracle::from_permutation(p)));
  std::size_t squares = 0;
  for (const auto& s : {constant_subject(), identity_subject(), pairs_subject()}) {
    LambdaEvaluator L(s.F);
    for (std::size_t k = 0; k < 10; ++k) {
      const std::size_t a = k % 3, b = (k + 1 + k / 3) % 3;
      const auto sigma = MorphismOracle::from_permutation(autos[k % autos.size()]);
      const auto pa = MorphismOracle::from_permutation(pulls[a]);
      const auto pb = MorphismOracle::from_permutation(pulls[b]);
      const auto h = pb.inverse().after(sigma.after(pa));
      const auto r = check_natural_square(L, copies[a], copies[b], h, 12, kFuel);
      if (!r.ok()) {
        return {false, s.name + " morphism " + std::to_string(k) +
                           (r.mismatches.empty() ? " fuel" : " point " + std::to_string(r.mismatches.front().point))};
      }
      ++squares;
    }
  }
  return {true, "functors=3 squares=" + std::to_string(squares) + " prefix=12 mismatches=0"};
}

// --- 7, 8 --------------------------------------------------------------------

std::vector<Presentation> bi_copies(const std::vector<FinMap>& autos) {
  return {pure_set(), pull_back(pure_set(), MorphismOracle::from_permutation(autos[1])),
          pull_back(pure_set(), MorphismOracle::from_permutation(autos[4]))};
}

Finding bitransform() {
  const auto item = gallery_item("identity-biinterp");
  const auto& d = *item.biinterp;
  const auto t = biinterp_to_bitransform(d);
  const auto copies = bi_copies(item.automorphisms);
  const auto p = check_pseudo_inverse(t, copies, copies, 10, kFuel);
  if (!p.ok()) return {false, "pseudo-inverse " + (p.failures.empty() ? std::string("fuel") : p.failures.front().check)};
  const auto a = check_effective_iso_identity(t.F, t.G, t.lambdaA, copies, item.automorphisms, 10, kFuel);
  const auto b = check_effective_iso_identity(t.G, t.F, t.lambdaB, copies, item.automorphisms, 10, kFuel);
  if (!a.ok()) return {false, "effective-iso-A"};
  if (!b.ok()) return {false, "effective-iso-B"};
  const auto broken = check_effective_iso_identity(t.F, t.G, twist_output(t.lambdaA, 0, 1), copies,
                                                   item.automorphisms, 10, kFuel);
  if (broken.failures.empty()) return {false, "broken lambda not detected"};
  const auto& w = broken.failures.front();
  return {true, "points=" + std::to_string(p.points_checked + a.points_checked + b.points_checked) +
                    " failures=0 broken-detected=" + w.check + "@sample" + std::to_string(w.sample) +
                    ":point" + std::to_string(w.point)};
}

Finding char_invariance() {
  const auto item = gallery_item("identity-biinterp");
  std::set<std::string> names;
  std::size_t points = 0;
  for (const auto& pi : item.automorphisms) {
    const auto alpha = after_permutation(decode_map(1), pi);
    names.insert(alpha.name);
    const auto r = check_char_conditions(*item.biinterp, alpha, decode_map(1), 10, kFuel);
    if (!r.ok()) return {false, alpha.name + (r.failures.empty() ? " fuel" : " " + r.failures.front().check)};
    points += r.points_checked;
  }
  if (names.size() < 5) return {false, "fewer than 5 distinct alphas"};
  return {true, "alphas=" + std::to_string(names.size()) + " points=" + std::to_string(points) + " failures=0"};
}

// --- 9 ----------------------------------------------------------------------

Finding uniformity() {
  constexpr Elem kPrefix = 15;
  struct U {
    std::string name;
    CompFunctor F;
    Presentation base;
    std::vector<FinMap> pulls;
  };
  const FinMap p1({{0, 2}, {2, 5}, {5, 0}}), p2({{1, 4}, {4, 1}, {0, 3}, {3, 0}});
  std::vector<U> subjects;
  for (const auto& s : {constant_subject(), identity_subject(), pairs_subject()}) {
    LambdaEvaluator L(s.F);
    subjects.push_back({s.name + "/round-trip", L.round_trip(), pure_set(), {p1, p2}});
  }
  subjects.push_back({"identity-order", interp_to_functor(identity_scheme(Signature({2}))), linear_order(), {p1, p2}});
  std::size_t facts = 0;
  for (const auto& u : subjects) {
    const auto m1 = MorphismOracle::from_permutation(u.pulls[0]);
    const auto m2 = MorphismOracle::from_permutation(u.pulls[1]);
    const auto X = pull_back(u.base, m1);
    const auto Y = pull_back(u.base, m2);
    const auto h = m2.inverse().after(m1);  // X -> Y
    const auto FX = apply_to_presentation(u.F, X, kFuel);
    const auto FY = apply_to_presentation(u.F, Y, kFuel);
    const auto Fh = apply_to_morphism(u.F, X, h, Y, kFuel);
    std::vector<Elem> img;
    std::set<Elem> seen;
    for (Elem i = 0; i < kPrefix; ++i) {
      img.push_back(Fh.forward(i));
      seen.insert(img.back());
      if (Fh.backward(img.back()) != i) return {false, u.name + " F(h) not invertible at " + std::to_string(i)};
    }
    if (seen.size() != kPrefix) return {false, u.name + " F(h) not injective"};
    const auto rels = u.F.target.relation_count().value_or(0);
    for (std::size_t r = 0; r < rels; ++r) {
      for (Elem x = 0; x < kPrefix; ++x) {
        for (Elem y = 0; y < kPrefix; ++y) {
          if (FX.holds(r, {x, y}) != FY.holds(r, {img[x], img[y]})) {
            return {false, u.name + " fact (" + std::to_string(x) + "," + std::to_string(y) + ") not transported"};
          }
          ++facts;
        }
      }
    }
  }
  return {true, "functors=" + std::to_string(subjects.size()) + " prefix=15 facts=" + std::to_string(facts) + " mismatches=0"};
}

// --- 10 ---------------------------------------------------------------------

Finding determinism() {
  std::size_t lines = 0;
  for (const auto& name : gallery_list()) {
    const auto a = run_suite(name, kProfile);
    const auto b = run_suite(name, kProfile);
    if (a.report() != b.report() || a.exit_code != b.exit_code) return {false, name + " reports differ"};
    if (a.exit_code != 0) return {false, name + " exit " + std::to_string(a.exit_code)};
    lines += a.results.size();
  }
  return {true, "items=" + std::to_string(gallery_list().size()) + " lines=" + std::to_string(lines) + " identical"};
}

}  // namespace

int main() {
  const std::vector<Check> checks = {
      {1, "dom-dichotomy", 30, dom_dichotomy},
      {2, "equivalence-laws", 60, equivalence_laws},
      {3, "rq-partition", 60, rq_partition},
      {4, "canonical-embedding", 30, canonicity},
      {5, "functor-laws", 60, functor_laws},
      {6, "round-trip-naturality", 120, naturality},
      {7, "bi-transformability", 60, bitransform},
      {8, "char-condition-invariance", 30, char_invariance},
      {9, "uniformity", 30, uniformity},
      {10, "determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : checks) {
    const auto start = std::chrono::steady_clock::now();
    Finding o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.ok = false;
      o.detail += " (over time limit)";
    }
    char timing[64];
    if (c.limit_s > 0) {
      std::snprintf(timing, sizeof timing, "%.2fs/%.0fs", secs, c.limit_s);
    } else {
      std::snprintf(timing, sizeof timing, "%.2fs", secs);
    }
    std::printf("%s criterion-%d %s %s [%s]\n", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), timing);
    std::fflush(stdout);
    failed += !o.ok;
  }
  return failed == 0 ? 0 : 1;
}
