#include "effint/suite.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "effint/biinterp.hpp"
#include "effint/errors.hpp"
#include "effint/text_io.hpp"

namespace effint {

BudgetProfile quick_profile() {
  BudgetProfile p;
  p.name = "quick";
  p.fuel = std::uint64_t{1} << 20;
  p.points = {2, 3};
  p.max_index = 3;
  p.embed_prefix = 8;
  p.transport_classes = 4;
  p.law_prefix = 8;
  p.law_span = 3;
  p.copies = 2;
  p.square_prefix = 6;
  p.square_morphisms = 4;
  p.bi_prefix = 5;
  p.char_alphas = 2;
  p.uniform_prefix = 6;
  return p;
}

BudgetProfile default_profile() {
  BudgetProfile p;
  p.name = "default";
  return p;
}

BudgetProfile deep_profile() {
  BudgetProfile p;
  p.name = "deep";
  p.fuel = std::uint64_t{1} << 24;
  p.points = {3, 5};
  p.max_index = 6;
  p.embed_prefix = 30;
  p.transport_classes = 8;
  // The identity round trip needs more than 1<<24 fuel at point 29.
  p.law_prefix = 26;
  p.law_span = 5;
  p.copies = 4;
  p.square_prefix = 16;
  p.square_morphisms = 16;
  p.bi_prefix = 16;
  p.char_alphas = 8;
  p.uniform_prefix = 20;
  return p;
}

std::optional<BudgetProfile> budget_profile(std::string_view name) {
  if (name == "quick") return quick_profile();
  if (name == "default") return default_profile();
  if (name == "deep") return deep_profile();
  return std::nullopt;
}

std::string to_string(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::Pass: return "PASS";
    case SuiteStatus::Fail: return "FAIL";
    case SuiteStatus::Unknown: return "UNKNOWN";
  }
  return "?";
}

std::string SuiteResult::line() const {
  std::string out = to_string(status) + " " + suite;
  if (!witness.empty()) out += " " + witness;
  return out;
}

std::string SuiteRun::report() const {
  std::string out;
  for (const auto& r : results) out += r.line() + "\n";
  return out;
}

std::optional<SuiteResult> SuiteRun::first_problem() const {
  for (const auto& r : results) {
    if (r.status == SuiteStatus::Fail) return r;
  }
  for (const auto& r : results) {
    if (r.status == SuiteStatus::Unknown) return r;
  }
  return std::nullopt;
}

int exit_code_for(const std::vector<SuiteResult>& results) {
  bool unknown = false;
  for (const auto& r : results) {
    if (r.status == SuiteStatus::Fail) return 1;
    if (r.status == SuiteStatus::Unknown) unknown = true;
  }
  return unknown ? 2 : 0;
}

namespace {

using Suite = SuiteResult;

Suite pass(std::string name, std::string w) { return {std::move(name), SuiteStatus::Pass, std::move(w)}; }
Suite fail(std::string name, std::string w) { return {std::move(name), SuiteStatus::Fail, std::move(w)}; }
Suite unknown(std::string name, std::string w) {
  return {std::move(name), SuiteStatus::Unknown, std::move(w)};
}

std::string kv(const std::string& k, std::size_t v) { return k + "=" + std::to_string(v); }

std::string point_text(const DomPoint& p) { return "(" + to_string(p.b) + ";" + std::to_string(p.i) + ")"; }

std::string no_spaces(std::string s) {
  for (char& c : s) {
    if (c == ' ') c = '_';
  }
  return s;
}

/// Lazily computed facts shared between the suites of one item.
class Context {
 public:
  Context(const GalleryItem& item, const BudgetProfile& profile) : item_(item), profile_(profile) {
    auto autos = item.automorphisms;
    std::vector<FinMap> pulls{FinMap{}};
    pulls.insert(pulls.end(), autos.begin(), autos.end());
    for (std::size_t k = 0; k < profile.copies; ++k) {
      const FinMap& c = pulls[k % pulls.size()];
      pulls_.push_back(c);
      copies_.push_back(pull_back(item.base, MorphismOracle::from_permutation(c)));
    }
  }

  const GalleryItem& item() const { return item_; }
  const BudgetProfile& profile() const { return profile_; }
  const CompFunctor& functor() const { return *item_.functor; }
  const Presentation& base() const { return item_.base; }
  const std::vector<Presentation>& copies() const { return copies_; }

  EquivBudget equiv_budget() const { return {12, profile_.fuel, true}; }
  RelBudget rel_budget() const { return {64, profile_.fuel, equiv_budget(), true}; }

  /// Isomorphism copies[a] -> copies[b] through the base automorphism sigma.
  MorphismOracle between(std::size_t a, std::size_t b, const FinMap& sigma) const {
    const auto pa = MorphismOracle::from_permutation(pulls_[a]);
    const auto pb = MorphismOracle::from_permutation(pulls_[b]);
    return pb.inverse().after(MorphismOracle::from_permutation(sigma).after(pa));
  }

  struct DomScan {
    std::size_t total = 0;
    std::vector<DomPoint> in;
    std::vector<DomPoint> unknown;
  };
  const DomScan& dom_scan() {
    if (!dom_) {
      dom_ = std::make_unique<DomScan>();
      for (const Tuple& b : tuples_within(profile_.points)) {
        for (Elem i = 0; i < profile_.max_index; ++i) {
          ++dom_->total;
          auto d = dom_contains(functor(), base(), b, i, profile_.fuel);
          if (d.verdict == Verdict::In) dom_->in.push_back({b, i, d.outcome.fuel_used});
          if (d.verdict == Verdict::Unknown) dom_->unknown.push_back({b, i, 0});
        }
      }
    }
    return *dom_;
  }

  /// Pairwise equivalence verdicts on the In points of the scan.
  struct EquivMatrix {
    std::vector<std::vector<EquivVerdict>> v;
    /// Least equivalent index per point (valid when complete).
    std::vector<std::size_t> cls;
    bool complete = true;
    std::string broken;
  };
  const EquivMatrix& equiv_matrix() {
    if (!equiv_) {
      equiv_ = std::make_unique<EquivMatrix>();
      const auto& in = dom_scan().in;
      const std::size_t n = in.size();
      equiv_->v.assign(n, std::vector<EquivVerdict>(n, EquivVerdict::Unknown));
      try {
        for (std::size_t p = 0; p < n; ++p) {
          for (std::size_t q = 0; q < n; ++q) {
            auto r = equiv_decide(functor(), in[p], in[q], base(), equiv_budget());
            equiv_->v[p][q] = r.verdict;
            if (r.verdict == EquivVerdict::Unknown) equiv_->complete = false;
          }
        }
      } catch (const FunctorBroken& e) {
        equiv_->broken = e.what();
        equiv_->complete = false;
      }
      equiv_->cls.resize(n);
      for (std::size_t p = 0; p < n; ++p) {
        equiv_->cls[p] = p;
        for (std::size_t q = 0; q < p; ++q) {
          if (equiv_->v[p][q] == EquivVerdict::Equivalent) {
            equiv_->cls[p] = equiv_->cls[q];
            break;
          }
        }
      }
    }
    return *equiv_;
  }

  LambdaEvaluator& lambda() {
    if (!lambda_) lambda_ = std::make_unique<LambdaEvaluator>(functor());
    return *lambda_;
  }

  const BiTransformData& bitransform() {
    if (!bi_) bi_ = std::make_unique<BiTransformData>(biinterp_to_bitransform(*item_.biinterp));
    return *bi_;
  }
  std::vector<Presentation> copies_of(const Presentation& base) const {
    std::vector<Presentation> out;
    for (const FinMap& c : pulls_) out.push_back(pull_back(base, MorphismOracle::from_permutation(c)));
    return out;
  }

 private:
  const GalleryItem& item_;
  const BudgetProfile& profile_;
  std::vector<FinMap> pulls_;
  std::vector<Presentation> copies_;
  std::unique_ptr<DomScan> dom_;
  std::unique_ptr<EquivMatrix> equiv_;
  std::unique_ptr<LambdaEvaluator> lambda_;
  std::unique_ptr<BiTransformData> bi_;
};

// --- scheme soundness --------------------------------------------------------

Suite scheme_soundness(Context& ctx) {
  const std::string name = "scheme-soundness";
  const InterpScheme& s = *ctx.item().scheme;
  const PresentationOracle oracle(ctx.base());
  const DeltaBudget budget{24, std::uint64_t{1} << 22};
  std::size_t decided = 0;
  try {
    s.validate();
    auto members = enumerate_members(oracle, s.dom, ctx.profile().points, budget);
    decided += tuples_within(ctx.profile().points).size();
    if (!members.unknown.empty()) {
      return unknown(name, "dom-undecided=" + to_string(members.unknown.front()));
    }
    const auto& m = members.members;
    for (const Tuple& x : m) {
      for (const Tuple& y : m) {
        auto d = decide_delta(oracle, s.equiv, {x, y}, budget);
        ++decided;
        if (d.verdict == Verdict::Unknown) {
          return unknown(name, "equiv-undecided=" + to_string(x) + "~" + to_string(y));
        }
      }
    }
    for (std::size_t r = 0; r < s.relations.size(); ++r) {
      const std::size_t a = s.target.arity(r);
      std::vector<std::size_t> idx(a, 0);
      if (m.empty()) break;
      for (;;) {
        Blocks args;
        for (std::size_t k : idx) args.push_back(m[k]);
        auto d = decide_delta(oracle, s.relations[r], args, budget);
        ++decided;
        if (d.verdict == Verdict::Unknown) {
          return unknown(name, "rel" + std::to_string(r) + "-undecided");
        }
        std::size_t k = 0;
        while (k < a && ++idx[k] == m.size()) idx[k++] = 0;
        if (k == a) break;
      }
    }
    return pass(name, kv("decisions", decided) + " " + kv("members", m.size()));
  } catch (const SchemeUnsound& e) {
    return fail(name, no_spaces(e.what()));
  } catch (const ArgumentError& e) {
    return fail(name, no_spaces(e.what()));
  }
}

// --- points and equivalence ---------------------------------------------------

Suite dom_dichotomy(Context& ctx) {
  const std::string name = "dom-dichotomy";
  const auto& scan = ctx.dom_scan();
  if (!scan.unknown.empty()) {
    return unknown(name, kv("unknown", scan.unknown.size()) + " first=" + point_text(scan.unknown.front()));
  }
  // Convergence on D(b) survives extending b.
  for (const DomPoint& p : scan.in) {
    if (p.b.size() >= ctx.profile().points.max_length) continue;
    Tuple ext = p.b;
    Elem e = 0;
    while (std::find(ext.begin(), ext.end(), e) != ext.end()) ++e;
    ext.push_back(e);
    auto d = dom_contains(ctx.functor(), ctx.base(), ext, p.i, ctx.profile().fuel);
    if (d.verdict != Verdict::In) {
      return fail(name, "point=" + point_text(p) + " extension=" + to_string(ext) + " not-in");
    }
  }
  return pass(name, kv("points", scan.total) + " " + kv("in", scan.in.size()) + " " +
                        kv("out", scan.total - scan.in.size()));
}

Suite equivalence_laws(Context& ctx) {
  const std::string name = "equivalence-laws";
  const auto& in = ctx.dom_scan().in;
  const auto& m = ctx.equiv_matrix();
  if (!m.broken.empty()) return fail(name, no_spaces(m.broken));
  const std::size_t n = in.size();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (m.v[p][q] == EquivVerdict::Unknown) {
        return unknown(name, "undecided=" + point_text(in[p]) + "~" + point_text(in[q]));
      }
    }
  }
  using V = EquivVerdict;
  for (std::size_t p = 0; p < n; ++p) {
    if (m.v[p][p] != V::Equivalent) return fail(name, "reflexivity point=" + point_text(in[p]));
    for (std::size_t q = 0; q < n; ++q) {
      if (m.v[p][q] != m.v[q][p]) {
        return fail(name, "symmetry points=" + point_text(in[p]) + "," + point_text(in[q]));
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (m.v[p][q] != V::Equivalent) continue;
      for (std::size_t r = 0; r < n; ++r) {
        if (m.v[q][r] == V::Equivalent && m.v[p][r] != V::Equivalent) {
          return fail(name, "transitivity points=" + point_text(in[p]) + "," + point_text(in[q]) +
                                "," + point_text(in[r]));
        }
      }
    }
  }
  std::set<std::size_t> classes(m.cls.begin(), m.cls.end());
  return pass(name, kv("points", n) + " " + kv("classes", classes.size()));
}

Suite rq_partition(Context& ctx) {
  const std::string name = "rq-partition";
  const CompFunctor& F = ctx.functor();
  const auto& in = ctx.dom_scan().in;
  const auto& m = ctx.equiv_matrix();
  if (!m.complete) return unknown(name, "equivalence-incomplete");
  const auto rc = F.target.relation_count();
  if (!rc) return unknown(name, "unbounded-signature");
  std::size_t in_r = 0, in_q = 0;
  for (std::size_t r = 0; r < *rc; ++r) {
    const std::size_t a = F.target.arity(r);
    std::map<std::vector<std::size_t>, Verdict> by_class;
    std::vector<std::size_t> idx(a, 0);
    if (in.empty()) break;
    for (;;) {
      std::vector<DomPoint> args;
      std::vector<std::size_t> cls;
      for (std::size_t k : idx) {
        args.push_back(in[k]);
        cls.push_back(m.cls[k]);
      }
      std::string where = "rel=" + std::to_string(r) + " args=";
      for (const auto& p : args) where += point_text(p);
      RelResult res;
      try {
        res = rel_decide(F, r, args, ctx.base(), ctx.rel_budget());
      } catch (const FunctorBroken& e) {
        return fail(name, "both-R-and-Q " + where);
      }
      if (res.verdict == Verdict::Unknown) return unknown(name, "uncovered " + where);
      (res.verdict == Verdict::In ? in_r : in_q) += 1;
      auto [it, fresh] = by_class.emplace(cls, res.verdict);
      if (!fresh && it->second != res.verdict) return fail(name, "congruence " + where);
      std::size_t k = 0;
      while (k < a && ++idx[k] == in.size()) idx[k++] = 0;
      if (k == a) break;
    }
  }
  return pass(name, kv("R", in_r) + " " + kv("Q", in_q));
}

// --- canonical embedding -----------------------------------------------------

void for_each_tuple(std::size_t arity, std::size_t below, const std::function<void(const Tuple&)>& fn) {
  Tuple t(arity, 0);
  for (;;) {
    fn(t);
    std::size_t k = 0;
    while (k < arity && ++t[k] == below) t[k++] = 0;
    if (k == arity) return;
  }
}

Suite canonical_embedding(Context& ctx) {
  const std::string name = "canonical-embedding";
  const CompFunctor& F = ctx.functor();
  const auto& prof = ctx.profile();
  try {
    std::vector<DomPoint> emb;
    for (Elem i = 0; i < prof.embed_prefix; ++i) emb.push_back(canonical_embed(F, ctx.base(), i, prof.fuel));
    const auto eb = ctx.equiv_budget();
    for (std::size_t i = 0; i < emb.size(); ++i) {
      for (std::size_t j = i + 1; j < emb.size(); ++j) {
        auto r = equiv_decide(F, emb[i], emb[j], ctx.base(), eb);
        if (r.verdict == EquivVerdict::Unknown) return unknown(name, "undecided i=" + std::to_string(i) + " j=" + std::to_string(j));
        if (r.verdict == EquivVerdict::Equivalent) {
          return fail(name, "not-injective i=" + std::to_string(i) + " j=" + std::to_string(j));
        }
      }
    }
    for (const DomPoint& p : ctx.dom_scan().in) {
      std::size_t hits = 0;
      for (const DomPoint& e : emb) {
        auto r = equiv_decide(F, e, p, ctx.base(), eb);
        if (r.verdict == EquivVerdict::Unknown) return unknown(name, "undecided point=" + point_text(p));
        if (r.verdict == EquivVerdict::Equivalent) ++hits;
      }
      if (hits != 1) return fail(name, "class-of=" + point_text(p) + " " + kv("images", hits));
    }
    const auto rc = F.target.relation_count();
    std::size_t facts = 0;
    if (rc) {
      const Presentation target = apply_to_presentation(F, ctx.base(), prof.fuel);
      const std::size_t k = std::min(prof.transport_classes, emb.size());
      for (std::size_t r = 0; r < *rc; ++r) {
        std::optional<Suite> bad;
        for_each_tuple(F.target.arity(r), k, [&](const Tuple& t) {
          if (bad) return;
          std::vector<DomPoint> args;
          for (Elem x : t) args.push_back(emb[x]);
          auto res = rel_decide(F, r, args, ctx.base(), ctx.rel_budget());
          ++facts;
          const std::string where = "rel=" + std::to_string(r) + " classes=" + to_string(t);
          if (res.verdict == Verdict::Unknown) {
            bad = unknown(name, "transport-undecided " + where);
          } else if ((res.verdict == Verdict::In) != target.holds(r, t)) {
            bad = fail(name, "transport " + where);
          }
        });
        if (bad) return *bad;
      }
    }
    return pass(name, kv("images", emb.size()) + " " + kv("points", ctx.dom_scan().in.size()) + " " +
                          kv("facts", facts));
  } catch (const FunctorBroken& e) {
    return fail(name, no_spaces(e.what()));
  }
}

// --- functor laws, naturality, uniformity ------------------------------------

std::vector<MorphismPair> law_samples(std::size_t span) {
  std::vector<FinMap> perms;
  for (const FinMap& p : permutations_of_prefix(span)) {
    std::size_t moved = 0;
    for (const auto& [x, y] : p.pairs()) moved += x != y;
    if (moved <= 3) perms.push_back(p);
  }
  std::vector<MorphismPair> out;
  for (const auto& f : perms) {
    for (const auto& g : perms) out.push_back({f, g});
  }
  return out;
}

Suite functor_laws(const std::string& name, const CompFunctor& F, Context& ctx) {
  const auto& prof = ctx.profile();
  const auto samples = law_samples(prof.law_span);
  LawReport r = check_functor_laws(F, ctx.base(), samples, prof.law_prefix, prof.fuel);
  for (const auto& v : r.violations) {
    if (v.law == "fuel") continue;
    return fail(name, "law=" + v.law + " sample=" + std::to_string(v.sample) + " point=" +
                          std::to_string(v.point) + " " + no_spaces(v.detail));
  }
  if (r.fuel_failures) return unknown(name, kv("fuel-failures", r.fuel_failures));
  return pass(name, kv("samples", samples.size()) + " " + kv("points", r.points_checked));
}

Suite natural_square(Context& ctx) {
  const std::string name = "natural-square";
  const auto& prof = ctx.profile();
  const auto& autos = ctx.item().automorphisms;
  const std::size_t c = ctx.copies().size();
  std::size_t fuel_failures = 0;
  for (std::size_t m = 0; m < prof.square_morphisms; ++m) {
    const std::size_t a = m % c;
    const std::size_t b = (m + 1 + m / c) % c;
    const FinMap sigma = autos.empty() ? FinMap{} : autos[m % autos.size()];
    const auto h = ctx.between(a, b, sigma);
    auto rep = check_natural_square(ctx.lambda(), ctx.copies()[a], ctx.copies()[b], h,
                                    prof.square_prefix, prof.fuel);
    if (!rep.mismatches.empty()) {
      const auto& mm = rep.mismatches.front();
      return fail(name, "morphism=" + std::to_string(m) + " copies=" + std::to_string(a) + "->" +
                            std::to_string(b) + " point=" + std::to_string(mm.point) + " " +
                            no_spaces(mm.detail));
    }
    fuel_failures += rep.fuel_failures;
  }
  if (fuel_failures) return unknown(name, kv("fuel-failures", fuel_failures));
  return pass(name, kv("morphisms", prof.square_morphisms) + " " + kv("prefix", prof.square_prefix));
}

Suite uniformity(Context& ctx) {
  const std::string name = "uniformity";
  const auto& prof = ctx.profile();
  if (ctx.copies().size() < 2) return unknown(name, "needs-two-copies");
  const auto& autos = ctx.item().automorphisms;
  const Presentation& X = ctx.copies()[0];
  const Presentation& Y = ctx.copies()[1];
  const auto pi = ctx.between(0, 1, autos.empty() ? FinMap{} : autos.front());
  const CompFunctor& IF = ctx.lambda().round_trip();
  const std::size_t n = prof.uniform_prefix;
  try {
    const auto IFpi = apply_to_morphism(IF, X, pi, Y, prof.fuel);
    const Presentation IX = apply_to_presentation(IF, X, prof.fuel);
    const Presentation IY = apply_to_presentation(IF, Y, prof.fuel);
    std::map<Elem, Elem> image;
    std::set<Elem> values;
    for (Elem x = 0; x < n; ++x) {
      const Elem y = IFpi.forward(x);
      if (IFpi.backward(y) != x) return fail(name, "not-inverse point=" + std::to_string(x));
      if (!values.insert(y).second) return fail(name, "not-injective point=" + std::to_string(x));
      image[x] = y;
    }
    std::size_t facts = 0;
    const auto rc = IF.target.relation_count();
    for (std::size_t r = 0; rc && r < *rc; ++r) {
      std::optional<Suite> bad;
      for_each_tuple(IF.target.arity(r), n, [&](const Tuple& t) {
        if (bad) return;
        Tuple u;
        for (Elem x : t) u.push_back(image.at(x));
        ++facts;
        if (IX.holds(r, t) != IY.holds(r, u)) {
          bad = fail(name, "rel=" + std::to_string(r) + " tuple=" + to_string(t) + " image=" + to_string(u));
        }
      });
      if (bad) return *bad;
    }
    return pass(name, kv("prefix", n) + " " + kv("facts", facts));
  } catch (const FuelExhausted& e) {
    return unknown(name, "fuel " + no_spaces(e.what()));
  }
}

// --- bi-interpretation -------------------------------------------------------

Suite from_report(const std::string& name, const BiReport& r) {
  if (!r.failures.empty()) {
    const auto& f = r.failures.front();
    return fail(name, "check=" + f.check + " sample=" + std::to_string(f.sample) + " point=" +
                          std::to_string(f.point) + " " + no_spaces(f.detail));
  }
  if (r.fuel_failures) return unknown(name, kv("fuel-failures", r.fuel_failures));
  return pass(name, kv("points", r.points_checked));
}

std::vector<FinMap> bi_morphisms(Context& ctx) {
  std::vector<FinMap> js = ctx.item().automorphisms;
  if (js.size() > 3) js.resize(3);
  return js;
}

Suite pseudo_inverse(Context& ctx) {
  const auto& d = *ctx.item().biinterp;
  const auto& t = ctx.bitransform();
  return from_report("pseudo-inverse",
                     check_pseudo_inverse(t, ctx.copies_of(d.a_base), ctx.copies_of(d.b_base),
                                          ctx.profile().bi_prefix, ctx.profile().fuel));
}

Suite effective_iso(Context& ctx, bool a_side) {
  const auto& d = *ctx.item().biinterp;
  const auto& t = ctx.bitransform();
  const auto& prof = ctx.profile();
  if (a_side) {
    return from_report("effective-iso-A",
                       check_effective_iso_identity(t.F, t.G, t.lambdaA, ctx.copies_of(d.a_base),
                                                    bi_morphisms(ctx), prof.bi_prefix, prof.fuel));
  }
  return from_report("effective-iso-B",
                     check_effective_iso_identity(t.G, t.F, t.lambdaB, ctx.copies_of(d.b_base),
                                                  bi_morphisms(ctx), prof.bi_prefix, prof.fuel));
}

Suite broken_lambda(Context& ctx) {
  const std::string name = "broken-lambda-detected";
  const auto& d = *ctx.item().biinterp;
  const auto& t = ctx.bitransform();
  const auto& prof = ctx.profile();
  const auto broken = twist_output(t.lambdaA, 0, 1);
  auto r = check_effective_iso_identity(t.F, t.G, broken, ctx.copies_of(d.a_base),
                                        bi_morphisms(ctx), prof.bi_prefix, prof.fuel);
  BiTransformData bt = t;
  bt.lambdaB = twist_output(t.lambdaB, 0, 1);
  auto q = check_pseudo_inverse(bt, ctx.copies_of(d.a_base), {}, prof.bi_prefix, prof.fuel);
  if (r.failures.empty() || q.failures.empty()) {
    if (r.fuel_failures || q.fuel_failures) return unknown(name, "undecided");
    return fail(name, std::string("undetected-in=") + (r.failures.empty() ? "effective-iso" : "pseudo-inverse"));
  }
  const auto& f = r.failures.front();
  const auto& g = q.failures.front();
  return pass(name, "effective-iso:" + f.check + "@" + std::to_string(f.point) + " pseudo-inverse@" +
                        std::to_string(g.point));
}

// a after b, both read as permutations fixing everything off their support.
FinMap compose_perms(const FinMap& a, const FinMap& b) {
  std::map<Elem, Elem> m;
  auto at = [](const FinMap& f, Elem x) {
    const auto it = f.pairs().find(x);
    return it == f.pairs().end() ? x : it->second;
  };
  for (const FinMap* f : {&a, &b})
    for (const auto& [u, v] : f->pairs()) m[u] = u;
  for (auto& [u, v] : m) v = at(a, at(b, u));
  std::erase_if(m, [](const auto& e) { return e.first == e.second; });
  return FinMap(m);
}

Suite char_conditions(Context& ctx) {
  const std::string name = "char-conditions";
  const auto& d = *ctx.item().biinterp;
  const auto& prof = ctx.profile();
  const auto& autos = ctx.item().automorphisms;
  BiReport all;
  std::size_t alphas = 0;
  for (std::size_t k = 0; k < prof.char_alphas; ++k) {
    FinMap pi = autos.empty() ? FinMap{} : autos[k % autos.size()];
    if (k >= autos.size()) pi = compose_perms(pi, autos[(k / autos.size()) % autos.size()]);
    const CodedMap alpha = after_permutation(decode_map(1), pi);
    auto r = check_char_conditions(d, alpha, decode_map(1), prof.bi_prefix, prof.fuel);
    ++alphas;
    if (!r.failures.empty()) {
      const auto& f = r.failures.front();
      return fail(name, "alpha=" + no_spaces(alpha.name) + " check=" + f.check + " point=" +
                            std::to_string(f.point) + " " + no_spaces(f.detail));
    }
    all.merge(r);
  }
  if (all.fuel_failures) return unknown(name, kv("fuel-failures", all.fuel_failures));
  return pass(name, kv("alphas", alphas) + " " + kv("points", all.points_checked));
}

Suite char_shift(Context& ctx) {
  const std::string name = "char-shift-detected";
  BiInterpData d = *ctx.item().biinterp;
  d.g = shifted(d.g, 1);
  auto r = check_char_conditions(d, decode_map(1), decode_map(1), ctx.profile().bi_prefix, ctx.profile().fuel);
  if (r.failures.empty()) return r.fuel_failures ? unknown(name, "undecided") : fail(name, "undetected");
  return pass(name, "check=" + r.failures.front().check + " point=" + std::to_string(r.failures.front().point));
}

Suite theta(Context& ctx) {
  const auto& d = *ctx.item().biinterp;
  return from_report("theta-equivariance",
                     check_theta_equivariance(d, ctx.bitransform(), ctx.copies_of(d.a_base),
                                              bi_morphisms(ctx), ctx.profile().bi_prefix,
                                              ctx.profile().fuel));
}

using SuiteFn = std::function<Suite(Context&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"scheme-soundness", scheme_soundness},
      {"dom-dichotomy", dom_dichotomy},
      {"equivalence-laws", equivalence_laws},
      {"rq-partition", rq_partition},
      {"canonical-embedding", canonical_embedding},
      {"functor-laws", [](Context& c) { return functor_laws("functor-laws", c.functor(), c); }},
      {"synthesized-functor-laws",
       [](Context& c) { return functor_laws("synthesized-functor-laws", c.lambda().round_trip(), c); }},
      {"natural-square", natural_square},
      {"uniformity", uniformity},
      {"pseudo-inverse", pseudo_inverse},
      {"effective-iso-A", [](Context& c) { return effective_iso(c, true); }},
      {"effective-iso-B", [](Context& c) { return effective_iso(c, false); }},
      {"broken-lambda-detected", broken_lambda},
      {"char-conditions", char_conditions},
      {"char-shift-detected", char_shift},
      {"theta-equivariance", theta},
  };
  return r;
}

}  // namespace

std::vector<std::string> known_suites() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

SuiteRun run_suite(const GalleryItem& item, const BudgetProfile& profile) {
  SuiteRun run;
  Context ctx(item, profile);
  for (const std::string& s : item.expected) {
    const auto& reg = registry();
    auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.first == s; });
    if (it == reg.end()) {
      run.results.push_back(fail(s, "no-such-suite"));
      continue;
    }
    try {
      run.results.push_back(it->second(ctx));
    } catch (const FuelExhausted& e) {
      run.results.push_back(unknown(s, "fuel " + no_spaces(e.what())));
    } catch (const BudgetExhausted& e) {
      run.results.push_back(unknown(s, "budget " + no_spaces(e.what())));
    } catch (const Error& e) {
      run.results.push_back(fail(s, "error " + no_spaces(e.what())));
    }
  }
  run.exit_code = exit_code_for(run.results);
  return run;
}

SuiteRun run_suite(const std::string& item, const BudgetProfile& profile) {
  const auto names = gallery_list();
  if (std::find(names.begin(), names.end(), item) == names.end()) {
    SuiteRun run;
    run.exit_code = 3;
    run.message = "unknown item: " + item;
    return run;
  }
  return run_suite(gallery_item(item), profile);
}

}  // namespace effint
