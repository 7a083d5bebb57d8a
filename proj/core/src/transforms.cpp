#include "effint/transforms.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "effint/errors.hpp"
#include "transform_detail.hpp"

namespace effint {

// --- shared pieces ----------------------------------------------------------

namespace detail {

bool injective(const Tuple& t) {
  std::set<Elem> seen(t.begin(), t.end());
  return seen.size() == t.size();
}

Tuple first_unused(const Tuple& a, const Tuple& b, std::size_t l) {
  std::set<Elem> used(a.begin(), a.end());
  used.insert(b.begin(), b.end());
  Tuple out;
  for (Elem e = 0; out.size() < l; ++e) {
    if (!used.contains(e)) out.push_back(e);
  }
  return out;
}

EquivGeometry equiv_geometry(const Tuple& b, const Tuple& c, const Tuple& d) {
  std::set<Elem> bs(b.begin(), b.end()), cs(c.begin(), c.end());
  EquivGeometry g;
  g.left = b;
  for (Elem e : c) {
    if (!bs.contains(e)) g.left.push_back(e);
  }
  g.left.insert(g.left.end(), d.begin(), d.end());
  g.right = c;
  for (Elem e : b) {
    if (!cs.contains(e)) g.right.push_back(e);
  }
  g.right.insert(g.right.end(), d.begin(), d.end());
  std::map<Elem, Elem> where;
  for (std::size_t q = 0; q < g.right.size(); ++q) where[g.right[q]] = q;
  Tuple images;
  for (Elem e : g.left) images.push_back(where.at(e));
  g.sigma = FinMap::from_images(images);
  return g;
}

Tuple initial_segment_images(const Tuple& b, std::size_t n) {
  std::set<Elem> bs(b.begin(), b.end());
  Tuple out = b;
  for (Elem e = 0; e < n; ++e) {
    if (!bs.contains(e)) out.push_back(e);
  }
  return out;
}

Outcome FuelPool::run(const Functional& fn, const OracleTriple& oracle, Elem input) {
  Outcome o = fn.run(oracle, input, fuel_ - used_);
  used_ += o.fuel_used;
  if (o.kind == OutcomeKind::OutOfFuel) used_ = fuel_;
  return o;
}

Classified equiv_runs(const CompFunctor& F, const DiagramFragment& dl, const FinMap& sigma,
                      const DiagramFragment& dr, Elem i, Elem j, std::uint64_t fuel) {
  FuelPool pool(fuel);
  Classified r;
  const Signature& sig = F.source;
  Outcome fwd = pool.run(F.phi_star, OracleTriple::finite(sig, dl, sigma, sig, dr), i);
  r.used = pool.used();
  if (fwd.kind == OutcomeKind::OutOfFuel) return r;
  if (fwd.kind == OutcomeKind::Demand) {
    r.cls = RunClass::Skip;
    return r;
  }
  r.forward = fwd.value;
  if (fwd.value != j) {
    r.cls = RunClass::Neg;
    return r;
  }
  Outcome bwd = pool.run(F.phi_star, OracleTriple::finite(sig, dr, sigma.inverse(), sig, dl), j);
  r.used = pool.used();
  if (bwd.kind == OutcomeKind::OutOfFuel) return r;
  if (bwd.kind == OutcomeKind::Demand) {
    r.cls = RunClass::Skip;
    return r;
  }
  r.backward = bwd.value;
  r.cls = bwd.value == i ? RunClass::Pos : RunClass::Neg;
  return r;
}

Classified dom_run(const CompFunctor& F, const DiagramFragment& db, Elem i, std::uint64_t fuel) {
  Classified r;
  Outcome o = F.phi_star.run(
      OracleTriple::finite(F.source, db, FinMap::identity_prefix(db.length()), F.source, db), i,
      fuel);
  r.used = o.fuel_used;
  if (o.kind == OutcomeKind::OutOfFuel) return r;
  r.forward = o.value;
  r.cls = o.halted_with(i) ? RunClass::Pos : RunClass::Neg;
  return r;
}

Classified rel_runs(const CompFunctor& F, std::size_t rel, const DiagramFragment& dc,
                    const std::vector<DiagramFragment>& lefts, const std::vector<FinMap>& sigmas,
                    const Tuple& is, std::uint64_t fuel, Tuple* normalised) {
  FuelPool pool(fuel);
  Classified r;
  const Signature& sig = F.source;
  Tuple js;
  auto settle = [&](const Outcome& o) {
    r.used = pool.used();
    if (o.kind == OutcomeKind::OutOfFuel) return false;
    if (o.kind == OutcomeKind::Demand) {
      r.cls = RunClass::Skip;
      return false;
    }
    return true;
  };
  for (std::size_t s = 0; s < is.size(); ++s) {
    Outcome fwd = pool.run(F.phi_star, OracleTriple::finite(sig, lefts[s], sigmas[s], sig, dc), is[s]);
    if (!settle(fwd)) return r;
    const Elem j = fwd.value;
    Outcome bwd =
        pool.run(F.phi_star, OracleTriple::finite(sig, dc, sigmas[s].inverse(), sig, lefts[s]), j);
    if (!settle(bwd)) return r;
    Outcome dom = pool.run(
        F.phi_star, OracleTriple::finite(sig, dc, FinMap::identity_prefix(dc.length()), sig, dc), j);
    if (!settle(dom)) return r;
    if (bwd.value != is[s] || dom.value != j) {
      r.cls = RunClass::Skip;
      return r;
    }
    js.push_back(j);
  }
  Outcome o = pool.run(F.phi, OracleTriple::diagram(DiagramSource::fragment(sig, dc)),
                       encode_fact(rel, js));
  if (!settle(o)) return r;
  r.cls = o.value != 0 ? RunClass::Pos : RunClass::Neg;
  if (normalised) *normalised = js;
  return r;
}

}  // namespace detail

using detail::RunClass;

std::string to_string(const DomPoint& p) {
  return "(" + to_string(p.b) + ", " + std::to_string(p.i) + ")";
}

std::string to_string(EquivVerdict v) {
  switch (v) {
    case EquivVerdict::Equivalent: return "equivalent";
    case EquivVerdict::Inequivalent: return "inequivalent";
    case EquivVerdict::Unknown: return "unknown";
  }
  return "?";
}

// --- Dom --------------------------------------------------------------------

OracleTriple dom_triple(const CompFunctor& F, const Presentation& pres, const Tuple& b) {
  DiagramFragment db = fragment_of(pres, b);
  return OracleTriple::finite(F.source, db, FinMap::identity_prefix(b.size()), F.source, db);
}

DomDecision dom_contains(const CompFunctor& F, const Presentation& pres, const Tuple& b, Elem i,
                         std::uint64_t fuel) {
  if (!detail::injective(b)) return {Verdict::Out, Outcome::halt(0)};
  Outcome o = F.phi_star.run(dom_triple(F, pres, b), i, fuel);
  if (o.kind == OutcomeKind::OutOfFuel) return {Verdict::Unknown, o};
  return {o.halted_with(i) ? Verdict::In : Verdict::Out, o};
}

std::optional<DomPoint> certify(const CompFunctor& F, const Presentation& pres, const Tuple& b,
                                Elem i, std::uint64_t fuel) {
  auto d = dom_contains(F, pres, b, i, fuel);
  if (d.verdict != Verdict::In) return std::nullopt;
  return DomPoint{b, i, d.outcome.fuel_used};
}

// --- equivalence ------------------------------------------------------------

namespace {

struct EquivAttempt {
  detail::Classified cls;
  EquivWitness witness;
};

EquivAttempt equiv_attempt(const CompFunctor& F, const DomPoint& p, const DomPoint& q,
                           const Presentation& pres, const Tuple& d, std::uint64_t fuel) {
  auto g = detail::equiv_geometry(p.b, q.b, d);
  auto c = detail::equiv_runs(F, fragment_of(pres, g.left), g.sigma, fragment_of(pres, g.right),
                              p.i, q.i, fuel);
  return {c, EquivWitness{d, g.sigma, c.forward, c.backward}};
}

EquivVerdict verdict_of(RunClass c) {
  if (c == RunClass::Pos) return EquivVerdict::Equivalent;
  if (c == RunClass::Neg) return EquivVerdict::Inequivalent;
  return EquivVerdict::Unknown;
}

}  // namespace

EquivResult equiv_decide(const CompFunctor& F, const DomPoint& p, const DomPoint& q,
                         const Presentation& pres, const EquivBudget& budget) {
  if (!detail::injective(p.b) || !detail::injective(q.b)) {
    throw ArgumentError("equivalence is only defined on injective points");
  }
  for (std::size_t l = 0; l <= budget.max_extra; ++l) {
    const Tuple d = detail::first_unused(p.b, q.b, l);
    auto a = equiv_attempt(F, p, q, pres, d, budget.fuel);
    if (a.cls.cls == RunClass::Skip) continue;
    if (a.cls.cls == RunClass::Pending) return {};
    EquivResult result{verdict_of(a.cls.cls), a.witness};
    if (budget.strict) {
      // Longer d, then d drawn from above everything in sight.
      std::vector<Tuple> others{detail::first_unused(p.b, q.b, l + 1),
                                detail::first_unused(p.b, q.b, l + 2)};
      Elem top = 0;
      for (Elem e : p.b) top = std::max(top, e + 1);
      for (Elem e : q.b) top = std::max(top, e + 1);
      Tuple far(l + 1);
      std::iota(far.begin(), far.end(), top + 7);
      others.push_back(far);
      for (const Tuple& alt : others) {
        auto b = equiv_attempt(F, p, q, pres, alt, budget.fuel);
        EquivVerdict v = verdict_of(b.cls.cls);
        if (v != EquivVerdict::Unknown && v != result.verdict) {
          throw FunctorBroken("points " + to_string(p) + " and " + to_string(q) + " are " +
                              to_string(result.verdict) + " with d=" + to_string(d) + " but " +
                              to_string(v) + " with d=" + to_string(alt));
        }
      }
    }
    return result;
  }
  return {};
}

// --- relations --------------------------------------------------------------

namespace {

struct RelAttempt {
  detail::Classified cls;
  Tuple normalised;
};

RelAttempt rel_attempt(const CompFunctor& F, std::size_t rel, const std::vector<DomPoint>& points,
                       const Presentation& pres, std::size_t n, std::uint64_t fuel) {
  Tuple c(n);
  std::iota(c.begin(), c.end(), Elem{0});
  const DiagramFragment dc = fragment_of(pres, c);
  std::vector<DiagramFragment> lefts;
  std::vector<FinMap> sigmas;
  Tuple is;
  for (const auto& p : points) {
    Tuple images = detail::initial_segment_images(p.b, n);
    lefts.push_back(fragment_of(pres, images));
    sigmas.push_back(FinMap::from_images(images));
    is.push_back(p.i);
  }
  RelAttempt a;
  a.cls = detail::rel_runs(F, rel, dc, lefts, sigmas, is, fuel, &a.normalised);
  return a;
}

}  // namespace

RelResult rel_decide(const CompFunctor& F, std::size_t rel, const std::vector<DomPoint>& points,
                     const Presentation& pres, const RelBudget& budget) {
  auto rc = F.target.relation_count();
  if (rc && rel >= *rc) throw ArgumentError("relation index out of range");
  if (points.size() != F.target.arity(rel)) throw ArgumentError("wrong number of points");
  std::size_t n = 0;
  for (const auto& p : points) {
    if (!detail::injective(p.b)) throw ArgumentError("relation arguments must be injective points");
    for (Elem e : p.b) n = std::max<std::size_t>(n, e + 1);
  }
  for (; n <= budget.max_prefix; n = n == 0 ? 1 : n + (n + 1) / 2) {
    auto a = rel_attempt(F, rel, points, pres, n, budget.fuel);
    if (a.cls.cls == RunClass::Skip) continue;
    if (a.cls.cls == RunClass::Pending) return {Verdict::Unknown, n, {}};
    RelResult r{a.cls.cls == RunClass::Pos ? Verdict::In : Verdict::Out, n, a.normalised};
    if (budget.strict) {
      auto b = rel_attempt(F, rel, points, pres, 2 * n + 1, budget.fuel);
      const bool decided = b.cls.cls == RunClass::Pos || b.cls.cls == RunClass::Neg;
      if (decided && (b.cls.cls == RunClass::Pos) != (r.verdict == Verdict::In)) {
        throw FunctorBroken("relation " + std::to_string(rel) + " changes between prefixes " +
                            std::to_string(n) + " and " + std::to_string(2 * n + 1));
      }
    }
    return r;
  }
  return {Verdict::Unknown, n, {}};
}

DomPoint canonical_embed(const CompFunctor& F, const Presentation& pres, Elem i,
                         std::uint64_t fuel, std::size_t max_prefix) {
  Tuple b;
  for (std::size_t n = 0; n <= max_prefix; ++n) {
    auto d = dom_contains(F, pres, b, i, fuel);
    if (d.verdict == Verdict::In) return DomPoint{b, i, d.outcome.fuel_used};
    if (d.verdict == Verdict::Unknown) {
      throw FuelExhausted("domain membership of point " + std::to_string(i) +
                              " undecided on prefix " + std::to_string(n),
                          i);
    }
    b.push_back(n);
  }
  throw BudgetExhausted("point " + std::to_string(i) + " not in the domain below prefix " +
                        std::to_string(max_prefix));
}

// --- Lambda -----------------------------------------------------------------

struct LambdaEvaluator::Table {
  Presentation pres;
  std::unique_ptr<PresentationOracle> oracle;
  std::unique_ptr<CollapseTable> table;
};

LambdaEvaluator::LambdaEvaluator(CompFunctor F, SynthesisOptions options)
    : F_(std::move(F)),
      scheme_(std::make_shared<const InterpScheme>(functor_to_interp(F_, options))),
      IF_(interp_to_functor(*scheme_)),
      cache_(make_collapse_cache()) {}

LambdaEvaluator::~LambdaEvaluator() = default;

LambdaEvaluator::Table& LambdaEvaluator::table_for(const Presentation& pres) {
  auto& slot = tables_[pres.identity()];
  if (!slot) {
    slot = std::make_unique<Table>(Table{pres, nullptr, nullptr});
    slot->oracle = std::make_unique<PresentationOracle>(slot->pres);
    slot->table = std::make_unique<CollapseTable>(*scheme_, *slot->oracle, CollapseOptions{}, cache_);
  }
  return *slot;
}

Elem LambdaEvaluator::lambda(const Presentation& pres, Elem i, std::uint64_t fuel) {
  DomPoint p = canonical_embed(F_, pres, i, fuel);
  return table_for(pres).table->index_of(p.code());
}

Tuple LambdaEvaluator::class_representative(const Presentation& pres, std::size_t n) {
  return table_for(pres).table->representative(n);
}

Functional LambdaEvaluator::as_functional(std::uint64_t inner_fuel) const {
  auto scheme = scheme_;
  auto cache = cache_;
  CompFunctor F = F_;
  return Functional(
      [scheme, cache, F, inner_fuel](Machine& m, Elem i) -> Elem {
        MachineSideOracle left(m, MachineSideOracle::Side::Left);
        Tuple b;
        for (;; b.push_back(b.size())) {
          m.tick();
          if (!detail::injective(b)) continue;
          auto c = detail::dom_run(F, fragment_of(left, b), i, inner_fuel);
          if (c.cls == RunClass::Pending) m.tick(m.fuel_left() + 1);
          if (c.cls == RunClass::Pos) break;
        }
        CollapseTable table(*scheme, left, {}, cache);
        return table.index_of(encode_pair(b, i));
      },
      F_.name + ".lambda");
}

Elem natural_iso_lambda(const CompFunctor& F, const Presentation& pres, Elem i,
                        std::uint64_t fuel) {
  LambdaEvaluator L(F);
  return L.lambda(pres, i, fuel);
}

SquareReport check_natural_square(LambdaEvaluator& L, const Presentation& pres1,
                                  const Presentation& pres2, const MorphismOracle& h,
                                  std::size_t prefix, std::uint64_t fuel) {
  SquareReport report;
  const auto Fh = apply_to_morphism(L.functor(), pres1, h, pres2, fuel);
  const auto IFh = apply_to_morphism(L.round_trip(), pres1, h, pres2, fuel);
  for (Elem i = 0; i < prefix; ++i) {
    try {
      const Elem lhs = L.lambda(pres2, Fh.forward(i), fuel);
      const Elem rhs = IFh.forward(L.lambda(pres1, i, fuel));
      if (lhs != rhs) {
        report.mismatches.push_back({i, lhs, rhs,
                                     "Lambda(F(h)(i))=" + std::to_string(lhs) +
                                         " I(h)(Lambda(i))=" + std::to_string(rhs)});
      }
    } catch (const FuelExhausted&) {
      ++report.fuel_failures;
    } catch (const BudgetExhausted&) {
      ++report.fuel_failures;
    }
  }
  return report;
}

SquareReport check_natural_square(const CompFunctor& F, const Presentation& pres1,
                                  const Presentation& pres2, const MorphismOracle& h,
                                  std::size_t prefix, std::uint64_t fuel) {
  LambdaEvaluator L(F);
  return check_natural_square(L, pres1, pres2, h, prefix, fuel);
}

}  // namespace effint
