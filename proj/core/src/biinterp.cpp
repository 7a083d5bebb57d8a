#include "effint/biinterp.hpp"

#include <deque>
#include <limits>
#include <set>

#include "effint/errors.hpp"
#include "effint/stock.hpp"
#include "effint/text_io.hpp"

namespace effint {

namespace {

constexpr std::size_t kClassSearchLimit = std::size_t{1} << 16;
constexpr std::uint64_t kHostScanLimit = std::uint64_t{1} << 20;

Elem decode_term(const Term& t, std::size_t depth) {
  if (depth == 0) {
    if (!t.is_leaf()) throw DecodeError("expected an element, got " + to_string(t));
    return t.leaf();
  }
  if (t.is_leaf()) throw DecodeError("expected a code, got " + to_string(t));
  const auto& items = t.items();
  if (items.empty()) throw DecodeError("empty code");
  const Term& marker = items[0];
  std::size_t end = items.size();
  std::size_t index = 0;
  while (end > 1 && items[end - 1] == marker) {
    --end;
    ++index;
  }
  for (std::size_t p = 1; p < end; ++p) {
    if (items[p] == marker) throw DecodeError("marker inside code " + to_string(t));
  }
  if (index >= end - 1) throw DecodeError("index out of range in " + to_string(t));
  return decode_term(items[1 + index], depth - 1);
}

std::shared_ptr<const AtomicOracle> non_owning(const AtomicOracle& o) {
  return std::shared_ptr<const AtomicOracle>(std::shared_ptr<const AtomicOracle>(), &o);
}

/// Nested collapse terms: level 0 tuples are tuples of base elements, level
/// k tuples list points of the structure collapsed by tables[k-1].
Term term_of(const std::vector<CollapseTable*>& tables, std::size_t level, const Tuple& tuple) {
  if (level == 0) return Term::of(tuple);
  std::vector<Term> items;
  items.reserve(tuple.size());
  for (Elem e : tuple) items.push_back(term_of(tables, level - 1, tables[level - 1]->representative(e)));
  return Term(std::move(items));
}

Tuple points_of(const std::vector<CollapseTable*>& tables, std::size_t level, const Term& t) {
  if (level == 0) return t.flat();
  Tuple out;
  for (const Term& item : t.items()) {
    out.push_back(tables[level - 1]->index_of(points_of(tables, level - 1, item)));
  }
  return out;
}

/// Replaces every subterm `levels` below the root by fn(subterm).
Term apply_inner(const Term& t, std::size_t levels, const std::function<Elem(const Term&)>& fn) {
  if (levels == 0) return Term(fn(t));
  if (t.is_leaf()) throw DecodeError("term too shallow: " + to_string(t));
  std::vector<Term> items;
  for (const Term& item : t.items()) items.push_back(apply_inner(item, levels - 1, fn));
  return Term(std::move(items));
}

/// Iterated collapse on a total copy: schemes[0] on the base, schemes[k] on
/// the structure interpreted by schemes[k-1].
class Tower {
 public:
  Tower(const Presentation& base, const std::vector<const InterpScheme*>& schemes,
        std::uint64_t fuel)
      : base_(base) {
    CollapseOptions opts;
    opts.scan_limit = kHostScanLimit;
    const AtomicOracle* cur = &base_;
    for (std::size_t k = 0; k < schemes.size(); ++k) {
      tables_.push_back(std::make_unique<CollapseTable>(*schemes[k], *cur, opts));
      if (k + 1 == schemes.size()) break;
      functors_.push_back(interp_to_functor(*schemes[k]));
      images_.push_back(std::make_unique<FunctorImageOracle>(functors_.back(), *cur, fuel));
      cur = images_.back().get();
    }
    for (auto& t : tables_) raw_.push_back(t.get());
  }

  std::size_t depth() const { return raw_.size(); }
  CollapseTable& top() { return *raw_.back(); }
  /// The class q of the outermost collapse as a nested term.
  Term term(std::size_t q) { return term_of(raw_, depth() - 1, top().representative(q)); }
  std::size_t class_of(const Term& t) { return top().index_of(points_of(raw_, depth() - 1, t)); }

 private:
  PresentationOracle base_;
  std::deque<CompFunctor> functors_;
  std::vector<std::unique_ptr<FunctorImageOracle>> images_;
  std::vector<std::unique_ptr<CollapseTable>> tables_;
  std::vector<CollapseTable*> raw_;
};

Elem run_or_throw(const Functional& fn, const Presentation& pres, Elem input, std::uint64_t fuel) {
  const auto triple = OracleTriple::diagram(DiagramSource::total(pres));
  const Outcome o = run_total(fn, triple, input, fuel);
  if (!o.halted()) throw FuelExhausted(fn.name() + " ran out of fuel at " + std::to_string(input), input);
  return o.value;
}

/// The functional as a memoized total map on one copy.
MorphismOracle::MapFn memo_map(const Functional& fn, const Presentation& pres, std::uint64_t fuel) {
  auto memo = std::make_shared<std::map<Elem, Elem>>();
  return [fn, pres, fuel, memo](Elem x) {
    auto it = memo->find(x);
    if (it != memo->end()) return it->second;
    const Elem v = run_or_throw(fn, pres, x, fuel);
    memo->emplace(x, v);
    return v;
  };
}

/// Lambda over `first` then `second`, decoded by `code`.
struct LambdaParts {
  std::shared_ptr<const InterpScheme> first;
  std::shared_ptr<const InterpScheme> second;
  CompFunctor first_functor;
  CodedMap code;
  std::shared_ptr<CollapseCache> cache;
  std::uint64_t inner_fuel;
};

Functional make_lambda(const LambdaParts& parts, const std::string& name, bool inverse) {
  return Functional(
      [parts, inverse](Machine& m, Elem x) -> Elem {
        MachineSideOracle left(m, MachineSideOracle::Side::Left);
        CollapseTable t1(*parts.first, left, {}, parts.cache);
        FunctorImageOracle image(parts.first_functor, left, parts.inner_fuel);
        CollapseTable t2(*parts.second, image, {});
        const std::vector<CollapseTable*> tables{&t1, &t2};
        if (inverse) return parts.code(left, term_of(tables, 1, t2.representative(x)));
        for (std::size_t c = 0; c < kClassSearchLimit; ++c) {
          m.tick();
          if (parts.code(left, term_of(tables, 1, t2.representative(c))) == x) return c;
        }
        throw BudgetExhausted("no class decodes to " + std::to_string(x));
      },
      name);
}

}  // namespace

CodedMap decode_map(std::size_t depth) {
  return {[depth](const AtomicOracle&, const Term& t) { return decode_term(t, depth); },
          "decode" + std::to_string(depth)};
}

CodedMap after_permutation(const CodedMap& m, const FinMap& pi) {
  const auto p = MorphismOracle::from_permutation(pi);
  return {[m, p](const AtomicOracle& base, const Term& t) { return p.forward(m(base, t)); },
          m.name + "." + to_text(pi)};
}

CodedMap shifted(const CodedMap& m, Elem by) {
  return {[m, by](const AtomicOracle& base, const Term& t) { return m(base, t) + by; },
          m.name + "+" + std::to_string(by)};
}

BiInterpData identity_biinterp(const Presentation& base) {
  BiInterpData d{"identity-biinterp",
                 base,
                 base,
                 identity_scheme(base.signature()),
                 identity_scheme(base.signature()),
                 decode_map(2),
                 decode_map(2)};
  d.interpAinB.name = "id-A-in-B";
  d.interpBinA.name = "id-B-in-A";
  return d;
}

FunctorImageOracle::FunctorImageOracle(const CompFunctor& F, const AtomicOracle& base,
                                       std::uint64_t fuel)
    : F_(F),
      base_(base),
      fuel_(fuel),
      triple_(OracleTriple::diagram(DiagramSource::total(non_owning(base)))) {}

bool FunctorImageOracle::holds(std::size_t rel, std::span<const Elem> args) const {
  const std::uint64_t code = encode_fact(rel, args);
  if (auto it = memo_.find(code); it != memo_.end()) return it->second;
  const Outcome o = F_.phi.run(triple_, code, fuel_);
  if (!o.halted()) {
    base_.tick(std::numeric_limits<std::uint64_t>::max());
    throw FuelExhausted(F_.name + ": fact " + std::to_string(code) + " unresolved", code);
  }
  const bool v = o.value != 0;
  memo_.emplace(code, v);
  return v;
}

BiTransformData biinterp_to_bitransform(const BiInterpData& d, std::uint64_t inner_fuel) {
  auto ab = std::make_shared<const InterpScheme>(d.interpAinB);
  auto ba = std::make_shared<const InterpScheme>(d.interpBinA);
  BiTransformData t;
  t.F = interp_to_functor(*ba);
  t.G = interp_to_functor(*ab);
  const LambdaParts pa{ba, ab, t.F, d.g, make_collapse_cache(), inner_fuel};
  const LambdaParts pb{ab, ba, t.G, d.h, make_collapse_cache(), inner_fuel};
  t.lambdaA = make_lambda(pa, d.name + ".LambdaA", false);
  t.lambdaA_inverse = make_lambda(pa, d.name + ".LambdaA^-1", true);
  t.lambdaB = make_lambda(pb, d.name + ".LambdaB", false);
  t.lambdaB_inverse = make_lambda(pb, d.name + ".LambdaB^-1", true);
  return t;
}

Functional twist_output(const Functional& f, Elem a, Elem b) {
  return Functional(
      [f, a, b](Machine& m, Elem x) -> Elem {
        const Elem v = f.call(m, x);
        return v == a ? b : v == b ? a : v;
      },
      f.name() + ".twist(" + std::to_string(a) + " " + std::to_string(b) + ")");
}

void BiReport::merge(const BiReport& other) {
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  points_checked += other.points_checked;
  fuel_failures += other.fuel_failures;
}

namespace {

/// One direction of the pseudo-inverse check: H(lam^X) against mu^{H(X)},
/// where lam^X : X -> K(H(X)) and mu^Y : Y -> H(K(Y)).
void pseudo_inverse_side(const char* label, const CompFunctor& H, const CompFunctor& K,
                         const Functional& lam, const Functional& lam_inv, const Functional& mu,
                         const std::vector<Presentation>& samples, std::size_t prefix,
                         std::uint64_t fuel, BiReport& report) {
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Presentation& X = samples[s];
    const Presentation HX = apply_to_presentation(H, X, fuel);
    const Presentation KHX = apply_to_presentation(K, HX, fuel);
    const MorphismOracle lam_m(memo_map(lam, X, fuel), memo_map(lam_inv, X, fuel), lam.name());
    const MorphismOracle Hlam = apply_to_morphism(H, X, lam_m, KHX, fuel);
    const auto mu_map = memo_map(mu, HX, fuel);
    for (Elem i = 0; i < prefix; ++i) {
      ++report.points_checked;
      try {
        const Elem lhs = Hlam.forward(i);
        const Elem rhs = mu_map(i);
        if (lhs != rhs) {
          report.failures.push_back({label, s, i,
                                     H.name + "(" + lam.name() + ")(" + std::to_string(i) +
                                         ")=" + std::to_string(lhs) + " " + mu.name() + "(" +
                                         std::to_string(i) + ")=" + std::to_string(rhs)});
        }
      } catch (const FuelExhausted&) {
        ++report.fuel_failures;
      } catch (const BudgetExhausted&) {
        ++report.fuel_failures;
      }
    }
  }
}

}  // namespace

BiReport check_pseudo_inverse(const BiTransformData& t, const std::vector<Presentation>& a_samples,
                              const std::vector<Presentation>& b_samples, std::size_t prefix,
                              std::uint64_t fuel) {
  BiReport report;
  pseudo_inverse_side("pseudo-inverse-A", t.F, t.G, t.lambdaA, t.lambdaA_inverse, t.lambdaB,
                      a_samples, prefix, fuel, report);
  pseudo_inverse_side("pseudo-inverse-B", t.G, t.F, t.lambdaB, t.lambdaB_inverse, t.lambdaA,
                      b_samples, prefix, fuel, report);
  return report;
}

BiReport check_effective_iso_identity(const CompFunctor& F, const CompFunctor& G,
                                      const Functional& lambda,
                                      const std::vector<Presentation>& samples,
                                      const std::vector<FinMap>& morphisms, std::size_t prefix,
                                      std::uint64_t fuel) {
  BiReport report;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Presentation& X = samples[s];
    const auto lam = memo_map(lambda, X, fuel);

    // bijectivity on the prefix
    try {
      std::map<Elem, Elem> seen;  // value -> point
      std::set<Elem> missing;
      for (Elem n = 0; n < prefix; ++n) missing.insert(n);
      for (Elem a = 0; a < 4 * prefix && (a < prefix || !missing.empty()); ++a) {
        const Elem v = lam(a);
        auto [it, fresh] = seen.emplace(v, a);
        if (!fresh) {
          report.failures.push_back({"bijective", s, a,
                                     "lambda(" + std::to_string(it->second) + ")=lambda(" +
                                         std::to_string(a) + ")=" + std::to_string(v)});
        }
        missing.erase(v);
      }
      for (Elem n : missing) {
        report.failures.push_back({"bijective", s, n,
                                   std::to_string(n) + " not hit below " +
                                       std::to_string(4 * prefix)});
      }
    } catch (const FuelExhausted&) {
      ++report.fuel_failures;
    } catch (const BudgetExhausted&) {
      ++report.fuel_failures;
    }

    for (const FinMap& j : morphisms) {
      const auto jm = MorphismOracle::from_permutation(j);
      const Presentation Xh = pull_back(X, jm.inverse());
      const Presentation FX = apply_to_presentation(F, X, fuel);
      const Presentation FXh = apply_to_presentation(F, Xh, fuel);
      const MorphismOracle Fj = apply_to_morphism(F, X, jm, Xh, fuel);
      const MorphismOracle GFj = apply_to_morphism(G, FX, Fj, FXh, fuel);
      const auto lam_h = memo_map(lambda, Xh, fuel);
      for (Elem a = 0; a < prefix; ++a) {
        ++report.points_checked;
        try {
          const Elem lhs = GFj.forward(lam(a));
          const Elem rhs = lam_h(jm.forward(a));
          if (lhs != rhs) {
            report.failures.push_back(
                {"naturality", s, a,
                 "j=" + to_text(j) + " G(F(j))(lambda(" + std::to_string(a) +
                     "))=" + std::to_string(lhs) + " lambda'(j(" + std::to_string(a) +
                     "))=" + std::to_string(rhs)});
          }
        } catch (const FuelExhausted&) {
          ++report.fuel_failures;
        } catch (const BudgetExhausted&) {
          ++report.fuel_failures;
        }
      }
    }
  }
  return report;
}

namespace {

/// g(alpha~~(w)) = alpha(h~(w)) over the classes w of the depth-3 tower on
/// `home`, with g read over `other`.
void char_side(const char* label, const Presentation& home, const Presentation& other,
               const InterpScheme& s1, const InterpScheme& s2, const CodedMap& alpha,
               const CodedMap& g, const CodedMap& h, std::size_t prefix, std::uint64_t fuel,
               BiReport& report) {
  Tower tower(home, {&s1, &s2, &s1}, fuel);
  const PresentationOracle home_o(home);
  const PresentationOracle other_o(other);
  const auto a_fn = [&](const Term& t) { return alpha(home_o, t); };
  const auto h_fn = [&](const Term& t) { return h(home_o, t); };
  for (std::size_t q = 0; q < prefix; ++q) {
    ++report.points_checked;
    try {
      const Term w = tower.term(q);
      const Elem lhs = g(other_o, apply_inner(w, 2, a_fn));
      const Elem rhs = alpha(home_o, apply_inner(w, 1, h_fn));
      if (lhs != rhs) {
        report.failures.push_back({label, 0, q,
                                   "w=" + to_string(w) + " " + g.name + "=" + std::to_string(lhs) +
                                       " " + alpha.name + "=" + std::to_string(rhs)});
      }
    } catch (const DecodeError& e) {
      report.failures.push_back({label, 0, q, e.what()});
    } catch (const FuelExhausted&) {
      ++report.fuel_failures;
    } catch (const BudgetExhausted&) {
      ++report.fuel_failures;
    }
  }
}

}  // namespace

BiReport check_char_conditions(const BiInterpData& d, const CodedMap& alpha,
                               const CodedMap& beta, std::size_t prefix, std::uint64_t fuel) {
  BiReport report;
  char_side("char-alpha", d.b_base, d.a_base, d.interpAinB, d.interpBinA, alpha, d.g, d.h, prefix,
            fuel, report);
  char_side("char-beta", d.a_base, d.b_base, d.interpBinA, d.interpAinB, beta, d.h, d.g, prefix,
            fuel, report);
  return report;
}

BiReport check_theta_equivariance(const BiInterpData& d, const BiTransformData& t,
                                  const std::vector<Presentation>& samples,
                                  const std::vector<FinMap>& morphisms, std::size_t prefix,
                                  std::uint64_t fuel) {
  BiReport report;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Presentation& X = samples[s];
    Tower tx(X, {&d.interpBinA, &d.interpAinB}, fuel);
    const auto lam = memo_map(t.lambdaA, X, fuel);
    for (const FinMap& j : morphisms) {
      const auto jm = MorphismOracle::from_permutation(j);
      const Presentation Xh = pull_back(X, jm.inverse());
      Tower th(Xh, {&d.interpBinA, &d.interpAinB}, fuel);
      const auto lam_h = memo_map(t.lambdaA, Xh, fuel);
      for (Elem a = 0; a < prefix; ++a) {
        ++report.points_checked;
        try {
          const Term theta = tx.term(lam(a));
          const std::size_t moved = th.class_of(lift_term([&](Elem e) { return jm.forward(e); }, theta));
          const Elem expected = lam_h(jm.forward(a));
          if (moved != expected) {
            report.failures.push_back({"theta", s, a,
                                       "j=" + to_text(j) + " class(j~~(Theta(" +
                                           std::to_string(a) + ")))=" + std::to_string(moved) +
                                           " Theta'(j(" + std::to_string(a) +
                                           "))=" + std::to_string(expected)});
          }
        } catch (const FuelExhausted&) {
          ++report.fuel_failures;
        } catch (const BudgetExhausted&) {
          ++report.fuel_failures;
        }
      }
    }
  }
  return report;
}

}  // namespace effint
