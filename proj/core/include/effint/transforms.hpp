#pragma once

// From a computable functor back to an interpretation, and the natural
// isomorphism between a functor and its round trip.
//
// A point (b, i) of the domain stands for point i of F applied to any copy
// in which b sits at positions 0..|b|-1.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "effint/collapse.hpp"
#include "effint/functor.hpp"
#include "effint/interp.hpp"

namespace effint {

struct DomPoint {
  Tuple b;
  Elem i = 0;
  /// Fuel at which phi_star halted with value i on D(b) (+) id (+) D(b).
  std::uint64_t certified_fuel = 0;

  /// encode_pair(b, i) with marker max(b)+1.
  Tuple code() const { return encode_pair(b, i); }
  friend bool operator==(const DomPoint& x, const DomPoint& y) { return x.b == y.b && x.i == y.i; }
};

std::string to_string(const DomPoint& p);

struct DomDecision {
  Verdict verdict = Verdict::Unknown;
  Outcome outcome;
};

/// The oracle D(b) (+) id_k (+) D(b) for k = |b|.
OracleTriple dom_triple(const CompFunctor& F, const Presentation& pres, const Tuple& b);

/// In iff phi_star halts with i on D(b) (+) id (+) D(b); Out if it halts
/// with another value, demands beyond the finite oracle, or b repeats an
/// element; Unknown if it runs out of fuel.
DomDecision dom_contains(const CompFunctor& F, const Presentation& pres, const Tuple& b, Elem i,
                         std::uint64_t fuel);

/// The point with its certificate when dom_contains says In.
std::optional<DomPoint> certify(const CompFunctor& F, const Presentation& pres, const Tuple& b,
                                Elem i, std::uint64_t fuel);

struct EquivWitness {
  Tuple d;
  FinMap sigma;
  Elem forward_value = 0;
  Elem backward_value = 0;
};

enum class EquivVerdict { Equivalent, Inequivalent, Unknown };
std::string to_string(EquivVerdict v);

struct EquivResult {
  EquivVerdict verdict = EquivVerdict::Unknown;
  EquivWitness witness;
};

struct EquivBudget {
  /// Largest number of extra elements d tried.
  std::size_t max_extra = 12;
  /// Fuel for each pair of phi_star runs.
  std::uint64_t fuel = std::uint64_t{1} << 24;
  /// Re-checks the verdict with longer and rearranged d and throws
  /// FunctorBroken on disagreement.
  bool strict = false;
};

/// Searches d = the first l naturals outside b and c, for l = 0, 1, ...,
/// until both phi_star runs converge (equivalent) or one converges to the
/// wrong value (inequivalent).
EquivResult equiv_decide(const CompFunctor& F, const DomPoint& p, const DomPoint& q,
                         const Presentation& pres, const EquivBudget& budget);

struct RelBudget {
  /// Largest initial segment B|n tried.
  std::size_t max_prefix = 64;
  std::uint64_t fuel = std::uint64_t{1} << 24;
  EquivBudget equiv;
  /// Re-checks the verdict on a longer initial segment and throws
  /// FunctorBroken on disagreement.
  bool strict = false;
};

struct RelResult {
  /// In: the tuple is in R_rel; Out: it is in the complement Q_rel.
  Verdict verdict = Verdict::Unknown;
  std::size_t prefix = 0;
  /// The points of F(pres) the arguments normalise to.
  Tuple normalised;
};

/// Normalises each point to (B|n, j) and asks phi on D(B|n) whether rel
/// holds of the j's, growing n until phi answers.
RelResult rel_decide(const CompFunctor& F, std::size_t rel, const std::vector<DomPoint>& points,
                     const Presentation& pres, const RelBudget& budget);

/// (B|n, i) for the least n with (B|n, i) in the domain.
DomPoint canonical_embed(const CompFunctor& F, const Presentation& pres, Elem i,
                         std::uint64_t fuel, std::size_t max_prefix = 256);

// --- synthesis --------------------------------------------------------------

struct SynthesisOptions {
  /// phi and phi_star runs behind a disjunct get base_fuel << level fuel at
  /// enumeration level `level`.
  std::uint64_t base_fuel = std::uint64_t{1} << 14;
  std::size_t max_level = 24;
  /// Largest number of existential witnesses tried for a disjunct.
  std::size_t max_witnesses = 12;
};

/// Interpretation scheme whose disjuncts are the finite diagram conditions
/// on which F's functionals converge. Disjuncts are generated lazily and
/// memoized; the scheme is not serializable.
InterpScheme functor_to_interp(const CompFunctor& F, SynthesisOptions options = {});

// --- the natural isomorphism ------------------------------------------------

/// Evaluates Lambda^B = tau^-1 . Frak for the round trip
/// I^F = interp_to_functor(functor_to_interp(F)). Collapse tables are kept
/// per presentation.
class LambdaEvaluator {
 public:
  explicit LambdaEvaluator(CompFunctor F, SynthesisOptions options = {});
  ~LambdaEvaluator();

  const CompFunctor& functor() const { return F_; }
  const InterpScheme& scheme() const { return *scheme_; }
  const CompFunctor& round_trip() const { return IF_; }

  /// Lambda^pres(i): the collapse index of the class of Frak(i).
  Elem lambda(const Presentation& pres, Elem i, std::uint64_t fuel);
  /// Lambda^pres as a functional reading D(pres) on the left.
  Functional as_functional(std::uint64_t inner_fuel) const;

  /// Representative of class n in the round trip's collapse on pres.
  Tuple class_representative(const Presentation& pres, std::size_t n);

 private:
  struct Table;
  Table& table_for(const Presentation& pres);

  CompFunctor F_;
  std::shared_ptr<const InterpScheme> scheme_;
  CompFunctor IF_;
  std::shared_ptr<CollapseCache> cache_;
  std::map<const void*, std::unique_ptr<Table>> tables_;
};

Elem natural_iso_lambda(const CompFunctor& F, const Presentation& pres, Elem i,
                        std::uint64_t fuel);

struct SquareMismatch {
  Elem point = 0;
  Elem lhs = 0;
  Elem rhs = 0;
  std::string detail;
};

struct SquareReport {
  std::vector<SquareMismatch> mismatches;
  std::size_t fuel_failures = 0;
  bool ok() const { return mismatches.empty() && fuel_failures == 0; }
};

/// Compares Lambda^{pres2}(F(h)(i)) with I^F(h)(Lambda^{pres1}(i)) for
/// i < prefix, where h : pres1 -> pres2.
SquareReport check_natural_square(LambdaEvaluator& lambda, const Presentation& pres1,
                                  const Presentation& pres2, const MorphismOracle& h,
                                  std::size_t prefix, std::uint64_t fuel);
SquareReport check_natural_square(const CompFunctor& F, const Presentation& pres1,
                                  const Presentation& pres2, const MorphismOracle& h,
                                  std::size_t prefix, std::uint64_t fuel);

}  // namespace effint
