#pragma once

// Bi-interpretations and bi-transformations.
//
// A is interpreted in B by interpAinB (source B, target A) and B in A by
// interpBinA. F = interp_to_functor(interpBinA) : Iso(A) -> Iso(B) and
// G = interp_to_functor(interpAinB) : Iso(B) -> Iso(A).
//
// Elements of Dom_A^(Dom_B^A) are nested terms: a list of codes, each code
// a list of leaves. Maps out of such sets are CodedMaps evaluated against
// the diagram of the base copy.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "effint/collapse.hpp"
#include "effint/functor.hpp"
#include "effint/interp.hpp"

namespace effint {

struct CodedMap {
  using Fn = std::function<Elem(const AtomicOracle& base, const Term& t)>;
  Fn fn;
  std::string name;

  Elem operator()(const AtomicOracle& base, const Term& t) const { return fn(base, t); }
};

/// Reads the element a code of depth `depth` names: at every level the code
/// (m, b, m...m) with i trailing markers names b[i]. Throws DecodeError on a
/// malformed level. Depth 2 is the decoding of the double coding.
CodedMap decode_map(std::size_t depth);
/// pi . m for a finite-support permutation pi.
CodedMap after_permutation(const CodedMap& m, const FinMap& pi);
/// m + by: breaks invariance under automorphisms.
CodedMap shifted(const CodedMap& m, Elem by);

struct BiInterpData {
  std::string name;
  /// Base copies of A and B.
  Presentation a_base;
  Presentation b_base;
  InterpScheme interpAinB;
  InterpScheme interpBinA;
  /// g : Dom_A^(Dom_B^A) -> A, evaluated over a copy of A.
  CodedMap g;
  /// h : Dom_B^(Dom_A^B) -> B, evaluated over a copy of B.
  CodedMap h;
};

/// Identity schemes both ways on `base`, g = h = decode_map(2).
BiInterpData identity_biinterp(const Presentation& base);

struct BiTransformData {
  CompFunctor F;
  CompFunctor G;
  /// Lambda_A^A~ : A~ -> G(F(A~)) reading A~ on the left.
  Functional lambdaA;
  /// Lambda_B^B~ : B~ -> F(G(B~)).
  Functional lambdaB;
  Functional lambdaA_inverse;
  Functional lambdaB_inverse;
};

/// Lambda_A = Gamma^{F(A~)} . Omega~ . Theta, with Theta = g^-1 found by
/// searching the classes of the collapse on F(A~); likewise Lambda_B.
BiTransformData biinterp_to_bitransform(const BiInterpData& d,
                                        std::uint64_t inner_fuel = std::uint64_t{1} << 26);

/// F(base) as an oracle: each fact runs phi against `base`, so reads of
/// F(base) are charged to (and may demand from) whatever backs `base`.
class FunctorImageOracle final : public AtomicOracle {
 public:
  FunctorImageOracle(const CompFunctor& F, const AtomicOracle& base, std::uint64_t fuel);
  const Signature& signature() const override { return F_.target; }
  bool holds(std::size_t rel, std::span<const Elem> args) const override;
  void tick(std::uint64_t steps) const override { base_.tick(steps); }

 private:
  const CompFunctor& F_;
  const AtomicOracle& base_;
  std::uint64_t fuel_;
  OracleTriple triple_;
  mutable std::map<std::uint64_t, bool> memo_;
};

/// Post-composes a functional's outputs with the transposition (a b).
Functional twist_output(const Functional& f, Elem a, Elem b);

struct BiFailure {
  std::string check;
  std::size_t sample = 0;
  Elem point = 0;
  std::string detail;
};

struct BiReport {
  std::vector<BiFailure> failures;
  std::size_t points_checked = 0;
  std::size_t fuel_failures = 0;
  bool ok() const { return failures.empty() && fuel_failures == 0; }
  void merge(const BiReport& other);
};

/// F(Lambda_A^A~) = Lambda_B^{F(A~)} on each A sample and
/// G(Lambda_B^B~) = Lambda_A^{G(B~)} on each B sample, first `prefix` points.
BiReport check_pseudo_inverse(const BiTransformData& t, const std::vector<Presentation>& a_samples,
                              const std::vector<Presentation>& b_samples, std::size_t prefix,
                              std::uint64_t fuel);

/// lambda^X is injective on the prefix and hits every point below it, and
/// G(F(j)) . lambda^X = lambda^{j X} . j for every sampled permutation j.
BiReport check_effective_iso_identity(const CompFunctor& F, const CompFunctor& G,
                                      const Functional& lambda,
                                      const std::vector<Presentation>& samples,
                                      const std::vector<FinMap>& morphisms, std::size_t prefix,
                                      std::uint64_t fuel);

/// alpha . h~ . alpha~~^-1 = g and beta . g~ . beta~~^-1 = h, checked as
/// g(alpha~~(w)) = alpha(h~(w)) on the first `prefix` classes w of
/// Dom_A^(Dom_B^(Dom_A^B)) over the B base, and symmetrically over the A
/// base. alpha : Dom_A^B -> A and beta : Dom_B^A -> B.
BiReport check_char_conditions(const BiInterpData& d, const CodedMap& alpha,
                               const CodedMap& beta, std::size_t prefix, std::uint64_t fuel);

/// Theta^{jX} . j = j~~ . Theta^X for Theta^X = Omega~^-1 . Gamma^-1 .
/// Lambda_A^X, compared class-wise, for every sample X and permutation j.
BiReport check_theta_equivariance(const BiInterpData& d, const BiTransformData& t,
                                  const std::vector<Presentation>& samples,
                                  const std::vector<FinMap>& morphisms, std::size_t prefix,
                                  std::uint64_t fuel);

}  // namespace effint
