#pragma once

// Computable functors as a pair of functionals: phi transforms diagrams,
// phi_star transforms isomorphisms.
//
// phi reads the left diagram of its oracle and receives a fact code
// encode_fact(rel, args) as input; it halts with 1 (true) or 0 (false).
// phi_star reads D(A) (+) f (+) D(B) and maps a point of F(A) to a point of
// F(B).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "effint/functional.hpp"
#include "effint/model.hpp"

namespace effint {

struct CompFunctor {
  std::string name;
  Signature source;
  Signature target;
  Functional phi;
  Functional phi_star;
};

/// Cantor pairing; throws ArgumentError on overflow.
std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z);

/// cantor(rel, pack(args)) where pack() = 0, pack(a) = a and
/// pack(a, rest...) = cantor(a, pack(rest...)).
std::uint64_t encode_fact(std::size_t rel, std::span<const Elem> args);
/// Inverse of encode_fact; the arity comes from `sig`. Returns nullopt when
/// the relation index is outside a finite signature.
std::optional<std::pair<std::size_t, Tuple>> decode_fact(std::uint64_t code, const Signature& sig);

/// F(pres) as a lazily evaluated, memoized presentation. Queries that run
/// out of fuel throw FuelExhausted carrying the fact code.
Presentation apply_to_presentation(const CompFunctor& F, const Presentation& pres,
                                   std::uint64_t fuel);

/// F(f) : F(presA) -> F(presB) for an isomorphism f : presA -> presB. The
/// backward direction runs phi_star on D(presB) (+) f^-1 (+) D(presA).
MorphismOracle apply_to_morphism(const CompFunctor& F, const Presentation& presA,
                                 const MorphismOracle& f, const Presentation& presB,
                                 std::uint64_t fuel);

/// A pair (f, g) of finite-support permutations. The law check builds the
/// copies X = pres, Y = pres pulled back along g^-1 and Z = Y pulled back
/// along f^-1, so that g : X -> Y and f : Y -> Z.
struct MorphismPair {
  FinMap f;
  FinMap g;
};

struct LawViolation {
  std::size_t sample = 0;
  std::string law;  // "identity", "composition", "inverse" or "fuel"
  Elem point = 0;
  std::string detail;
};

struct LawReport {
  std::vector<LawViolation> violations;
  std::size_t fuel_failures = 0;
  std::size_t points_checked = 0;
  bool ok() const { return violations.empty() && fuel_failures == 0; }
};

LawReport check_functor_laws(const CompFunctor& F, const Presentation& pres,
                             const std::vector<MorphismPair>& samples, std::size_t prefix_length,
                             std::uint64_t fuel);

/// The functor that always outputs `copy` and maps every isomorphism to the
/// identity, reading no oracle.
CompFunctor constant_functor(const Presentation& copy, Signature source);

/// phi copies the input diagram, phi_star copies the map.
CompFunctor identity_functor(const Signature& sig);

/// All finite-support permutations whose support lies in {0..n-1}.
std::vector<FinMap> permutations_of_prefix(std::size_t n);

}  // namespace effint
