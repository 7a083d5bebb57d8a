#pragma once

// Shared between the transforms and the scheme synthesis.

#include <cstdint>
#include <vector>

#include "effint/functor.hpp"
#include "effint/transforms.hpp"

namespace effint::detail {

bool injective(const Tuple& t);

/// The first l naturals occurring in neither a nor b.
Tuple first_unused(const Tuple& a, const Tuple& b, std::size_t l);

/// left = b c' d and right = c b' d, with c' = c minus b and b' = b minus c
/// in tuple order, and sigma(p) = q where left[p] == right[q].
struct EquivGeometry {
  Tuple left;
  Tuple right;
  FinMap sigma;
};
EquivGeometry equiv_geometry(const Tuple& b, const Tuple& c, const Tuple& d);

/// Permutation of {0..n-1} sending positions 0..|b|-1 to b and the rest, in
/// increasing order, to the remaining elements below n.
Tuple initial_segment_images(const Tuple& b, std::size_t n);

enum class RunClass { Pos, Neg, Skip, Pending };

struct Classified {
  RunClass cls = RunClass::Pending;
  std::uint64_t used = 0;
  Elem forward = 0;
  Elem backward = 0;
};

/// Runs several functionals in sequence against one fuel allowance.
class FuelPool {
 public:
  explicit FuelPool(std::uint64_t fuel) : fuel_(fuel) {}
  Outcome run(const Functional& fn, const OracleTriple& oracle, Elem input);
  std::uint64_t used() const { return used_; }

 private:
  std::uint64_t fuel_;
  std::uint64_t used_ = 0;
};

/// phi_star on (dl, sigma, dr) at i, then on (dr, sigma^-1, dl) at j.
/// Pos: both return the expected value. Neg: one returns another value.
/// Skip: a run demands beyond the fragments. Pending: fuel ran out.
Classified equiv_runs(const CompFunctor& F, const DiagramFragment& dl, const FinMap& sigma,
                      const DiagramFragment& dr, Elem i, Elem j, std::uint64_t fuel);

/// phi_star on D(b) (+) id (+) D(b) at i.
Classified dom_run(const CompFunctor& F, const DiagramFragment& db, Elem i, std::uint64_t fuel);

/// Normalises each (lefts[s], is[s]) onto c (lefts[s] lists the elements of c
/// in another order via sigmas[s]), checks the normal forms, then asks phi on
/// D(c) about rel. Pos / Neg: phi answered true / false.
Classified rel_runs(const CompFunctor& F, std::size_t rel, const DiagramFragment& dc,
                    const std::vector<DiagramFragment>& lefts, const std::vector<FinMap>& sigmas,
                    const Tuple& is, std::uint64_t fuel, Tuple* normalised = nullptr);

}  // namespace effint::detail
