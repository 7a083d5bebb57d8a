#pragma once

// The collapse of an interpretation: the domain members enumerated in
// canonical order, one representative per equivalence class. Class n of the
// collapse is point n of the interpreted structure pulled back onto omega.

#include <cstdint>
#include <memory>
#include <vector>

#include "effint/functor.hpp"
#include "effint/interp.hpp"

namespace effint {

/// Shared record of earlier collapse computations for one scheme.
///
/// A table built against an oracle logs every fact it reads and every step
/// it charges. A later table replays a log whose recorded answers agree with
/// its own oracle (checked with Peek, free of charge) and charges the same
/// steps, so outcomes and fuel use are exactly those of a fresh build.
class CollapseCache;
std::shared_ptr<CollapseCache> make_collapse_cache(std::size_t max_logs = 8);

struct CollapseOptions {
  /// Budget for each domain and equivalence decision. max_rounds == 0 leaves
  /// the decisions unbounded, which is right inside a fueled machine.
  DeltaBudget budget{0, ~std::uint64_t{0}};
  /// Maximum number of candidate tuples examined (0 = unbounded).
  std::uint64_t scan_limit = 0;
};

class CollapseTable {
 public:
  CollapseTable(const InterpScheme& scheme, const AtomicOracle& oracle,
                CollapseOptions options = {}, std::shared_ptr<CollapseCache> cache = nullptr);
  ~CollapseTable();
  CollapseTable(const CollapseTable&) = delete;
  CollapseTable& operator=(const CollapseTable&) = delete;

  /// The n-th class representative, building the table as needed.
  const Tuple& representative(std::size_t n);
  /// Index of the class containing `member`. Diverges (until fuel or the
  /// scan limit runs out) if `member` is not in the domain.
  std::size_t index_of(const Tuple& member);

  /// Representatives discovered so far.
  std::vector<Tuple> representatives() const;
  std::size_t known() const { return known_; }

 private:
  friend class CollapseCache;
  struct Tape;
  void ensure(std::size_t k);
  bool replay_one();
  void go_live_at(std::size_t snap);
  void build_one();

  const InterpScheme& scheme_;
  const AtomicOracle& oracle_;
  CollapseOptions options_;
  std::shared_ptr<CollapseCache> cache_;
  std::shared_ptr<Tape> tape_;
  std::size_t known_ = 0;
  std::size_t cursor_ = 0;
  bool live_ = false;
  std::unique_ptr<TupleEnumerator> enumerator_;
  std::uint64_t scanned_ = 0;
};

/// tau(n): the n-th class representative of the collapse on `pres`.
Tuple tau(const InterpScheme& scheme, const Presentation& pres, std::size_t n,
          CollapseOptions options = {});

/// The functor F(B) = collapse of the scheme on B pulled back along tau, and
/// F(f) = tau_B^-1 . f~ . tau_A. Both functionals share a collapse cache.
CompFunctor interp_to_functor(const InterpScheme& scheme);

}  // namespace effint
