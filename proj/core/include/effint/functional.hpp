#pragma once

// Fueled oracle machines with halt / demand / out-of-fuel outcomes.
//
// A Functional is a host procedure that reads its oracle only through a
// Machine. The machine refuses queries outside a finite oracle (Demand) and
// charges every query and every tick against a fuel budget (OutOfFuel).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "effint/model.hpp"

namespace effint {

/// One side (left or right) of an oracle triple: the atomic diagram of a
/// structure on omega, either finite or total.
class DiagramSource {
 public:
  /// Finite fragment: facts about positions < fragment.length().
  static DiagramSource fragment(Signature sig, DiagramFragment frag);
  /// Total oracle.
  static DiagramSource total(std::shared_ptr<const AtomicOracle> oracle);
  static DiagramSource total(const Presentation& pres);
  /// Total oracle cut down to D(B restricted to {0..n-1}).
  static DiagramSource prefix(std::shared_ptr<const AtomicOracle> oracle, std::size_t n);

  const Signature& signature() const;
  bool is_finite() const { return kind_ != Kind::Total; }
  /// Length of the finite part; nullopt for total sources.
  std::optional<std::size_t> extent() const;

  /// Truth of the fact, or nullopt when it lies outside this source.
  std::optional<bool> lookup(std::size_t rel, std::span<const Elem> args) const;

  /// Restriction to elements (and relation indices) below n.
  DiagramSource restrict(std::size_t n) const;

  /// The total oracle behind a total or prefix source (null for fragments).
  const std::shared_ptr<const AtomicOracle>& oracle() const { return oracle_; }

 private:
  enum class Kind { Fragment, Total, Prefix };
  Kind kind_ = Kind::Fragment;
  Signature sig_;
  DiagramFragment frag_;
  std::shared_ptr<const AtomicOracle> oracle_;
  std::size_t n_ = 0;
};

/// The middle component of an oracle triple.
class MapSource {
 public:
  static MapSource finite(FinMap map);
  static MapSource total(MorphismOracle f);
  static MapSource prefix(MorphismOracle f, std::size_t n);

  bool is_finite() const { return kind_ != Kind::Total; }
  std::optional<Elem> lookup(Elem n) const;
  MapSource restrict(std::size_t n) const;
  /// Enumerates the finite part (empty for total sources).
  FinMap finite_part() const;

 private:
  enum class Kind { Finite, Total, Prefix };
  Kind kind_ = Kind::Finite;
  FinMap map_;
  std::optional<MorphismOracle> oracle_;
  std::size_t n_ = 0;
};

/// left (+) map (+) right.
struct OracleTriple {
  DiagramSource left;
  MapSource map;
  DiagramSource right;

  static OracleTriple finite(const Signature& sig_left, DiagramFragment left, FinMap map,
                             const Signature& sig_right, DiagramFragment right);
  static OracleTriple total(const Presentation& left, const MorphismOracle& map,
                            const Presentation& right);
  /// A diagram-only oracle (the map and right side are empty), as consumed by
  /// diagram transformers.
  static OracleTriple diagram(DiagramSource d);

  bool is_finite() const { return left.is_finite() && map.is_finite() && right.is_finite(); }
  OracleTriple restrict(std::size_t n) const;
};

/// True iff every fact and map entry available in `small` is available in
/// `big` with the same value. Total components of `small` are not enumerated
/// and must be matched by a total component of `big`.
bool extends(const OracleTriple& big, const OracleTriple& small);

enum class OutcomeKind { Halt, Demand, OutOfFuel };

struct Outcome {
  OutcomeKind kind = OutcomeKind::OutOfFuel;
  Elem value = 0;
  std::uint64_t fuel_used = 0;

  static Outcome halt(Elem v, std::uint64_t used = 0) { return {OutcomeKind::Halt, v, used}; }
  static Outcome demand(std::uint64_t used = 0) { return {OutcomeKind::Demand, 0, used}; }
  static Outcome out_of_fuel(std::uint64_t used = 0) {
    return {OutcomeKind::OutOfFuel, 0, used};
  }

  bool halted() const { return kind == OutcomeKind::Halt; }
  bool halted_with(Elem v) const { return halted() && value == v; }

  /// Compares kind and value; fuel usage is bookkeeping only.
  friend bool operator==(const Outcome& a, const Outcome& b) {
    return a.kind == b.kind && (a.kind != OutcomeKind::Halt || a.value == b.value);
  }
};

std::string to_string(const Outcome& o);

/// A position read by a machine, recorded when tracing is on.
struct QueryRecord {
  enum class Kind { Left, Map, Right } kind;
  std::size_t rel = 0;
  Tuple args;
  bool answered = false;
};

/// Execution context handed to a functional's procedure.
class Machine {
 public:
  Machine(const OracleTriple& oracle, std::uint64_t fuel, bool trace = false);

  bool left(std::size_t rel, std::span<const Elem> args);
  bool right(std::size_t rel, std::span<const Elem> args);
  bool left(std::size_t rel, std::initializer_list<Elem> args) {
    return left(rel, std::span<const Elem>(args.begin(), args.size()));
  }
  bool right(std::size_t rel, std::initializer_list<Elem> args) {
    return right(rel, std::span<const Elem>(args.begin(), args.size()));
  }
  Elem map(Elem n);
  /// Charges internal steps.
  void tick(std::uint64_t steps = 1);

  const Signature& left_signature() const { return oracle_.left.signature(); }
  const Signature& right_signature() const { return oracle_.right.signature(); }
  const OracleTriple& oracle() const { return oracle_; }

  std::uint64_t fuel_used() const { return used_; }
  std::uint64_t fuel_left() const { return fuel_ - used_; }
  const std::vector<QueryRecord>& trace() const { return trace_; }

  /// Runs `body`, converting this machine's own demand and fuel signals into
  /// an Outcome. Signals of other machines propagate.
  Outcome execute(const std::function<Elem(Machine&)>& body);

 private:
  void charge(std::uint64_t steps);
  [[noreturn]] void demand();

  const OracleTriple& oracle_;
  std::uint64_t fuel_;
  std::uint64_t used_ = 0;
  bool tracing_;
  std::vector<QueryRecord> trace_;
};

/// AtomicOracle view of one side of a running machine. Queries are charged
/// to the machine and may end its run with Demand.
class MachineSideOracle final : public AtomicOracle {
 public:
  enum class Side { Left, Right };
  MachineSideOracle(Machine& m, Side side) : m_(m), side_(side) {}
  const Signature& signature() const override;
  bool holds(std::size_t rel, std::span<const Elem> args) const override;
  void tick(std::uint64_t steps) const override { m_.tick(steps); }
  Peek peek(std::size_t rel, std::span<const Elem> args) const override;

 private:
  Machine& m_;
  Side side_;
};

/// A deterministic oracle procedure.
class Functional {
 public:
  using Procedure = std::function<Elem(Machine&, Elem)>;

  Functional() = default;
  Functional(Procedure proc, std::string name);

  const std::string& name() const { return name_; }
  explicit operator bool() const { return static_cast<bool>(proc_); }

  /// Runs on any oracle (finite or total) with the given fuel.
  Outcome run(const OracleTriple& oracle, Elem input, std::uint64_t fuel) const;
  /// As run, returning the queried positions as well.
  Outcome run_traced(const OracleTriple& oracle, Elem input, std::uint64_t fuel,
                     std::vector<QueryRecord>& trace) const;
  /// Invokes the procedure inside an enclosing machine (sub-functional call).
  Elem call(Machine& m, Elem input) const { return proc_(m, input); }

 private:
  Procedure proc_;
  std::string name_;
};

/// Runs on the restrictions of `oracle` to prefixes 1, 2, 4, 8, ... until
/// the run halts. Returns Halt or OutOfFuel; fuel 0 is immediately OutOfFuel.
/// Fuel bounds each individual attempt.
Outcome run_total(const Functional& fn, const OracleTriple& oracle, Elem input,
                  std::uint64_t fuel);

struct MonotoneSample {
  OracleTriple triple;
  OracleTriple extension;
  Elem input = 0;
};

struct MonotoneViolation {
  std::size_t sample = 0;
  Outcome before;
  Outcome after;
};

/// Lists every sample where a halting run changes its value, or stops
/// halting, once the oracle is extended. Throws ArgumentError when an
/// extension does not extend its triple.
std::vector<MonotoneViolation> check_monotone(const Functional& fn,
                                              const std::vector<MonotoneSample>& samples,
                                              std::uint64_t fuel);

}  // namespace effint
