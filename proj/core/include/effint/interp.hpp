#pragma once

// Interpretation schemes: disjunctions of existential diagram conditions
// defining a domain of coded tuples, an equivalence on it, and relations.
//
// Every scheme input is a list of blocks (one tuple per argument: one block
// for the domain, two for the equivalence, arity(i) blocks for relation i).
// A condition applies to inputs whose block lengths equal its shape.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "effint/model.hpp"

namespace effint {

/// (+|-) rel j args... or (+|-) eq a b. Arguments are positions into the
/// concatenation of the free blocks followed by the witnesses.
struct Literal {
  bool positive = true;
  bool is_eq = false;
  std::size_t rel = 0;
  std::vector<std::size_t> args;

  static Literal eq(std::size_t a, std::size_t b, bool positive = true) {
    return {positive, true, 0, {a, b}};
  }
  static Literal neq(std::size_t a, std::size_t b) { return eq(a, b, false); }
  static Literal relation(std::size_t rel, std::vector<std::size_t> args, bool positive = true) {
    return {positive, false, rel, std::move(args)};
  }

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// One disjunct: exists s (conjunction of literals over free blocks and s).
struct ExistentialCondition {
  std::vector<std::size_t> shape;
  /// Applies to every input shape that no other condition on the same side
  /// lists explicitly (the shape field is then empty).
  bool wildcard = false;
  std::size_t witness_count = 0;
  std::vector<Literal> literals;

  std::size_t free_arity() const;
  /// Throws ArgumentError if a position or relation index is out of range.
  void validate(const Signature& sig) const;

  friend bool operator==(const ExistentialCondition&, const ExistentialCondition&) = default;
};

/// The input of a scheme: a list of blocks.
using Blocks = std::vector<Tuple>;

std::vector<std::size_t> shape_of(const Blocks& blocks);
Tuple flatten(const Blocks& blocks);

/// Disjuncts generated for one input. The list returned for level L is a
/// prefix of the list returned for level L+1.
class DisjunctCursor {
 public:
  virtual ~DisjunctCursor() = default;
  virtual const std::vector<ExistentialCondition>& at_level(std::size_t level) = 0;
};

/// A computable disjunction of existential conditions.
///
/// Listed schemes hold a finite vector. Generated schemes produce, for a
/// given input, the disjuncts that can possibly apply to it, level by level.
class SigmaScheme {
 public:
  using Generator = std::function<std::unique_ptr<DisjunctCursor>(const Blocks& input,
                                                                  const AtomicOracle& oracle)>;

  SigmaScheme() = default;
  static SigmaScheme listed(std::vector<ExistentialCondition> conditions);
  static SigmaScheme generated(Generator gen, std::string label);

  bool is_listed() const { return !gen_; }
  const std::vector<ExistentialCondition>& conditions() const { return listed_; }
  const std::string& label() const { return label_; }

  /// The disjuncts applicable to `input` at `level`, in enumeration order.
  std::vector<ExistentialCondition> applicable(const Blocks& input, const AtomicOracle& oracle,
                                               std::size_t level) const;
  /// Cursor over the generated disjuncts (generated schemes only).
  std::unique_ptr<DisjunctCursor> cursor(const Blocks& input, const AtomicOracle& oracle) const;
  /// Listed schemes never change with the level.
  bool level_independent() const { return is_listed(); }

  friend bool operator==(const SigmaScheme& a, const SigmaScheme& b);

 private:
  std::vector<ExistentialCondition> listed_;
  Generator gen_;
  std::string label_;
};

struct DeltaScheme {
  SigmaScheme positive;
  SigmaScheme negative;
  friend bool operator==(const DeltaScheme&, const DeltaScheme&) = default;
};

struct InterpScheme {
  std::string name;
  Signature source;
  Signature target;
  DeltaScheme dom;
  DeltaScheme equiv;
  std::vector<DeltaScheme> relations;
  /// Promise that every domain member is a well-formed pair code
  /// (m, b, m...m) with b injective; the collapse then skips other tuples.
  /// Not part of the text form.
  bool pair_coded_domain = false;

  /// Checks relation count against the target signature and validates every
  /// listed condition.
  void validate() const;

  friend bool operator==(const InterpScheme&, const InterpScheme&) = default;
};

/// Search bounds for decide_delta. max_rounds == 0 means no round limit (the
/// oracle's own fuel is then the only bound).
struct DeltaBudget {
  std::size_t max_rounds = 24;
  std::uint64_t max_tuples = 1u << 22;
};

enum class Verdict { In, Out, Unknown };
std::string to_string(Verdict v);

struct DeltaDecision {
  Verdict verdict = Verdict::Unknown;
  std::size_t round = 0;
  std::size_t disjunct = 0;
  Tuple witness;
};

/// True iff some witness tuple over {0..witness_bound-1} satisfies every
/// literal of c on the free tuple x (x's length must equal c's free arity).
bool sat_condition(const AtomicOracle& oracle, const ExistentialCondition& c,
                   std::span<const Elem> x, std::size_t witness_bound);
bool sat_condition(const Presentation& pres, const ExistentialCondition& c,
                   std::span<const Elem> x, std::size_t witness_bound);

/// Earliest round at which one side fires. Disjunct d is tried with witness
/// bound r - d in round r. Throws SchemeUnsound if both sides fire in the
/// same round.
DeltaDecision decide_delta(const AtomicOracle& oracle, const DeltaScheme& d, const Blocks& input,
                           const DeltaBudget& budget);
DeltaDecision decide_delta(const Presentation& pres, const DeltaScheme& d, const Blocks& input,
                           const DeltaBudget& budget);

/// Round at which a single side fires, or nullopt within the budget.
std::optional<DeltaDecision> sigma_fires(const AtomicOracle& oracle, const SigmaScheme& s,
                                         const Blocks& input, const DeltaBudget& budget);

struct TupleBound {
  std::size_t max_length = 3;
  Elem entry_bound = 4;  // entries < entry_bound
};

struct MemberList {
  std::vector<Tuple> members;
  std::vector<Tuple> unknown;
};

/// Classifies every single-block input within the bound, in canonical order.
MemberList enumerate_members(const AtomicOracle& oracle, const DeltaScheme& d,
                             const TupleBound& bound, const DeltaBudget& budget);
MemberList enumerate_members(const Presentation& pres, const DeltaScheme& d,
                             const TupleBound& bound, const DeltaBudget& budget);

/// All tuples of length <= max_length with entries < entry_bound, in
/// canonical order.
std::vector<Tuple> tuples_within(const TupleBound& bound);

}  // namespace effint
