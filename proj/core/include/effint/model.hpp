#pragma once

// Structures presented on the natural numbers, finite diagram fragments,
// finite partial injections and isomorphism oracles.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace effint {

using Elem = std::uint64_t;
using Tuple = std::vector<Elem>;

/// Relational signature. Either a finite list of arities or an unbounded
/// family given by a computable arity function.
class Signature {
 public:
  using ArityFn = std::function<std::size_t(std::size_t)>;

  Signature() = default;
  explicit Signature(std::vector<std::size_t> arities);

  static Signature empty() { return Signature{}; }
  static Signature unbounded(ArityFn arity);

  /// Number of relations, or nullopt for an unbounded signature.
  std::optional<std::size_t> relation_count() const;
  bool bounded() const { return !generator_; }

  /// Arity of relation `rel`. Throws ArgumentError if `rel` is out of range.
  std::size_t arity(std::size_t rel) const;

  /// min(k, relation_count): the relations a fragment of a k-tuple talks about.
  std::size_t relations_below(std::size_t k) const;

  const std::vector<std::size_t>& arities() const { return arities_; }

  friend bool operator==(const Signature& a, const Signature& b);

 private:
  std::vector<std::size_t> arities_;
  ArityFn generator_;
};

/// Result of reading a fact without charging for it.
enum class Peek { False, True, Unavailable, Opaque };

/// Read access to the atomic facts of a structure on domain omega.
///
/// Implementations backed by a finite oracle may refuse a query (see
/// Machine); `tick` lets evaluators charge internal steps to a fuel budget.
class AtomicOracle {
 public:
  virtual ~AtomicOracle() = default;
  virtual const Signature& signature() const = 0;
  virtual bool holds(std::size_t rel, std::span<const Elem> args) const = 0;
  virtual void tick(std::uint64_t /*steps*/ = 1) const {}
  /// Reads a fact free of charge: Unavailable when `holds` would refuse it,
  /// Opaque when the oracle cannot tell without side effects.
  virtual Peek peek(std::size_t /*rel*/, std::span<const Elem> /*args*/) const {
    return Peek::Opaque;
  }
};

/// A structure with domain omega, given by a pure total truth oracle.
class Presentation {
 public:
  using TruthFn = std::function<bool(std::size_t, std::span<const Elem>)>;

  Presentation(Signature sig, TruthFn truth, std::string name = {});

  const Signature& signature() const { return sig_; }
  const std::string& name() const { return name_; }

  /// Truth of relation `rel` on `args`. Checks the arity.
  bool holds(std::size_t rel, std::span<const Elem> args) const;
  bool holds(std::size_t rel, std::initializer_list<Elem> args) const {
    return holds(rel, std::span<const Elem>(args.begin(), args.size()));
  }

  /// Identity of the underlying oracle object (two copies of a Presentation
  /// share it).
  const void* identity() const { return truth_.get(); }

 private:
  Signature sig_;
  std::shared_ptr<const TruthFn> truth_;
  std::string name_;
};

/// Adapts a Presentation to the AtomicOracle interface.
class PresentationOracle final : public AtomicOracle {
 public:
  explicit PresentationOracle(Presentation pres) : pres_(std::move(pres)) {}
  const Signature& signature() const override { return pres_.signature(); }
  bool holds(std::size_t rel, std::span<const Elem> args) const override {
    return pres_.holds(rel, args);
  }
  Peek peek(std::size_t rel, std::span<const Elem> args) const override {
    return pres_.holds(rel, args) ? Peek::True : Peek::False;
  }
  const Presentation& presentation() const { return pres_; }

 private:
  Presentation pres_;
};

/// The empty-signature structure on omega.
Presentation pure_set();
/// (omega, <) with relation 0 the strict order.
Presentation linear_order();

/// Finite bit string recording the atomic facts about positions 0..k-1 of a
/// k-tuple, using only the first min(k, relation_count) relations.
///
/// Layout: relation index ascending, then argument tuples over {0..k-1} in
/// lexicographic order.
class DiagramFragment {
 public:
  DiagramFragment() = default;
  DiagramFragment(std::size_t length, std::vector<bool> bits);

  std::size_t length() const { return length_; }
  const std::vector<bool>& bits() const { return bits_; }

  /// Bit for relation `rel` on argument positions `args`, or nullopt when the
  /// fact lies outside this fragment.
  std::optional<bool> lookup(const Signature& sig, std::size_t rel,
                             std::span<const Elem> args) const;

  std::string bit_string() const;

  friend bool operator==(const DiagramFragment&, const DiagramFragment&) = default;

 private:
  std::size_t length_ = 0;
  std::vector<bool> bits_;
};

/// Number of bits in the fragment of a k-tuple.
std::size_t fragment_size(const Signature& sig, std::size_t k);

/// Position of the fact (rel, args) in the fragment of a k-tuple; nullopt
/// if rel >= min(k, relation_count) or some argument is >= k.
std::optional<std::size_t> fragment_bit_index(const Signature& sig, std::size_t k,
                                              std::size_t rel,
                                              std::span<const Elem> args);

/// D(b): facts about the tuple b read from `oracle`.
DiagramFragment fragment_of(const AtomicOracle& oracle, std::span<const Elem> tuple);
DiagramFragment fragment_of(const Presentation& pres, std::span<const Elem> tuple);

/// Finite partial injection omega -> omega.
class FinMap {
 public:
  FinMap() = default;
  /// Throws ArgumentError if `pairs` is not injective.
  explicit FinMap(std::map<Elem, Elem> pairs);

  /// p |-> images[p].
  static FinMap from_images(std::span<const Elem> images);
  /// The identity on {0..k-1}.
  static FinMap identity_prefix(std::size_t k);

  std::optional<Elem> at(Elem n) const;
  std::size_t size() const { return pairs_.size(); }
  const std::map<Elem, Elem>& pairs() const { return pairs_; }

  /// True iff the map is a permutation of {0..n-1}.
  bool is_permutation_of_prefix(std::size_t n) const;
  /// True iff domain and range coincide.
  bool is_permutation_of_support() const;

  FinMap inverse() const;
  /// (*this) o inner, defined wherever inner lands in this map's domain.
  FinMap after(const FinMap& inner) const;
  /// Restriction to {0..n-1}.
  FinMap restrict(std::size_t n) const;

  friend bool operator==(const FinMap&, const FinMap&) = default;

 private:
  std::map<Elem, Elem> pairs_;
};

/// An isomorphism given by a pair of total oracles omega -> omega.
class MorphismOracle {
 public:
  using MapFn = std::function<Elem(Elem)>;

  MorphismOracle(MapFn forward, MapFn backward, std::string name = {});

  static MorphismOracle identity();
  /// Finite-support permutation extended by the identity. Throws
  /// ArgumentError unless `perm` permutes its own support.
  static MorphismOracle from_permutation(const FinMap& perm);

  Elem forward(Elem n) const { return (*forward_)(n); }
  Elem backward(Elem n) const { return (*backward_)(n); }
  const std::string& name() const { return name_; }

  MorphismOracle inverse() const;
  /// (*this) o inner.
  MorphismOracle after(const MorphismOracle& inner) const;
  /// Forward map restricted to {0..n-1}.
  FinMap restrict(std::size_t n) const;

 private:
  std::shared_ptr<const MapFn> forward_;
  std::shared_ptr<const MapFn> backward_;
  std::string name_;
};

/// (x_{sigma(0)}, ..., x_{sigma(n-1)}). Throws ArgumentError unless sigma
/// permutes {0..|x|-1}.
Tuple apply_perm(std::span<const Elem> x, const FinMap& sigma);

/// (fresh, b_0..b_k, fresh x m). Throws ArgumentError if fresh occurs in b.
Tuple encode_pair(std::span<const Elem> b, std::size_t m, Elem fresh);
/// encode_pair with fresh = max(b)+1 (0 for the empty tuple).
Tuple encode_pair(std::span<const Elem> b, std::size_t m);

struct DecodedPair {
  Tuple tuple;
  std::size_t index = 0;
  friend bool operator==(const DecodedPair&, const DecodedPair&) = default;
};
/// Inverse of encode_pair. Throws DecodeError on malformed codes.
DecodedPair decode_pair(std::span<const Elem> code);
/// Non-throwing variant.
std::optional<DecodedPair> try_decode_pair(std::span<const Elem> code);

/// B_f: truth(rel, t) = pres.truth(rel, f(t)). The attached f is an
/// isomorphism from the result onto pres.
Presentation pull_back(const Presentation& pres, const MorphismOracle& f);

/// Entrywise extension of f to tuples.
std::function<Tuple(std::span<const Elem>)> lift_to_tuples(MorphismOracle::MapFn f);

/// Finitely nested tuple: an element or a tuple of terms.
struct Term {
  std::variant<Elem, std::vector<Term>> node;

  Term() : node(Elem{0}) {}
  Term(Elem e) : node(e) {}  // NOLINT(google-explicit-constructor)
  Term(std::vector<Term> items) : node(std::move(items)) {}  // NOLINT
  static Term of(std::span<const Elem> tuple);

  bool is_leaf() const { return std::holds_alternative<Elem>(node); }
  Elem leaf() const { return std::get<Elem>(node); }
  const std::vector<Term>& items() const { return std::get<std::vector<Term>>(node); }
  /// Flat tuple of leaves; throws ArgumentError unless every item is a leaf.
  Tuple flat() const;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Applies f to every leaf of a nested term.
Term lift_term(const MorphismOracle::MapFn& f, const Term& t);

std::string to_string(std::span<const Elem> tuple);
std::string to_string(const Term& t);

// --- canonical enumeration of omega^{<omega} --------------------------------

/// |t| + sum(t). Every weight class is finite.
std::uint64_t tuple_weight(std::span<const Elem> t);

/// Canonical order: by weight, then length, then lexicographically.
bool canonical_less(std::span<const Elem> a, std::span<const Elem> b);

/// Walks omega^{<omega} in canonical order, optionally skipping lengths.
class TupleEnumerator {
 public:
  using LengthFilter = std::function<bool(std::size_t)>;

  explicit TupleEnumerator(LengthFilter allow = {});
  /// Walks only the tuples (m, b, m...m) with b injective and m not in b,
  /// i.e. the well-formed pair codes, still in canonical order.
  static TupleEnumerator pair_codes();

  /// Next tuple in canonical order (the empty tuple first, if allowed).
  const Tuple& next();
  std::uint64_t produced() const { return produced_; }

 private:
  bool advance_within_length();
  void start_length();
  void fill_code_batch();

  LengthFilter allow_;
  std::uint64_t weight_ = 0;
  std::size_t length_ = 0;
  bool started_ = false;
  Tuple current_;
  std::uint64_t produced_ = 0;
  bool codes_only_ = false;
  // Codes of weight weight_, sorted; shared between copies.
  std::shared_ptr<const std::vector<Tuple>> batch_;
  std::size_t batch_pos_ = 0;
};

}  // namespace effint
