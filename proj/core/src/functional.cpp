#include "effint/functional.hpp"

#include <limits>

#include "effint/errors.hpp"

namespace effint {

namespace {

// Thrown through user procedures; caught by the owning machine only.
struct DemandSignal {
  const Machine* owner;
};
struct FuelSignal {
  const Machine* owner;
};

bool args_below(std::span<const Elem> args, std::size_t n) {
  for (Elem a : args) {
    if (a >= n) return false;
  }
  return true;
}

}  // namespace

// --- DiagramSource ----------------------------------------------------------

DiagramSource DiagramSource::fragment(Signature sig, DiagramFragment frag) {
  if (frag.bits().size() != fragment_size(sig, frag.length())) {
    throw ArgumentError("fragment size does not match its signature");
  }
  DiagramSource s;
  s.kind_ = Kind::Fragment;
  s.sig_ = std::move(sig);
  s.frag_ = std::move(frag);
  return s;
}

DiagramSource DiagramSource::total(std::shared_ptr<const AtomicOracle> oracle) {
  DiagramSource s;
  s.kind_ = Kind::Total;
  s.sig_ = oracle->signature();
  s.oracle_ = std::move(oracle);
  return s;
}

DiagramSource DiagramSource::total(const Presentation& pres) {
  return total(std::make_shared<PresentationOracle>(pres));
}

DiagramSource DiagramSource::prefix(std::shared_ptr<const AtomicOracle> oracle,
                                    std::size_t n) {
  DiagramSource s = total(std::move(oracle));
  s.kind_ = Kind::Prefix;
  s.n_ = n;
  return s;
}

const Signature& DiagramSource::signature() const { return sig_; }

std::optional<std::size_t> DiagramSource::extent() const {
  switch (kind_) {
    case Kind::Fragment: return frag_.length();
    case Kind::Prefix: return n_;
    case Kind::Total: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<bool> DiagramSource::lookup(std::size_t rel, std::span<const Elem> args) const {
  switch (kind_) {
    case Kind::Fragment:
      if (rel >= sig_.relations_below(frag_.length())) return std::nullopt;
      if (sig_.arity(rel) != args.size()) throw ArgumentError("arity mismatch in query");
      return frag_.lookup(sig_, rel, args);
    case Kind::Prefix:
      if (rel >= sig_.relations_below(n_) || !args_below(args, n_)) return std::nullopt;
      return oracle_->holds(rel, args);
    case Kind::Total:
      return oracle_->holds(rel, args);
  }
  return std::nullopt;
}

DiagramSource DiagramSource::restrict(std::size_t n) const {
  switch (kind_) {
    case Kind::Total: return prefix(oracle_, n);
    case Kind::Prefix: return prefix(oracle_, std::min(n, n_));
    case Kind::Fragment: {
      if (n >= frag_.length()) return *this;
      std::vector<bool> bits;
      bits.reserve(fragment_size(sig_, n));
      Tuple args;
      for (std::size_t j = 0; j < sig_.relations_below(n); ++j) {
        const std::size_t a = sig_.arity(j);
        args.assign(a, 0);
        while (true) {
          bits.push_back(*frag_.lookup(sig_, j, args));
          std::size_t p = a;
          while (p > 0 && args[p - 1] + 1 == n) args[--p] = 0;
          if (p == 0) break;
          ++args[p - 1];
        }
      }
      return fragment(sig_, DiagramFragment(n, std::move(bits)));
    }
  }
  return *this;
}

// --- MapSource --------------------------------------------------------------

MapSource MapSource::finite(FinMap map) {
  MapSource s;
  s.kind_ = Kind::Finite;
  s.map_ = std::move(map);
  return s;
}

MapSource MapSource::total(MorphismOracle f) {
  MapSource s;
  s.kind_ = Kind::Total;
  s.oracle_ = std::move(f);
  return s;
}

MapSource MapSource::prefix(MorphismOracle f, std::size_t n) {
  MapSource s = total(std::move(f));
  s.kind_ = Kind::Prefix;
  s.n_ = n;
  return s;
}

std::optional<Elem> MapSource::lookup(Elem n) const {
  switch (kind_) {
    case Kind::Finite: return map_.at(n);
    case Kind::Prefix:
      if (n >= n_) return std::nullopt;
      return oracle_->forward(n);
    case Kind::Total: return oracle_->forward(n);
  }
  return std::nullopt;
}

MapSource MapSource::restrict(std::size_t n) const {
  switch (kind_) {
    case Kind::Finite: return finite(map_.restrict(n));
    case Kind::Prefix: return prefix(*oracle_, std::min(n, n_));
    case Kind::Total: return prefix(*oracle_, n);
  }
  return *this;
}

FinMap MapSource::finite_part() const {
  switch (kind_) {
    case Kind::Finite: return map_;
    case Kind::Prefix: return oracle_->restrict(n_);
    case Kind::Total: return FinMap{};
  }
  return FinMap{};
}

// --- OracleTriple -----------------------------------------------------------

OracleTriple OracleTriple::finite(const Signature& sig_left, DiagramFragment left, FinMap map,
                                  const Signature& sig_right, DiagramFragment right) {
  return {DiagramSource::fragment(sig_left, std::move(left)), MapSource::finite(std::move(map)),
          DiagramSource::fragment(sig_right, std::move(right))};
}

OracleTriple OracleTriple::total(const Presentation& left, const MorphismOracle& map,
                                 const Presentation& right) {
  return {DiagramSource::total(left), MapSource::total(map), DiagramSource::total(right)};
}

OracleTriple OracleTriple::diagram(DiagramSource d) {
  Signature sig = d.signature();
  return {std::move(d), MapSource::finite(FinMap{}),
          DiagramSource::fragment(std::move(sig), DiagramFragment{})};
}

OracleTriple OracleTriple::restrict(std::size_t n) const {
  return {left.restrict(n), map.restrict(n), right.restrict(n)};
}

namespace {

bool side_extends(const DiagramSource& big, const DiagramSource& small) {
  auto ext = small.extent();
  if (!ext) return !big.is_finite();
  const std::size_t n = *ext;
  const Signature& sig = small.signature();
  Tuple args;
  for (std::size_t j = 0; j < sig.relations_below(n); ++j) {
    const std::size_t a = sig.arity(j);
    args.assign(a, 0);
    while (true) {
      auto s = small.lookup(j, args);
      if (s) {
        auto b = big.lookup(j, args);
        if (!b || *b != *s) return false;
      }
      std::size_t p = a;
      while (p > 0 && args[p - 1] + 1 == n) args[--p] = 0;
      if (p == 0) break;
      ++args[p - 1];
    }
  }
  return true;
}

}  // namespace

bool extends(const OracleTriple& big, const OracleTriple& small) {
  if (!small.map.is_finite() && big.map.is_finite()) return false;
  const FinMap part = small.map.finite_part();
  for (const auto& [k, v] : part.pairs()) {
    auto b = big.map.lookup(k);
    if (!b || *b != v) return false;
  }
  return side_extends(big.left, small.left) && side_extends(big.right, small.right);
}

std::string to_string(const Outcome& o) {
  switch (o.kind) {
    case OutcomeKind::Halt: return "halt(" + std::to_string(o.value) + ")";
    case OutcomeKind::Demand: return "demand";
    case OutcomeKind::OutOfFuel: return "out-of-fuel";
  }
  return "?";
}

// --- Machine ----------------------------------------------------------------

Machine::Machine(const OracleTriple& oracle, std::uint64_t fuel, bool trace)
    : oracle_(oracle), fuel_(fuel), tracing_(trace) {}

void Machine::charge(std::uint64_t steps) {
  if (steps > fuel_ - used_) {
    used_ = fuel_;
    throw FuelSignal{this};
  }
  used_ += steps;
}

void Machine::demand() { throw DemandSignal{this}; }

bool Machine::left(std::size_t rel, std::span<const Elem> args) {
  charge(1);
  auto r = oracle_.left.lookup(rel, args);
  if (tracing_) {
    trace_.push_back({QueryRecord::Kind::Left, rel, Tuple(args.begin(), args.end()),
                      r.has_value()});
  }
  if (!r) demand();
  return *r;
}

bool Machine::right(std::size_t rel, std::span<const Elem> args) {
  charge(1);
  auto r = oracle_.right.lookup(rel, args);
  if (tracing_) {
    trace_.push_back({QueryRecord::Kind::Right, rel, Tuple(args.begin(), args.end()),
                      r.has_value()});
  }
  if (!r) demand();
  return *r;
}

Elem Machine::map(Elem n) {
  charge(1);
  auto r = oracle_.map.lookup(n);
  if (tracing_) trace_.push_back({QueryRecord::Kind::Map, 0, Tuple{n}, r.has_value()});
  if (!r) demand();
  return *r;
}

void Machine::tick(std::uint64_t steps) { charge(steps); }

Outcome Machine::execute(const std::function<Elem(Machine&)>& body) {
  try {
    Elem v = body(*this);
    return Outcome::halt(v, used_);
  } catch (const DemandSignal& s) {
    if (s.owner != this) throw;
    return Outcome::demand(used_);
  } catch (const FuelSignal& s) {
    if (s.owner != this) throw;
    return Outcome::out_of_fuel(used_);
  }
}

const Signature& MachineSideOracle::signature() const {
  return side_ == Side::Left ? m_.left_signature() : m_.right_signature();
}

bool MachineSideOracle::holds(std::size_t rel, std::span<const Elem> args) const {
  return side_ == Side::Left ? m_.left(rel, args) : m_.right(rel, args);
}

Peek MachineSideOracle::peek(std::size_t rel, std::span<const Elem> args) const {
  const auto& side = side_ == Side::Left ? m_.oracle().left : m_.oracle().right;
  auto r = side.lookup(rel, args);
  if (!r) return Peek::Unavailable;
  return *r ? Peek::True : Peek::False;
}

// --- Functional -------------------------------------------------------------

Functional::Functional(Procedure proc, std::string name)
    : proc_(std::move(proc)), name_(std::move(name)) {}

Outcome Functional::run(const OracleTriple& oracle, Elem input, std::uint64_t fuel) const {
  Machine m(oracle, fuel);
  return m.execute([&](Machine& mm) { return proc_(mm, input); });
}

Outcome Functional::run_traced(const OracleTriple& oracle, Elem input, std::uint64_t fuel,
                               std::vector<QueryRecord>& trace) const {
  Machine m(oracle, fuel, true);
  Outcome o = m.execute([&](Machine& mm) { return proc_(mm, input); });
  trace = m.trace();
  return o;
}

Outcome run_total(const Functional& fn, const OracleTriple& oracle, Elem input,
                  std::uint64_t fuel) {
  if (fuel == 0) return Outcome::out_of_fuel();
  constexpr std::size_t kMaxPrefix = std::size_t{1} << 32;
  for (std::size_t n = 1;; n *= 2) {
    Outcome o = fn.run(oracle.restrict(n), input, fuel);
    if (o.kind != OutcomeKind::Demand) return o;
    if (n >= kMaxPrefix) {
      throw BudgetExhausted(fn.name() + " keeps demanding beyond prefix " + std::to_string(n));
    }
  }
}

std::vector<MonotoneViolation> check_monotone(const Functional& fn,
                                              const std::vector<MonotoneSample>& samples,
                                              std::uint64_t fuel) {
  std::vector<MonotoneViolation> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!extends(s.extension, s.triple)) {
      throw ArgumentError("sample " + std::to_string(i) + " does not extend its triple");
    }
    Outcome before = fn.run(s.triple, s.input, fuel);
    if (!before.halted()) continue;
    Outcome after = fn.run(s.extension, s.input, fuel);
    if (!(after == before)) out.push_back({i, before, after});
  }
  return out;
}

}  // namespace effint
