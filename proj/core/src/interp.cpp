#include "effint/interp.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "effint/errors.hpp"

namespace effint {

std::size_t ExistentialCondition::free_arity() const {
  std::size_t n = 0;
  for (auto s : shape) n += s;
  return n;
}

void ExistentialCondition::validate(const Signature& sig) const {
  if (wildcard && (!shape.empty() || witness_count != 0 || !literals.empty())) {
    throw ArgumentError("a wildcard condition carries no shape, witnesses or literals");
  }
  const std::size_t total = free_arity() + witness_count;
  for (const Literal& l : literals) {
    if (l.is_eq) {
      if (l.args.size() != 2) throw ArgumentError("equality literal needs two arguments");
    } else {
      auto rc = sig.relation_count();
      if (rc && l.rel >= *rc) {
        throw ArgumentError("relation " + std::to_string(l.rel) + " not in the signature");
      }
      if (sig.arity(l.rel) != l.args.size()) {
        throw ArgumentError("relation " + std::to_string(l.rel) + " used with wrong arity");
      }
    }
    for (auto a : l.args) {
      if (a >= total) throw ArgumentError("argument position " + std::to_string(a) + " out of range");
    }
  }
}

std::vector<std::size_t> shape_of(const Blocks& blocks) {
  std::vector<std::size_t> s;
  s.reserve(blocks.size());
  for (const auto& b : blocks) s.push_back(b.size());
  return s;
}

Tuple flatten(const Blocks& blocks) {
  Tuple out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

// --- SigmaScheme ------------------------------------------------------------

SigmaScheme SigmaScheme::listed(std::vector<ExistentialCondition> conditions) {
  SigmaScheme s;
  s.listed_ = std::move(conditions);
  return s;
}

SigmaScheme SigmaScheme::generated(Generator gen, std::string label) {
  SigmaScheme s;
  s.gen_ = std::move(gen);
  s.label_ = std::move(label);
  return s;
}

std::vector<ExistentialCondition> SigmaScheme::applicable(const Blocks& input,
                                                          const AtomicOracle& oracle,
                                                          std::size_t level) const {
  if (gen_) return gen_(input, oracle)->at_level(level);
  const auto shape = shape_of(input);
  std::vector<ExistentialCondition> out;
  bool listed_shape = false;
  for (const auto& c : listed_) {
    if (!c.wildcard && c.shape == shape) {
      listed_shape = true;
      out.push_back(c);
    }
  }
  if (!listed_shape) {
    for (const auto& c : listed_) {
      if (c.wildcard) out.push_back(c);
    }
  }
  return out;
}

std::unique_ptr<DisjunctCursor> SigmaScheme::cursor(const Blocks& input,
                                                    const AtomicOracle& oracle) const {
  if (!gen_) throw ArgumentError("listed schemes have no cursor");
  return gen_(input, oracle);
}

bool operator==(const SigmaScheme& a, const SigmaScheme& b) {
  if (a.is_listed() != b.is_listed()) return false;
  if (a.is_listed()) return a.listed_ == b.listed_;
  return a.label_ == b.label_;
}

void InterpScheme::validate() const {
  auto rc = target.relation_count();
  if (!rc) throw ArgumentError("interpreted signature must be finite");
  if (relations.size() != *rc) {
    throw ArgumentError("scheme defines " + std::to_string(relations.size()) +
                        " relations, target signature has " + std::to_string(*rc));
  }
  auto check = [&](const SigmaScheme& s, std::optional<std::size_t> blocks) {
    for (const auto& c : s.conditions()) {
      c.validate(source);
      if (blocks && !c.wildcard && c.shape.size() != *blocks) {
        throw ArgumentError("condition has " + std::to_string(c.shape.size()) +
                            " blocks, expected " + std::to_string(*blocks));
      }
    }
  };
  check(dom.positive, 1);
  check(dom.negative, 1);
  check(equiv.positive, 2);
  check(equiv.negative, 2);
  for (std::size_t i = 0; i < relations.size(); ++i) {
    check(relations[i].positive, target.arity(i));
    check(relations[i].negative, target.arity(i));
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::In: return "in";
    case Verdict::Out: return "out";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

// --- evaluation -------------------------------------------------------------

namespace {

bool literal_holds(const AtomicOracle& oracle, const Literal& l, std::span<const Elem> values,
                   Tuple& scratch) {
  bool truth;
  if (l.is_eq) {
    truth = values[l.args[0]] == values[l.args[1]];
  } else {
    scratch.resize(l.args.size());
    for (std::size_t p = 0; p < l.args.size(); ++p) scratch[p] = values[l.args[p]];
    truth = oracle.holds(l.rel, scratch);
  }
  return truth == l.positive;
}

bool free_only(const Literal& l, std::size_t n) {
  return std::all_of(l.args.begin(), l.args.end(), [n](std::size_t a) { return a < n; });
}

// Per-decision state of one disjunct.
struct DisjunctState {
  bool prefiltered = false;
  bool dead = false;
  bool any_checked = false;
  std::size_t checked_bound = 0;  // all witnesses below this bound are done
};

class ConditionSearch {
 public:
  ConditionSearch(const AtomicOracle& oracle, const ExistentialCondition& c,
                  std::span<const Elem> x)
      : oracle_(oracle), c_(c), n_(x.size()) {
    values_.assign(x.begin(), x.end());
    values_.resize(n_ + c.witness_count, 0);
  }

  // Checks free-only literals; false means no witness can help.
  bool prefilter() {
    for (const Literal& l : c_.literals) {
      if (free_only(l, n_) && !literal_holds(oracle_, l, values_, scratch_)) return false;
    }
    return true;
  }

  // Searches witnesses over {0..bound-1}^m whose largest entry is >= from.
  // Returns the witness found, counting evaluated tuples in `tuples`.
  std::optional<Tuple> search(std::size_t from, std::size_t bound, std::uint64_t& tuples,
                              std::uint64_t max_tuples) {
    const std::size_t m = c_.witness_count;
    if (m == 0) {
      ++tuples;
      oracle_.tick();
      if (holds_all()) return Tuple{};
      return std::nullopt;
    }
    if (bound == 0 || from >= bound) return std::nullopt;
    std::vector<std::size_t> w(m, 0);
    while (true) {
      std::size_t mx = *std::max_element(w.begin(), w.end());
      if (mx >= from) {
        if (++tuples > max_tuples) return std::nullopt;
        oracle_.tick();
        for (std::size_t i = 0; i < m; ++i) values_[n_ + i] = w[i];
        if (holds_all()) return Tuple(values_.begin() + static_cast<std::ptrdiff_t>(n_), values_.end());
      }
      std::size_t p = m;
      while (p > 0 && w[p - 1] + 1 == bound) w[--p] = 0;
      if (p == 0) break;
      ++w[p - 1];
    }
    return std::nullopt;
  }

 private:
  bool holds_all() {
    for (const Literal& l : c_.literals) {
      if (!free_only(l, n_) && !literal_holds(oracle_, l, values_, scratch_)) return false;
    }
    return true;
  }

  const AtomicOracle& oracle_;
  const ExistentialCondition& c_;
  std::size_t n_;
  Tuple values_;
  Tuple scratch_;
};

class SideSearch {
 public:
  SideSearch(const AtomicOracle& oracle, const SigmaScheme& s, const Blocks& input)
      : oracle_(oracle), scheme_(s), input_(input), flat_(flatten(input)) {}

  // Runs round r; returns the firing decision if any.
  std::optional<DeltaDecision> round(std::size_t r, std::uint64_t& tuples,
                                     std::uint64_t max_tuples) {
    if (!fetched_) {
      if (scheme_.is_listed()) {
        listed_ = scheme_.applicable(input_, oracle_, r);
      } else {
        cursor_ = scheme_.cursor(input_, oracle_);
      }
      fetched_ = true;
    }
    const auto& conds = cursor_ ? cursor_->at_level(r) : listed_;
    states_.resize(conds.size());
    const std::size_t avail = std::min(conds.size(), r + 1);
    for (std::size_t d = 0; d < avail; ++d) {
      auto& st = states_[d];
      if (st.dead) continue;
      const auto& c = conds[d];
      if (c.free_arity() != flat_.size() && !c.wildcard) {
        st.dead = true;
        continue;
      }
      ConditionSearch cs(oracle_, c, flat_);
      if (!st.prefiltered) {
        st.prefiltered = true;
        if (!cs.prefilter()) {
          st.dead = true;
          continue;
        }
      }
      const std::size_t bound = r - d;
      std::optional<Tuple> hit;
      if (c.witness_count == 0) {
        if (st.any_checked) continue;
        hit = cs.search(0, 0, tuples, max_tuples);
        st.any_checked = true;
        if (!hit) st.dead = true;
      } else {
        const std::size_t from = st.any_checked ? st.checked_bound : 0;
        hit = cs.search(from, bound, tuples, max_tuples);
        st.any_checked = true;
        st.checked_bound = std::max(st.checked_bound, bound);
      }
      if (hit) return DeltaDecision{Verdict::Unknown, r, d, std::move(*hit)};
      if (tuples > max_tuples) return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  const AtomicOracle& oracle_;
  const SigmaScheme& scheme_;
  const Blocks& input_;
  Tuple flat_;
  bool fetched_ = false;
  std::vector<ExistentialCondition> listed_;
  std::unique_ptr<DisjunctCursor> cursor_;
  std::vector<DisjunctState> states_;
};

}  // namespace

bool sat_condition(const AtomicOracle& oracle, const ExistentialCondition& c,
                   std::span<const Elem> x, std::size_t witness_bound) {
  if (!c.wildcard && x.size() != c.free_arity()) {
    throw ArgumentError("tuple length does not match the condition's free arity");
  }
  ConditionSearch cs(oracle, c, x);
  if (!cs.prefilter()) return false;
  std::uint64_t tuples = 0;
  return cs.search(0, witness_bound, tuples, std::numeric_limits<std::uint64_t>::max())
      .has_value();
}

bool sat_condition(const Presentation& pres, const ExistentialCondition& c,
                   std::span<const Elem> x, std::size_t witness_bound) {
  return sat_condition(PresentationOracle(pres), c, x, witness_bound);
}

DeltaDecision decide_delta(const AtomicOracle& oracle, const DeltaScheme& d, const Blocks& input,
                           const DeltaBudget& budget) {
  SideSearch pos(oracle, d.positive, input);
  SideSearch neg(oracle, d.negative, input);
  std::uint64_t tuples = 0;
  for (std::size_t r = 0; budget.max_rounds == 0 || r < budget.max_rounds; ++r) {
    oracle.tick();
    auto p = pos.round(r, tuples, budget.max_tuples);
    auto n = neg.round(r, tuples, budget.max_tuples);
    if (p && n) {
      std::string what = "both sides fire on ";
      for (const auto& b : input) what += to_string(b);
      throw SchemeUnsound(what + " in round " + std::to_string(r));
    }
    if (p) {
      p->verdict = Verdict::In;
      return *p;
    }
    if (n) {
      n->verdict = Verdict::Out;
      return *n;
    }
    if (tuples > budget.max_tuples) break;
  }
  return DeltaDecision{};
}

DeltaDecision decide_delta(const Presentation& pres, const DeltaScheme& d, const Blocks& input,
                           const DeltaBudget& budget) {
  return decide_delta(PresentationOracle(pres), d, input, budget);
}

std::optional<DeltaDecision> sigma_fires(const AtomicOracle& oracle, const SigmaScheme& s,
                                         const Blocks& input, const DeltaBudget& budget) {
  SideSearch side(oracle, s, input);
  std::uint64_t tuples = 0;
  for (std::size_t r = 0; budget.max_rounds == 0 || r < budget.max_rounds; ++r) {
    oracle.tick();
    if (auto hit = side.round(r, tuples, budget.max_tuples)) {
      hit->verdict = Verdict::In;
      return hit;
    }
    if (tuples > budget.max_tuples) break;
  }
  return std::nullopt;
}

std::vector<Tuple> tuples_within(const TupleBound& bound) {
  std::vector<Tuple> out;
  out.emplace_back();
  std::vector<Tuple> layer{Tuple{}};
  for (std::size_t len = 1; len <= bound.max_length; ++len) {
    std::vector<Tuple> next;
    for (const auto& t : layer) {
      for (Elem e = 0; e < bound.entry_bound; ++e) {
        Tuple u = t;
        u.push_back(e);
        next.push_back(std::move(u));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Tuple& a, const Tuple& b) { return canonical_less(a, b); });
  return out;
}

MemberList enumerate_members(const AtomicOracle& oracle, const DeltaScheme& d,
                             const TupleBound& bound, const DeltaBudget& budget) {
  MemberList out;
  for (const auto& t : tuples_within(bound)) {
    auto dec = decide_delta(oracle, d, Blocks{t}, budget);
    if (dec.verdict == Verdict::In) out.members.push_back(t);
    if (dec.verdict == Verdict::Unknown) out.unknown.push_back(t);
  }
  return out;
}

MemberList enumerate_members(const Presentation& pres, const DeltaScheme& d,
                             const TupleBound& bound, const DeltaBudget& budget) {
  return enumerate_members(PresentationOracle(pres), d, bound, budget);
}

}  // namespace effint
