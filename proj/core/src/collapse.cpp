#include "effint/collapse.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "effint/errors.hpp"

namespace effint {

// --- logs -------------------------------------------------------------------

namespace {

struct TapeEvent {
  bool is_tick = false;
  std::uint64_t ticks = 0;
  std::size_t rel = 0;
  Tuple args;
  bool answer = false;
};

struct Snapshot {
  std::size_t event_pos = 0;
  TupleEnumerator enumerator;
  std::uint64_t scanned = 0;
};

TupleEnumerator::LengthFilter dom_lengths(const InterpScheme& scheme) {
  const auto& pos = scheme.dom.positive;
  if (!pos.is_listed()) return {};
  std::set<std::size_t> lengths;
  for (const auto& c : pos.conditions()) {
    if (c.wildcard) return {};
    lengths.insert(c.free_arity());
  }
  return [lengths](std::size_t n) { return lengths.contains(n); };
}

}  // namespace

struct CollapseTable::Tape {
  std::vector<TapeEvent> events;
  std::vector<Snapshot> snaps;  // snaps[r]: state once r representatives are known
  std::vector<Tuple> reps;
};

class CollapseCache {
 public:
  explicit CollapseCache(std::size_t max_logs) : max_(max_logs) {}

  // Removes and returns the log agreeing longest with `oracle`.
  std::shared_ptr<CollapseTable::Tape> checkout(const AtomicOracle& oracle) {
    std::lock_guard lock(mu_);
    std::size_t best = tapes_.size();
    std::size_t best_len = 0;
    for (std::size_t i = 0; i < tapes_.size(); ++i) {
      std::size_t len = agreeing_prefix(*tapes_[i], oracle);
      if (best == tapes_.size() || len > best_len) {
        best = i;
        best_len = len;
      }
      if (len == tapes_[i]->events.size()) break;
    }
    if (best == tapes_.size()) return nullptr;
    auto t = tapes_[best];
    tapes_.erase(tapes_.begin() + static_cast<std::ptrdiff_t>(best));
    return t;
  }

  void give_back(std::shared_ptr<CollapseTable::Tape> t) {
    std::lock_guard lock(mu_);
    tapes_.insert(tapes_.begin(), std::move(t));
    if (tapes_.size() > max_) {
      auto shortest = std::min_element(tapes_.begin(), tapes_.end(), [](const auto& a, const auto& b) {
        return a->reps.size() < b->reps.size();
      });
      tapes_.erase(shortest);
    }
  }

  static std::size_t agreeing_prefix(const CollapseTable::Tape& t, const AtomicOracle& oracle) {
    std::size_t i = 0;
    for (; i < t.events.size(); ++i) {
      const auto& e = t.events[i];
      if (e.is_tick) continue;
      Peek p = oracle.peek(e.rel, e.args);
      if (p == Peek::Opaque || p == Peek::Unavailable) break;
      if ((p == Peek::True) != e.answer) break;
    }
    return i;
  }

 private:
  std::mutex mu_;
  std::size_t max_;
  std::vector<std::shared_ptr<CollapseTable::Tape>> tapes_;
};

std::shared_ptr<CollapseCache> make_collapse_cache(std::size_t max_logs) {
  return std::make_shared<CollapseCache>(max_logs);
}

namespace {

// Forwards to the live oracle and appends every read and step to a log.
class RecordingOracle final : public AtomicOracle {
 public:
  RecordingOracle(const AtomicOracle& inner, std::vector<TapeEvent>& log)
      : inner_(inner), log_(log), start_(log.size()) {}
  const Signature& signature() const override { return inner_.signature(); }
  bool holds(std::size_t rel, std::span<const Elem> args) const override {
    bool a = inner_.holds(rel, args);
    log_.push_back({false, 0, rel, Tuple(args.begin(), args.end()), a});
    return a;
  }
  void tick(std::uint64_t steps) const override {
    inner_.tick(steps);
    // Never merge into an event recorded before this build started: that
    // event belongs to the previous snapshot.
    if (log_.size() > start_ && log_.back().is_tick) {
      log_.back().ticks += steps;
    } else {
      log_.push_back({true, steps, 0, {}, false});
    }
  }
  Peek peek(std::size_t rel, std::span<const Elem> args) const override {
    return inner_.peek(rel, args);
  }

 private:
  const AtomicOracle& inner_;
  std::vector<TapeEvent>& log_;
  std::size_t start_;
};

}  // namespace

// --- CollapseTable ----------------------------------------------------------

CollapseTable::CollapseTable(const InterpScheme& scheme, const AtomicOracle& oracle,
                             CollapseOptions options, std::shared_ptr<CollapseCache> cache)
    : scheme_(scheme), oracle_(oracle), options_(options), cache_(std::move(cache)) {
  if (cache_) tape_ = cache_->checkout(oracle_);
  if (!tape_) {
    tape_ = std::make_shared<Tape>();
    tape_->snaps.push_back({0,
                            scheme_.pair_coded_domain ? TupleEnumerator::pair_codes()
                                                      : TupleEnumerator(dom_lengths(scheme_)),
                            0});
  }
}

CollapseTable::~CollapseTable() {
  if (!cache_ || !tape_) return;
  // Drop a partial tail left by an interrupted build.
  tape_->events.resize(tape_->snaps.back().event_pos);
  cache_->give_back(std::move(tape_));
}

std::vector<Tuple> CollapseTable::representatives() const {
  return {tape_->reps.begin(), tape_->reps.begin() + static_cast<std::ptrdiff_t>(known_)};
}

const Tuple& CollapseTable::representative(std::size_t n) {
  ensure(n + 1);
  return tape_->reps[n];
}

std::size_t CollapseTable::index_of(const Tuple& member) {
  for (std::size_t j = 0;; ++j) {
    ensure(j + 1);
    const Tuple& rep = tape_->reps[j];
    if (rep == member) return j;
    auto d = decide_delta(oracle_, scheme_.equiv, Blocks{rep, member}, options_.budget);
    if (d.verdict == Verdict::Unknown) {
      throw BudgetExhausted("equivalence undecided for " + to_string(rep) + " and " +
                            to_string(member));
    }
    if (d.verdict == Verdict::In) return j;
  }
}

void CollapseTable::ensure(std::size_t k) {
  while (known_ < k) {
    if (!live_ && replay_one()) continue;
    build_one();
  }
}

// Replays the log up to the next snapshot. Returns false (and switches to
// live building) when the log ends or disagrees with the oracle.
bool CollapseTable::replay_one() {
  auto& t = *tape_;
  if (known_ + 1 >= t.snaps.size()) {
    go_live_at(known_);
    return false;
  }
  const std::size_t target = t.snaps[known_ + 1].event_pos;
  for (std::size_t i = cursor_; i < target; ++i) {
    const auto& e = t.events[i];
    if (e.is_tick) continue;
    Peek p = oracle_.peek(e.rel, e.args);
    if (p == Peek::Unavailable) break;  // the charging pass below refuses here too
    if (p == Peek::Opaque || (p == Peek::True) != e.answer) {
      go_live_at(known_);
      return false;
    }
  }
  for (std::size_t i = cursor_; i < target; ++i) {
    const auto& e = t.events[i];
    if (e.is_tick) {
      oracle_.tick(e.ticks);
    } else if (oracle_.holds(e.rel, e.args) != e.answer) {
      throw Error("collapse log replay diverged from a peeked answer");
    }
  }
  cursor_ = target;
  ++known_;
  return true;
}

void CollapseTable::go_live_at(std::size_t snap) {
  auto& t = *tape_;
  if (snap + 1 < t.snaps.size() || t.events.size() > t.snaps[snap].event_pos) {
    // Branch: keep the shared log intact for other oracles.
    auto fresh = std::make_shared<Tape>();
    fresh->events.assign(t.events.begin(),
                         t.events.begin() + static_cast<std::ptrdiff_t>(t.snaps[snap].event_pos));
    fresh->snaps.assign(t.snaps.begin(), t.snaps.begin() + static_cast<std::ptrdiff_t>(snap + 1));
    fresh->reps.assign(t.reps.begin(), t.reps.begin() + static_cast<std::ptrdiff_t>(snap));
    if (cache_) cache_->give_back(tape_);
    tape_ = std::move(fresh);
  }
  const Snapshot& s = tape_->snaps[snap];
  enumerator_ = std::make_unique<TupleEnumerator>(s.enumerator);
  scanned_ = s.scanned;
  cursor_ = s.event_pos;
  live_ = true;
}

void CollapseTable::build_one() {
  auto& t = *tape_;
  RecordingOracle rec(oracle_, t.events);
  while (true) {
    const Tuple cand = enumerator_->next();
    ++scanned_;
    if (options_.scan_limit != 0 && scanned_ > options_.scan_limit) {
      throw BudgetExhausted("collapse scan limit reached after " + std::to_string(t.reps.size()) +
                            " classes");
    }
    rec.tick(1);
    auto dom = decide_delta(rec, scheme_.dom, Blocks{cand}, options_.budget);
    if (dom.verdict == Verdict::Unknown) {
      throw BudgetExhausted("domain membership undecided for " + to_string(cand));
    }
    if (dom.verdict == Verdict::Out) continue;
    bool fresh = true;
    for (const Tuple& rep : t.reps) {
      auto eq = decide_delta(rec, scheme_.equiv, Blocks{rep, cand}, options_.budget);
      if (eq.verdict == Verdict::Unknown) {
        throw BudgetExhausted("equivalence undecided for " + to_string(rep) + " and " +
                              to_string(cand));
      }
      if (eq.verdict == Verdict::In) {
        fresh = false;
        break;
      }
    }
    if (!fresh) continue;
    t.reps.push_back(cand);
    t.snaps.push_back({t.events.size(), *enumerator_, scanned_});
    cursor_ = t.events.size();
    ++known_;
    return;
  }
}

Tuple tau(const InterpScheme& scheme, const Presentation& pres, std::size_t n,
          CollapseOptions options) {
  PresentationOracle oracle(pres);
  CollapseTable table(scheme, oracle, options);
  return table.representative(n);
}

// --- interp_to_functor ------------------------------------------------------

CompFunctor interp_to_functor(const InterpScheme& scheme_in) {
  auto scheme = std::make_shared<const InterpScheme>(scheme_in);
  auto cache = make_collapse_cache();
  CompFunctor F;
  F.name = scheme->name.empty() ? "interp" : scheme->name;
  F.source = scheme->source;
  F.target = scheme->target;
  F.phi = Functional(
      [scheme, cache](Machine& m, Elem code) -> Elem {
        auto fact = decode_fact(code, scheme->target);
        if (!fact) return 0;
        MachineSideOracle left(m, MachineSideOracle::Side::Left);
        CollapseTable table(*scheme, left, {}, cache);
        Blocks args;
        for (Elem e : fact->second) args.push_back(table.representative(e));
        auto d = decide_delta(left, scheme->relations[fact->first], args, CollapseOptions{}.budget);
        return d.verdict == Verdict::In ? 1 : 0;
      },
      F.name + ".phi");
  F.phi_star = Functional(
      [scheme, cache](Machine& m, Elem n) -> Elem {
        Tuple image;
        {
          MachineSideOracle left(m, MachineSideOracle::Side::Left);
          CollapseTable table(*scheme, left, {}, cache);
          image = table.representative(n);
        }
        for (Elem& e : image) e = m.map(e);
        MachineSideOracle right(m, MachineSideOracle::Side::Right);
        CollapseTable table(*scheme, right, {}, cache);
        return table.index_of(image);
      },
      F.name + ".phi*");
  return F;
}

}  // namespace effint
