// functor_to_interp: disjuncts generated from the convergent runs of F's
// functionals on finite diagrams.
//
// Every disjunct is a complete description of a finite diagram: the
// equality type of the free elements, distinct fresh witnesses, and every
// fact of the relevant fragment. Runs are memoized by that description, so
// inputs with the same type share them. Slot l of an input uses l fresh
// witnesses; it is emitted at level max(l, level at which its runs finish).

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "effint/errors.hpp"
#include "effint/transforms.hpp"
#include "transform_detail.hpp"

namespace effint {

namespace {

using detail::Classified;
using detail::RunClass;

using Key = std::vector<std::uint64_t>;

struct MemoEntry {
  RunClass cls = RunClass::Pending;
  std::uint64_t used = 0;
  std::uint64_t tried = 0;
};

class Synth {
 public:
  Synth(CompFunctor F, SynthesisOptions o) : F(std::move(F)), opt(o) {}

  std::uint64_t fuel_at(std::size_t level) const {
    return opt.base_fuel << std::min<std::size_t>(level, opt.max_level);
  }
  std::size_t level_of(std::uint64_t used) const {
    std::size_t l = 0;
    while (l < opt.max_level && fuel_at(l) < used) ++l;
    return l;
  }

  template <typename Compute>
  MemoEntry lookup(const Key& key, std::uint64_t fuel, Compute&& compute) {
    {
      std::lock_guard lock(mu_);
      auto it = memo_.find(key);
      if (it != memo_.end() && (it->second.cls != RunClass::Pending || it->second.tried >= fuel)) {
        return it->second;
      }
    }
    Classified c = compute(fuel);
    MemoEntry e{c.cls, c.used, fuel};
    std::lock_guard lock(mu_);
    auto& slot = memo_[key];
    if (slot.cls == RunClass::Pending && slot.tried < fuel) slot = e;
    return slot;
  }

  const CompFunctor F;
  const SynthesisOptions opt;

 private:
  std::mutex mu_;
  std::map<Key, MemoEntry> memo_;
};

enum class Kind { Dom, Equiv, Rel };

std::vector<std::size_t> labels_of(const Tuple& flat) {
  std::map<Elem, std::size_t> first;
  std::vector<std::size_t> out;
  for (Elem e : flat) out.push_back(first.emplace(e, first.size()).first->second);
  return out;
}

void append_bits(Key& key, const DiagramFragment& f) {
  key.push_back(f.length());
  std::uint64_t word = 0;
  std::size_t n = 0;
  for (bool b : f.bits()) {
    word = (word << 1) | (b ? 1 : 0);
    if (++n == 64) {
      key.push_back(word);
      word = 0;
      n = 0;
    }
  }
  key.push_back(word);
  key.push_back(n);
}

// Literals fixing every fact of `frag`, whose tuple sits at `positions`.
void fragment_literals(const Signature& sig, const DiagramFragment& frag,
                       const std::vector<std::size_t>& positions, std::vector<Literal>& out) {
  const std::size_t k = frag.length();
  Tuple args;
  for (std::size_t j = 0; j < sig.relations_below(k); ++j) {
    const std::size_t a = sig.arity(j);
    args.assign(a, 0);
    while (true) {
      std::vector<std::size_t> pos(a);
      for (std::size_t p = 0; p < a; ++p) pos[p] = positions[args[p]];
      out.push_back(Literal::relation(j, std::move(pos), *frag.lookup(sig, j, args)));
      std::size_t p = a;
      while (p > 0 && args[p - 1] + 1 == k) args[--p] = 0;
      if (p == 0) break;
      ++args[p - 1];
    }
  }
}

class SynthCursor final : public DisjunctCursor {
 public:
  SynthCursor(std::shared_ptr<Synth> synth, Kind kind, std::size_t rel, bool positive,
              Blocks input, const AtomicOracle& oracle)
      : s_(std::move(synth)),
        kind_(kind),
        rel_(rel),
        positive_(positive),
        input_(std::move(input)),
        oracle_(oracle),
        flat_(flatten(input_)),
        labels_(labels_of(flat_)) {
    for (const Tuple& x : input_) {
      auto d = try_decode_pair(x);
      if (!d || !detail::injective(d->tuple)) {
        malformed_ = true;
        break;
      }
      decoded_.emplace_back(d->tuple, d->index);
    }
    std::vector<std::size_t> first(flat_.size(), flat_.size());
    for (std::size_t p = 0; p < flat_.size(); ++p) {
      auto& f = first[labels_[p]];
      if (f == flat_.size()) {
        f = p;
        label_pos_.push_back(p);
      } else {
        eq_literals_.push_back(Literal::eq(f, p));
      }
    }
    for (std::size_t a = 0; a < label_pos_.size(); ++a) {
      for (std::size_t b = a + 1; b < label_pos_.size(); ++b) {
        eq_literals_.push_back(Literal::neq(label_pos_[a], label_pos_[b]));
      }
    }
    // Position of each element's first occurrence inside the decoded parts.
    std::size_t offset = 0;
    for (std::size_t s = 0; s < decoded_.size(); ++s) {
      const Tuple& b = decoded_[s].first;
      for (std::size_t p = 0; p < b.size(); ++p) where_.emplace(b[p], offset + 1 + p);
      offset += input_[s].size();
    }
  }

  const std::vector<ExistentialCondition>& at_level(std::size_t level) override {
    if (malformed_) {
      if (!positive_ && out_.empty()) {
        ExistentialCondition c;
        c.shape = shape_of(input_);
        c.literals = eq_literals_;
        out_.push_back(std::move(c));
      }
      return out_;
    }
    const std::size_t top =
        kind_ == Kind::Dom ? 0 : std::min(level, s_->opt.max_witnesses);
    const RunClass want = positive_ ? RunClass::Pos : RunClass::Neg;
    std::vector<std::pair<std::size_t, std::size_t>> fresh;  // (available level, slot)
    for (std::size_t l = 0; l <= top; ++l) {
      if (slots_.size() <= l) slots_.push_back(prepare(l));
      Slot& sl = slots_[l];
      if (sl.emitted) continue;
      if (sl.entry.cls == RunClass::Pending) {
        sl.entry = s_->lookup(sl.key, s_->fuel_at(level), [&](std::uint64_t fuel) {
          return compute(sl, fuel);
        });
      }
      if (sl.entry.cls != want) continue;
      const std::size_t avail = std::max(s_->level_of(sl.entry.used), l);
      if (avail <= level) fresh.emplace_back(avail, l);
    }
    std::sort(fresh.begin(), fresh.end());
    for (auto [avail, l] : fresh) {
      out_.push_back(condition(slots_[l], l));
      slots_[l].emitted = true;
    }
    return out_;
  }

 private:
  struct Slot {
    Key key;
    Tuple elems;                       // the tuple whose fragment is fixed
    std::vector<std::size_t> positions;  // where its entries sit
    DiagramFragment frag;
    // equivalence
    DiagramFragment right;
    FinMap sigma;
    // relations
    std::vector<DiagramFragment> lefts;
    std::vector<FinMap> sigmas;
    MemoEntry entry;
    bool emitted = false;
  };

  std::size_t position_of(Elem e, std::size_t witness_base, const Tuple& witnesses) const {
    auto it = where_.find(e);
    if (it != where_.end()) return it->second;
    auto w = std::find(witnesses.begin(), witnesses.end(), e);
    return witness_base + static_cast<std::size_t>(w - witnesses.begin());
  }

  Slot prepare(std::size_t l) {
    oracle_.tick();
    Slot sl;
    const std::size_t n = flat_.size();
    switch (kind_) {
      case Kind::Dom: {
        const auto& [b, i] = decoded_[0];
        sl.elems = b;
        sl.frag = fragment_of(oracle_, b);
        sl.key = {0, b.size(), i};
        break;
      }
      case Kind::Equiv: {
        const auto& [b, i] = decoded_[0];
        const auto& [c, j] = decoded_[1];
        const Tuple d = detail::first_unused(flat_, {}, l);
        auto g = detail::equiv_geometry(b, c, d);
        sl.elems = g.left;
        sl.frag = fragment_of(oracle_, g.left);
        sl.right = fragment_of(oracle_, g.right);
        sl.sigma = g.sigma;
        for (Elem e : g.left) sl.positions.push_back(position_of(e, n, d));
        sl.key = {1};
        break;
      }
      case Kind::Rel: {
        Tuple c;
        std::set<Elem> seen;
        for (const auto& [b, i] : decoded_) {
          for (Elem e : b) {
            if (seen.insert(e).second) c.push_back(e);
          }
        }
        const Tuple d = detail::first_unused(flat_, {}, l);
        c.insert(c.end(), d.begin(), d.end());
        sl.elems = c;
        sl.frag = fragment_of(oracle_, c);
        for (Elem e : c) sl.positions.push_back(position_of(e, n, d));
        std::map<Elem, Elem> index;
        for (std::size_t q = 0; q < c.size(); ++q) index[c[q]] = q;
        for (const auto& [b, i] : decoded_) {
          Tuple left = b;
          std::set<Elem> bs(b.begin(), b.end());
          for (Elem e : c) {
            if (!bs.contains(e)) left.push_back(e);
          }
          Tuple images;
          for (Elem e : left) images.push_back(index.at(e));
          sl.lefts.push_back(fragment_of(oracle_, left));
          sl.sigmas.push_back(FinMap::from_images(images));
        }
        sl.key = {2, rel_};
        break;
      }
    }
    if (kind_ == Kind::Dom) {
      for (std::size_t p = 0; p < sl.elems.size(); ++p) sl.positions.push_back(1 + p);
    } else {
      sl.key.insert(sl.key.end(), labels_.begin(), labels_.end());
      sl.key.push_back(l);
    }
    append_bits(sl.key, sl.frag);
    return sl;
  }

  Classified compute(const Slot& sl, std::uint64_t fuel) const {
    const CompFunctor& F = s_->F;
    switch (kind_) {
      case Kind::Dom: return detail::dom_run(F, sl.frag, decoded_[0].second, fuel);
      case Kind::Equiv:
        return detail::equiv_runs(F, sl.frag, sl.sigma, sl.right, decoded_[0].second,
                                  decoded_[1].second, fuel);
      case Kind::Rel: {
        Tuple is;
        for (const auto& [b, i] : decoded_) is.push_back(i);
        return detail::rel_runs(F, rel_, sl.frag, sl.lefts, sl.sigmas, is, fuel);
      }
    }
    return {};
  }

  ExistentialCondition condition(const Slot& sl, std::size_t l) const {
    ExistentialCondition c;
    c.shape = shape_of(input_);
    c.witness_count = kind_ == Kind::Dom ? 0 : l;
    c.literals = eq_literals_;
    const std::size_t n = flat_.size();
    for (std::size_t t = 0; t < c.witness_count; ++t) {
      for (std::size_t p : label_pos_) c.literals.push_back(Literal::neq(n + t, p));
      for (std::size_t u = 0; u < t; ++u) c.literals.push_back(Literal::neq(n + t, n + u));
    }
    fragment_literals(oracle_.signature(), sl.frag, sl.positions, c.literals);
    return c;
  }

  std::shared_ptr<Synth> s_;
  Kind kind_;
  std::size_t rel_;
  bool positive_;
  Blocks input_;
  const AtomicOracle& oracle_;
  Tuple flat_;
  std::vector<std::size_t> labels_;
  std::vector<std::size_t> label_pos_;
  std::vector<Literal> eq_literals_;
  std::vector<std::pair<Tuple, Elem>> decoded_;
  std::map<Elem, std::size_t> where_;
  bool malformed_ = false;
  std::vector<Slot> slots_;
  std::vector<ExistentialCondition> out_;
};

DeltaScheme generated_delta(const std::shared_ptr<Synth>& synth, Kind kind, std::size_t rel,
                            const std::string& label) {
  auto side = [&](bool positive) {
    return SigmaScheme::generated(
        [synth, kind, rel, positive](const Blocks& input, const AtomicOracle& oracle) {
          return std::make_unique<SynthCursor>(synth, kind, rel, positive, input, oracle);
        },
        label + (positive ? "+" : "-"));
  };
  return {side(true), side(false)};
}

}  // namespace

InterpScheme functor_to_interp(const CompFunctor& F, SynthesisOptions options) {
  auto rc = F.target.relation_count();
  if (!rc) throw ArgumentError("functor target signature must be finite");
  auto synth = std::make_shared<Synth>(F, options);
  InterpScheme s;
  s.name = "I[" + F.name + "]";
  s.source = F.source;
  s.target = F.target;
  s.pair_coded_domain = true;
  s.dom = generated_delta(synth, Kind::Dom, 0, s.name + ".dom");
  s.equiv = generated_delta(synth, Kind::Equiv, 0, s.name + ".equiv");
  for (std::size_t r = 0; r < *rc; ++r) {
    s.relations.push_back(
        generated_delta(synth, Kind::Rel, r, s.name + ".rel" + std::to_string(r)));
  }
  return s;
}

}  // namespace effint
