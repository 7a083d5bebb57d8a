#include "effint/model.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "effint/errors.hpp"

namespace effint {

// --- Signature --------------------------------------------------------------

Signature::Signature(std::vector<std::size_t> arities) : arities_(std::move(arities)) {
  for (std::size_t i = 0; i < arities_.size(); ++i) {
    if (arities_[i] == 0) {
      throw ArgumentError("relation " + std::to_string(i) + " has arity 0");
    }
  }
}

Signature Signature::unbounded(ArityFn arity) {
  if (!arity) throw ArgumentError("unbounded signature needs an arity function");
  Signature s;
  s.generator_ = std::move(arity);
  return s;
}

std::optional<std::size_t> Signature::relation_count() const {
  if (generator_) return std::nullopt;
  return arities_.size();
}

std::size_t Signature::arity(std::size_t rel) const {
  if (generator_) {
    std::size_t a = generator_(rel);
    if (a == 0) throw ArgumentError("relation " + std::to_string(rel) + " has arity 0");
    return a;
  }
  if (rel >= arities_.size()) {
    throw ArgumentError("relation index " + std::to_string(rel) + " out of range");
  }
  return arities_[rel];
}

std::size_t Signature::relations_below(std::size_t k) const {
  if (generator_) return k;
  return std::min(k, arities_.size());
}

bool operator==(const Signature& a, const Signature& b) {
  if (a.bounded() != b.bounded()) return false;
  if (a.bounded()) return a.arities_ == b.arities_;
  // Unbounded signatures compare by their first few arities only.
  for (std::size_t i = 0; i < 16; ++i) {
    if (a.arity(i) != b.arity(i)) return false;
  }
  return true;
}

// --- Presentation -----------------------------------------------------------

Presentation::Presentation(Signature sig, TruthFn truth, std::string name)
    : sig_(std::move(sig)),
      truth_(std::make_shared<const TruthFn>(std::move(truth))),
      name_(std::move(name)) {
  if (!*truth_) throw ArgumentError("presentation needs a truth oracle");
}

bool Presentation::holds(std::size_t rel, std::span<const Elem> args) const {
  if (sig_.arity(rel) != args.size()) {
    throw ArgumentError("arity mismatch for relation " + std::to_string(rel));
  }
  return (*truth_)(rel, args);
}

Presentation pure_set() {
  return Presentation(
      Signature::empty(),
      [](std::size_t, std::span<const Elem>) -> bool {
        throw ArgumentError("the pure set has no relations");
      },
      "pure-set");
}

Presentation linear_order() {
  return Presentation(
      Signature({2}),
      [](std::size_t, std::span<const Elem> a) { return a[0] < a[1]; }, "omega-lt");
}

// --- DiagramFragment --------------------------------------------------------

namespace {

std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::size_t>::max() / base) {
      throw ArgumentError("fragment too large");
    }
    r *= base;
  }
  return r;
}

}  // namespace

std::size_t fragment_size(const Signature& sig, std::size_t k) {
  std::size_t total = 0;
  for (std::size_t j = 0; j < sig.relations_below(k); ++j) {
    total += checked_pow(k, sig.arity(j));
  }
  return total;
}

std::optional<std::size_t> fragment_bit_index(const Signature& sig, std::size_t k,
                                              std::size_t rel,
                                              std::span<const Elem> args) {
  if (rel >= sig.relations_below(k)) return std::nullopt;
  if (args.size() != sig.arity(rel)) {
    throw ArgumentError("arity mismatch for relation " + std::to_string(rel));
  }
  std::size_t offset = 0;
  for (std::size_t j = 0; j < rel; ++j) offset += checked_pow(k, sig.arity(j));
  std::size_t pos = 0;
  for (Elem a : args) {
    if (a >= k) return std::nullopt;
    pos = pos * k + static_cast<std::size_t>(a);
  }
  return offset + pos;
}

DiagramFragment::DiagramFragment(std::size_t length, std::vector<bool> bits)
    : length_(length), bits_(std::move(bits)) {}

std::optional<bool> DiagramFragment::lookup(const Signature& sig, std::size_t rel,
                                            std::span<const Elem> args) const {
  auto idx = fragment_bit_index(sig, length_, rel, args);
  if (!idx || *idx >= bits_.size()) return std::nullopt;
  return bits_[*idx];
}

std::string DiagramFragment::bit_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

namespace {

template <typename Truth>
DiagramFragment build_fragment(const Signature& sig, std::span<const Elem> tuple,
                               Truth&& truth) {
  const std::size_t k = tuple.size();
  std::vector<bool> bits;
  bits.reserve(fragment_size(sig, k));
  Tuple args;
  std::vector<std::size_t> pos;
  for (std::size_t j = 0; j < sig.relations_below(k); ++j) {
    const std::size_t a = sig.arity(j);
    pos.assign(a, 0);
    args.assign(a, 0);
    while (true) {
      for (std::size_t p = 0; p < a; ++p) args[p] = tuple[pos[p]];
      bits.push_back(truth(j, std::span<const Elem>(args)));
      std::size_t p = a;
      while (p > 0 && pos[p - 1] + 1 == k) pos[--p] = 0;
      if (p == 0) break;
      ++pos[p - 1];
    }
  }
  return DiagramFragment(k, std::move(bits));
}

}  // namespace

DiagramFragment fragment_of(const AtomicOracle& oracle, std::span<const Elem> tuple) {
  return build_fragment(oracle.signature(), tuple,
                        [&](std::size_t j, std::span<const Elem> a) { return oracle.holds(j, a); });
}

DiagramFragment fragment_of(const Presentation& pres, std::span<const Elem> tuple) {
  return build_fragment(pres.signature(), tuple,
                        [&](std::size_t j, std::span<const Elem> a) { return pres.holds(j, a); });
}

// --- FinMap -----------------------------------------------------------------

FinMap::FinMap(std::map<Elem, Elem> pairs) : pairs_(std::move(pairs)) {
  std::set<Elem> seen;
  for (const auto& [k, v] : pairs_) {
    if (!seen.insert(v).second) {
      throw ArgumentError("finite map is not injective at value " + std::to_string(v));
    }
  }
}

FinMap FinMap::from_images(std::span<const Elem> images) {
  std::map<Elem, Elem> m;
  for (std::size_t p = 0; p < images.size(); ++p) m.emplace(p, images[p]);
  return FinMap(std::move(m));
}

FinMap FinMap::identity_prefix(std::size_t k) {
  std::map<Elem, Elem> m;
  for (Elem n = 0; n < k; ++n) m.emplace_hint(m.end(), n, n);
  FinMap f;
  f.pairs_ = std::move(m);
  return f;
}

std::optional<Elem> FinMap::at(Elem n) const {
  auto it = pairs_.find(n);
  if (it == pairs_.end()) return std::nullopt;
  return it->second;
}

bool FinMap::is_permutation_of_prefix(std::size_t n) const {
  if (pairs_.size() != n) return false;
  for (const auto& [k, v] : pairs_) {
    if (k >= n || v >= n) return false;
  }
  return true;
}

bool FinMap::is_permutation_of_support() const {
  for (const auto& [k, v] : pairs_) {
    if (!pairs_.contains(v)) return false;
  }
  return true;
}

FinMap FinMap::inverse() const {
  std::map<Elem, Elem> m;
  for (const auto& [k, v] : pairs_) m.emplace(v, k);
  FinMap f;
  f.pairs_ = std::move(m);
  return f;
}

FinMap FinMap::after(const FinMap& inner) const {
  std::map<Elem, Elem> m;
  for (const auto& [k, v] : inner.pairs_) {
    if (auto w = at(v)) m.emplace(k, *w);
  }
  FinMap f;
  f.pairs_ = std::move(m);
  return f;
}

FinMap FinMap::restrict(std::size_t n) const {
  FinMap f;
  for (const auto& [k, v] : pairs_) {
    if (k < n) f.pairs_.emplace_hint(f.pairs_.end(), k, v);
  }
  return f;
}

// --- MorphismOracle ---------------------------------------------------------

MorphismOracle::MorphismOracle(MapFn forward, MapFn backward, std::string name)
    : forward_(std::make_shared<const MapFn>(std::move(forward))),
      backward_(std::make_shared<const MapFn>(std::move(backward))),
      name_(std::move(name)) {
  if (!*forward_ || !*backward_) throw ArgumentError("morphism needs both directions");
}

MorphismOracle MorphismOracle::identity() {
  return MorphismOracle([](Elem n) { return n; }, [](Elem n) { return n; }, "id");
}

MorphismOracle MorphismOracle::from_permutation(const FinMap& perm) {
  if (!perm.is_permutation_of_support()) {
    throw ArgumentError("finite map does not permute its support");
  }
  auto fwd = std::make_shared<const FinMap>(perm);
  auto bwd = std::make_shared<const FinMap>(perm.inverse());
  std::ostringstream name;
  name << "perm{";
  bool first = true;
  for (const auto& [k, v] : perm.pairs()) {
    if (k == v) continue;
    name << (first ? "" : " ") << k << ":" << v;
    first = false;
  }
  name << "}";
  return MorphismOracle([fwd](Elem n) { return fwd->at(n).value_or(n); },
                        [bwd](Elem n) { return bwd->at(n).value_or(n); }, name.str());
}

MorphismOracle MorphismOracle::inverse() const {
  MorphismOracle r = *this;
  std::swap(r.forward_, r.backward_);
  r.name_ = name_ + "^-1";
  return r;
}

MorphismOracle MorphismOracle::after(const MorphismOracle& inner) const {
  auto of = forward_, ob = backward_, inf = inner.forward_, inb = inner.backward_;
  return MorphismOracle([of, inf](Elem n) { return (*of)((*inf)(n)); },
                        [ob, inb](Elem n) { return (*inb)((*ob)(n)); },
                        name_ + "." + inner.name_);
}

FinMap MorphismOracle::restrict(std::size_t n) const {
  std::map<Elem, Elem> m;
  for (Elem i = 0; i < n; ++i) m.emplace_hint(m.end(), i, forward(i));
  return FinMap(std::move(m));
}

// --- tuple operations -------------------------------------------------------

Tuple apply_perm(std::span<const Elem> x, const FinMap& sigma) {
  if (!sigma.is_permutation_of_prefix(x.size())) {
    throw ArgumentError("not a permutation of the index range");
  }
  Tuple out(x.size());
  for (const auto& [p, q] : sigma.pairs()) out[p] = x[q];
  return out;
}

Tuple encode_pair(std::span<const Elem> b, std::size_t m, Elem fresh) {
  if (std::find(b.begin(), b.end(), fresh) != b.end()) {
    throw ArgumentError("marker " + std::to_string(fresh) + " occurs in the coded tuple");
  }
  Tuple out;
  out.reserve(1 + b.size() + m);
  out.push_back(fresh);
  out.insert(out.end(), b.begin(), b.end());
  out.insert(out.end(), m, fresh);
  return out;
}

Tuple encode_pair(std::span<const Elem> b, std::size_t m) {
  Elem fresh = b.empty() ? 0 : *std::max_element(b.begin(), b.end()) + 1;
  return encode_pair(b, m, fresh);
}

std::optional<DecodedPair> try_decode_pair(std::span<const Elem> code) {
  if (code.empty()) return std::nullopt;
  const Elem marker = code[0];
  std::size_t end = code.size();
  while (end > 1 && code[end - 1] == marker) --end;
  DecodedPair out;
  out.index = code.size() - end;
  out.tuple.assign(code.begin() + 1, code.begin() + static_cast<std::ptrdiff_t>(end));
  // The scan above stops at the first non-marker from the right, so any marker
  // left in the middle is an interleaving.
  if (std::find(out.tuple.begin(), out.tuple.end(), marker) != out.tuple.end()) {
    return std::nullopt;
  }
  return out;
}

DecodedPair decode_pair(std::span<const Elem> code) {
  if (code.empty()) throw DecodeError("empty code");
  auto r = try_decode_pair(code);
  if (!r) throw DecodeError("marker interleaved with coded entries in " + to_string(code));
  return *r;
}

Presentation pull_back(const Presentation& pres, const MorphismOracle& f) {
  return Presentation(
      pres.signature(),
      [pres, f](std::size_t rel, std::span<const Elem> t) {
        Tuple img(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) img[i] = f.forward(t[i]);
        return pres.holds(rel, img);
      },
      pres.name() + "@" + f.name());
}

std::function<Tuple(std::span<const Elem>)> lift_to_tuples(MorphismOracle::MapFn f) {
  return [f = std::move(f)](std::span<const Elem> t) {
    Tuple out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = f(t[i]);
    return out;
  };
}

Term Term::of(std::span<const Elem> tuple) {
  std::vector<Term> items(tuple.begin(), tuple.end());
  return Term(std::move(items));
}

Tuple Term::flat() const {
  if (is_leaf()) throw ArgumentError("term is a leaf, not a tuple");
  Tuple out;
  for (const Term& t : items()) {
    if (!t.is_leaf()) throw ArgumentError("term is nested deeper than one level");
    out.push_back(t.leaf());
  }
  return out;
}

Term lift_term(const MorphismOracle::MapFn& f, const Term& t) {
  if (t.is_leaf()) return Term(f(t.leaf()));
  std::vector<Term> items;
  items.reserve(t.items().size());
  for (const Term& s : t.items()) items.push_back(lift_term(f, s));
  return Term(std::move(items));
}

std::string to_string(std::span<const Elem> tuple) {
  std::string s = "(";
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(tuple[i]);
  }
  return s + ")";
}

std::string to_string(const Term& t) {
  if (t.is_leaf()) return std::to_string(t.leaf());
  std::string s = "(";
  for (std::size_t i = 0; i < t.items().size(); ++i) {
    if (i) s += ",";
    s += to_string(t.items()[i]);
  }
  return s + ")";
}

// --- canonical order --------------------------------------------------------

std::uint64_t tuple_weight(std::span<const Elem> t) {
  return std::accumulate(t.begin(), t.end(), static_cast<std::uint64_t>(t.size()));
}

bool canonical_less(std::span<const Elem> a, std::span<const Elem> b) {
  auto wa = tuple_weight(a), wb = tuple_weight(b);
  if (wa != wb) return wa < wb;
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

TupleEnumerator::TupleEnumerator(LengthFilter allow) : allow_(std::move(allow)) {}

void TupleEnumerator::start_length() {
  // First tuple of length_ with entry sum weight_ - length_ in lex order.
  current_.assign(length_, 0);
  if (length_ > 0) current_.back() = weight_ - length_;
}

bool TupleEnumerator::advance_within_length() {
  const std::size_t L = current_.size();
  if (L < 2) return false;
  Elem tail = current_[L - 1];
  for (std::size_t p = L - 1; p-- > 0;) {
    if (tail > 0) {
      ++current_[p];
      for (std::size_t q = p + 1; q + 1 < L; ++q) current_[q] = 0;
      current_[L - 1] = tail - 1;
      return true;
    }
    tail += current_[p];
  }
  return false;
}

TupleEnumerator TupleEnumerator::pair_codes() {
  TupleEnumerator e;
  e.codes_only_ = true;
  return e;
}

void TupleEnumerator::fill_code_batch() {
  // weight = (1+m) + sum(1+b_j) + i(1+m)
  auto batch = std::make_shared<std::vector<Tuple>>();
  const std::uint64_t w = weight_;
  Tuple b;
  std::vector<bool> used;
  std::function<void(Elem, std::uint64_t)> grow = [&](Elem m, std::uint64_t rem) {
    if (rem % (m + 1) == 0) {
      Tuple code{m};
      code.insert(code.end(), b.begin(), b.end());
      code.insert(code.end(), rem / (m + 1), m);
      batch->push_back(std::move(code));
    }
    for (Elem e = 0; e + 1 <= rem; ++e) {
      if (e == m || (e < used.size() && used[e])) continue;
      if (e >= used.size()) used.resize(e + 1, false);
      used[e] = true;
      b.push_back(e);
      grow(m, rem - (e + 1));
      b.pop_back();
      used[e] = false;
    }
  };
  for (Elem m = 0; m + 1 <= w; ++m) grow(m, w - (m + 1));
  std::sort(batch->begin(), batch->end(), [](const Tuple& x, const Tuple& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  });
  batch_ = std::move(batch);
  batch_pos_ = 0;
}

const Tuple& TupleEnumerator::next() {
  if (codes_only_) {
    while (!batch_ || batch_pos_ == batch_->size()) {
      if (batch_) ++weight_;
      fill_code_batch();
    }
    current_ = (*batch_)[batch_pos_++];
    ++produced_;
    return current_;
  }
  auto allowed = [&](std::size_t len) { return !allow_ || allow_(len); };
  if (started_ && advance_within_length()) {
    ++produced_;
    return current_;
  }
  while (true) {
    if (!started_) {
      started_ = true;
      weight_ = 0;
      length_ = 0;
    } else if (length_ < weight_) {
      ++length_;
    } else {
      ++weight_;
      length_ = 0;
    }
    // Length 0 only occurs at weight 0.
    if (length_ == 0 && weight_ > 0) continue;
    if (!allowed(length_)) continue;
    start_length();
    ++produced_;
    return current_;
  }
}

}  // namespace effint
