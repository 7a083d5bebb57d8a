#include "effint/functor.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>

#include "effint/errors.hpp"

namespace effint {

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (x > kMax - y) throw ArgumentError("pairing overflow");
  const std::uint64_t s = x + y;
  if (s == kMax) throw ArgumentError("pairing overflow");
  std::uint64_t a = s, b = s + 1;
  (a % 2 == 0 ? a : b) /= 2;
  if (a != 0 && b > kMax / a) throw ArgumentError("pairing overflow");
  const std::uint64_t tri = a * b;
  if (tri > kMax - y) throw ArgumentError("pairing overflow");
  return tri + y;
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
  // Largest s with s(s+1)/2 <= z.
  std::uint64_t lo = 0, hi = std::uint64_t{1} << 33;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo + 1) / 2;
    std::uint64_t a = mid, b = mid + 1;
    (a % 2 == 0 ? a : b) /= 2;
    if (a <= z / b) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  const std::uint64_t tri = lo * (lo + 1) / 2;
  const std::uint64_t y = z - tri;
  return {lo - y, y};
}

namespace {

std::uint64_t pack(std::span<const Elem> args) {
  if (args.empty()) return 0;
  std::uint64_t acc = args.back();
  for (std::size_t i = args.size() - 1; i-- > 0;) acc = cantor_pair(args[i], acc);
  return acc;
}

Tuple unpack(std::uint64_t code, std::size_t arity) {
  Tuple out;
  if (arity == 0) return out;
  for (std::size_t i = 0; i + 1 < arity; ++i) {
    auto [x, y] = cantor_unpair(code);
    out.push_back(x);
    code = y;
  }
  out.push_back(code);
  return out;
}

}  // namespace

std::uint64_t encode_fact(std::size_t rel, std::span<const Elem> args) {
  return cantor_pair(rel, pack(args));
}

std::optional<std::pair<std::size_t, Tuple>> decode_fact(std::uint64_t code,
                                                         const Signature& sig) {
  auto [rel, packed] = cantor_unpair(code);
  auto rc = sig.relation_count();
  if (rc && rel >= *rc) return std::nullopt;
  return std::make_pair(static_cast<std::size_t>(rel), unpack(packed, sig.arity(rel)));
}

// --- lazy images ------------------------------------------------------------

namespace {

template <typename K, typename V>
class Memo {
 public:
  std::optional<V> find(const K& k) const {
    std::lock_guard lock(mu_);
    auto it = map_.find(k);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void store(const K& k, const V& v) {
    std::lock_guard lock(mu_);
    map_.emplace(k, v);
  }

 private:
  mutable std::mutex mu_;
  std::map<K, V> map_;
};

}  // namespace

Presentation apply_to_presentation(const CompFunctor& F, const Presentation& pres,
                                   std::uint64_t fuel) {
  auto memo = std::make_shared<Memo<std::uint64_t, bool>>();
  auto oracle = std::make_shared<OracleTriple>(OracleTriple::diagram(DiagramSource::total(pres)));
  Functional phi = F.phi;
  return Presentation(
      F.target,
      [memo, oracle, phi, fuel](std::size_t rel, std::span<const Elem> args) {
        const std::uint64_t code = encode_fact(rel, args);
        if (auto hit = memo->find(code)) return *hit;
        Outcome o = run_total(phi, *oracle, code, fuel);
        if (!o.halted()) {
          throw FuelExhausted(phi.name() + " ran out of fuel on fact " + std::to_string(rel) +
                                  to_string(args),
                              code);
        }
        const bool v = o.value != 0;
        memo->store(code, v);
        return v;
      },
      F.name + "(" + pres.name() + ")");
}

MorphismOracle apply_to_morphism(const CompFunctor& F, const Presentation& presA,
                                 const MorphismOracle& f, const Presentation& presB,
                                 std::uint64_t fuel) {
  auto fwd_oracle = std::make_shared<OracleTriple>(OracleTriple::total(presA, f, presB));
  auto bwd_oracle =
      std::make_shared<OracleTriple>(OracleTriple::total(presB, f.inverse(), presA));
  auto fwd_memo = std::make_shared<Memo<Elem, Elem>>();
  auto bwd_memo = std::make_shared<Memo<Elem, Elem>>();
  Functional ps = F.phi_star;
  auto make = [ps, fuel](std::shared_ptr<OracleTriple> oracle,
                         std::shared_ptr<Memo<Elem, Elem>> memo) {
    return [ps, fuel, oracle, memo](Elem n) {
      if (auto hit = memo->find(n)) return *hit;
      Outcome o = run_total(ps, *oracle, n, fuel);
      if (!o.halted()) {
        throw FuelExhausted(ps.name() + " ran out of fuel at point " + std::to_string(n), n);
      }
      memo->store(n, o.value);
      return o.value;
    };
  };
  return MorphismOracle(make(fwd_oracle, fwd_memo), make(bwd_oracle, bwd_memo),
                        F.name + "(" + f.name() + ")");
}

// --- law checks -------------------------------------------------------------

LawReport check_functor_laws(const CompFunctor& F, const Presentation& pres,
                             const std::vector<MorphismPair>& samples, std::size_t prefix_length,
                             std::uint64_t fuel) {
  LawReport report;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    try {
      const MorphismOracle f = MorphismOracle::from_permutation(samples[s].f);
      const MorphismOracle g = MorphismOracle::from_permutation(samples[s].g);
      const Presentation X = pres;
      const Presentation Y = pull_back(X, g.inverse());
      const Presentation Z = pull_back(Y, f.inverse());
      const MorphismOracle id = MorphismOracle::identity();

      const auto FX = apply_to_morphism(F, X, id, X, fuel);
      const auto FY = apply_to_morphism(F, Y, id, Y, fuel);
      const auto Fg = apply_to_morphism(F, X, g, Y, fuel);
      const auto Ff = apply_to_morphism(F, Y, f, Z, fuel);
      const auto Ffg = apply_to_morphism(F, X, f.after(g), Z, fuel);

      for (Elem n = 0; n < prefix_length; ++n) {
        ++report.points_checked;
        auto fail = [&](const char* law, const std::string& detail) {
          report.violations.push_back({s, law, n, detail});
        };
        if (Elem v = FX.forward(n); v != n) fail("identity", "F(id_X)(" + std::to_string(n) + ")=" + std::to_string(v));
        if (Elem v = FY.forward(n); v != n) fail("identity", "F(id_Y)(" + std::to_string(n) + ")=" + std::to_string(v));
        const Elem lhs = Ffg.forward(n);
        const Elem rhs = Ff.forward(Fg.forward(n));
        if (lhs != rhs) {
          fail("composition", "F(f.g)=" + std::to_string(lhs) + " F(f).F(g)=" + std::to_string(rhs));
        }
        if (Elem back = Fg.backward(Fg.forward(n)); back != n) {
          fail("inverse", "F(g)^-1(F(g)(n))=" + std::to_string(back));
        }
        if (Elem fwd = Fg.forward(Fg.backward(n)); fwd != n) {
          fail("inverse", "F(g)(F(g)^-1(n))=" + std::to_string(fwd));
        }
      }
    } catch (const FuelExhausted& e) {
      ++report.fuel_failures;
      report.violations.push_back({s, "fuel", e.query(), e.what()});
    }
  }
  return report;
}

// --- simple functors --------------------------------------------------------

CompFunctor constant_functor(const Presentation& copy, Signature source) {
  CompFunctor F;
  F.name = "constant[" + copy.name() + "]";
  F.source = std::move(source);
  F.target = copy.signature();
  Signature target = copy.signature();
  F.phi = Functional(
      [copy, target](Machine& m, Elem code) -> Elem {
        m.tick();
        auto fact = decode_fact(code, target);
        if (!fact) return 0;
        return copy.holds(fact->first, fact->second) ? 1 : 0;
      },
      "constant.phi");
  F.phi_star = Functional(
      [](Machine& m, Elem n) -> Elem {
        m.tick();
        return n;
      },
      "constant.phi*");
  return F;
}

CompFunctor identity_functor(const Signature& sig) {
  CompFunctor F;
  F.name = "identity";
  F.source = sig;
  F.target = sig;
  F.phi = Functional(
      [sig](Machine& m, Elem code) -> Elem {
        auto fact = decode_fact(code, sig);
        if (!fact) return 0;
        return m.left(fact->first, fact->second) ? 1 : 0;
      },
      "identity.phi");
  F.phi_star = Functional([](Machine& m, Elem n) -> Elem { return m.map(n); },
                          "identity.phi*");
  return F;
}

std::vector<FinMap> permutations_of_prefix(std::size_t n) {
  std::vector<Elem> p(n);
  std::iota(p.begin(), p.end(), Elem{0});
  std::vector<FinMap> out;
  do {
    out.push_back(FinMap::from_images(p));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace effint
