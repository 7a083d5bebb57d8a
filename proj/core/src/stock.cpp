#include "effint/stock.hpp"

#include "effint/errors.hpp"

namespace effint {

namespace {

ExistentialCondition cond(std::vector<std::size_t> shape, std::vector<Literal> literals) {
  ExistentialCondition c;
  c.shape = std::move(shape);
  c.literals = std::move(literals);
  return c;
}

ExistentialCondition wildcard() {
  ExistentialCondition c;
  c.wildcard = true;
  return c;
}

}  // namespace

InterpScheme identity_scheme(const Signature& sig) {
  auto rc = sig.relation_count();
  if (!rc) throw ArgumentError("identity scheme needs a finite signature");
  InterpScheme s;
  s.name = "identity";
  s.source = sig;
  s.target = sig;
  s.dom.positive = SigmaScheme::listed({cond({2}, {Literal::neq(0, 1)})});
  s.dom.negative = SigmaScheme::listed({cond({2}, {Literal::eq(0, 1)}), wildcard()});
  s.equiv.positive = SigmaScheme::listed({cond({2, 2}, {Literal::eq(1, 3)})});
  s.equiv.negative = SigmaScheme::listed({cond({2, 2}, {Literal::neq(1, 3)})});
  for (std::size_t j = 0; j < *rc; ++j) {
    const std::size_t a = sig.arity(j);
    std::vector<std::size_t> shape(a, 2), args;
    for (std::size_t p = 0; p < a; ++p) args.push_back(2 * p + 1);
    s.relations.push_back({SigmaScheme::listed({cond(shape, {Literal::relation(j, args)})}),
                           SigmaScheme::listed({cond(shape, {Literal::relation(j, args, false)})})});
  }
  s.validate();
  return s;
}

InterpScheme pairs_intersect_scheme() {
  InterpScheme s;
  s.name = "pairs-intersect";
  s.source = Signature::empty();
  s.target = Signature({2});
  using L = Literal;
  s.dom.positive = SigmaScheme::listed({cond({3}, {L::neq(0, 1), L::neq(0, 2), L::neq(1, 2)})});
  s.dom.negative = SigmaScheme::listed(
      {cond({3}, {L::eq(0, 1)}), cond({3}, {L::eq(0, 2)}), cond({3}, {L::eq(1, 2)}), wildcard()});
  s.equiv.positive = SigmaScheme::listed(
      {cond({3, 3}, {L::eq(1, 4), L::eq(2, 5)}), cond({3, 3}, {L::eq(1, 5), L::eq(2, 4)})});
  s.equiv.negative = SigmaScheme::listed(
      {cond({3, 3}, {L::neq(1, 4), L::neq(1, 5)}), cond({3, 3}, {L::neq(2, 4), L::neq(2, 5)})});
  DeltaScheme meet;
  meet.positive = SigmaScheme::listed({cond({3, 3}, {L::eq(1, 4), L::neq(2, 5)}),
                                       cond({3, 3}, {L::eq(1, 5), L::neq(2, 4)}),
                                       cond({3, 3}, {L::eq(2, 4), L::neq(1, 5)}),
                                       cond({3, 3}, {L::eq(2, 5), L::neq(1, 4)})});
  meet.negative = SigmaScheme::listed(
      {cond({3, 3}, {L::neq(1, 4), L::neq(1, 5), L::neq(2, 4), L::neq(2, 5)}),
       cond({3, 3}, {L::eq(1, 4), L::eq(2, 5)}), cond({3, 3}, {L::eq(1, 5), L::eq(2, 4)})});
  s.relations = {meet};
  s.validate();
  return s;
}

}  // namespace effint
