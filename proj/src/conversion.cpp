#include "bitt/conversion.hpp"

namespace bitt {

bool compare(const Term& t, const Term& u, RelKind rel, Fuel& fuel) {
  if (alpha_eq(t, u)) return true;
  const Term a = whnf(t, fuel).term;
  const Term b = whnf(u, fuel).term;
  if (a.kind() != b.kind()) return false;

  switch (a.kind()) {
    case TermKind::Var:
      return a.index() == b.index();
    case TermKind::Sort:
      return rel == RelKind::Conv ? a.level() == b.level() : a.level() <= b.level();
    case TermKind::Pi:
      // Domains are invariant, codomains follow the relation.
      return compare(a.domain(), b.domain(), RelKind::Conv, fuel) &&
             compare(a.codomain(), b.codomain(), rel, fuel);
    default:
      break;
  }
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!compare(a.child(i), b.child(i), RelKind::Conv, fuel)) return false;
  }
  return true;
}

bool convertible(const Term& t, const Term& u, Fuel& fuel) {
  return compare(t, u, RelKind::Conv, fuel);
}

bool convertible(const Term& t, const Term& u, std::uint64_t fuel) {
  Fuel f(fuel);
  return convertible(t, u, f);
}

bool cumul(const Term& t, const Term& u, Fuel& fuel) { return compare(t, u, RelKind::Cumul, fuel); }

bool cumul(const Term& t, const Term& u, std::uint64_t fuel) {
  Fuel f(fuel);
  return cumul(t, u, f);
}

}  // namespace bitt
