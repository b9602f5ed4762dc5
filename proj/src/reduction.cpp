#include "bitt/reduction.hpp"

#include <string>
#include <utility>
#include <vector>

namespace bitt {

FuelExhausted::FuelExhausted(std::uint64_t limit)
    : std::runtime_error("reduction fuel exhausted after " + std::to_string(limit) + " steps"),
      limit_(limit) {}

namespace {

// Child holding the term whose head shape decides whether the root reduces.
std::optional<std::size_t> head_child(TermKind kind) {
  switch (kind) {
    case TermKind::App: return 0;
    case TermKind::SigRec: return 2;
    case TermKind::NatRec: return 3;
    case TermKind::EqRec: return 2;
    default: return std::nullopt;
  }
}

Term replace_child(const Term& t, std::size_t i, Term replacement) {
  std::vector<Term> kids(t.children().begin(), t.children().end());
  kids[i] = std::move(replacement);
  return t.rebuild(std::move(kids));
}

// Pre-order search for the n-th redex; `n` counts down as redexes are passed.
std::optional<Term> reduce_nth(const Term& t, std::size_t& n) {
  if (is_redex(t)) {
    if (n == 0) return contract(t);
    --n;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (auto r = reduce_nth(t.child(i), n)) return replace_child(t, i, std::move(*r));
  }
  return std::nullopt;
}

Term whnf_loop(Term t, Fuel& fuel, std::uint64_t& steps) {
  for (;;) {
    const auto hc = head_child(t.kind());
    if (!hc) return t;
    Term inner = whnf_loop(t.child(*hc), fuel, steps);
    t = replace_child(t, *hc, std::move(inner));
    if (!is_redex(t)) return t;
    fuel.consume();
    ++steps;
    t = contract(t);
  }
}

Term normalize_rec(const Term& t, Fuel& fuel) {
  std::uint64_t steps = 0;
  Term w = whnf_loop(t, fuel, steps);
  if (w.arity() == 0) return w;
  std::vector<Term> kids;
  kids.reserve(w.arity());
  for (const Term& c : w.children()) kids.push_back(normalize_rec(c, fuel));
  return w.rebuild(std::move(kids));
}

}  // namespace

bool is_redex(const Term& t) {
  switch (t.kind()) {
    case TermKind::App:
      return t.head().is(TermKind::Lambda);
    case TermKind::SigRec:
      return t.child(2).is(TermKind::Pair);
    case TermKind::NatRec:
      return t.child(3).is(TermKind::Zero) || t.child(3).is(TermKind::Succ);
    case TermKind::EqRec:
      return t.child(2).is(TermKind::Refl);
    default:
      return false;
  }
}

Term contract(const Term& t) {
  switch (t.kind()) {
    case TermKind::App:
      return subst(t.head().body(), t.arg(), 0);
    case TermKind::SigRec: {
      const Term& pair = t.child(2);
      return subst2(t.child(1), pair.child(2), pair.child(3));
    }
    case TermKind::NatRec: {
      const Term& s = t.child(3);
      if (s.is(TermKind::Zero)) return t.child(1);
      const Term& pred = s.child(0);
      Term recursive = t.rebuild({t.child(0), t.child(1), t.child(2), pred});
      return subst2(t.child(2), pred, recursive);
    }
    case TermKind::EqRec:
      return t.child(1);
    default:
      throw std::logic_error("contract: not a redex");
  }
}

std::optional<Term> step(const Term& t) { return reduce_at(t, 0); }

std::optional<Term> head_step(const Term& t) {
  if (is_redex(t)) return contract(t);
  const auto hc = head_child(t.kind());
  if (!hc) return std::nullopt;
  if (auto r = head_step(t.child(*hc))) return replace_child(t, *hc, std::move(*r));
  return std::nullopt;
}

std::size_t count_redexes(const Term& t) {
  std::size_t n = is_redex(t) ? 1 : 0;
  for (const Term& c : t.children()) n += count_redexes(c);
  return n;
}

std::optional<Term> reduce_at(const Term& t, std::size_t n) { return reduce_nth(t, n); }

WhnfResult whnf(const Term& t, Fuel& fuel) {
  std::uint64_t steps = 0;
  Term w = whnf_loop(t, fuel, steps);
  return WhnfResult{std::move(w), steps};
}

WhnfResult whnf(const Term& t, std::uint64_t fuel) {
  Fuel f(fuel);
  return whnf(t, f);
}

Term normalize(const Term& t, Fuel& fuel) { return normalize_rec(t, fuel); }

Term normalize(const Term& t, std::uint64_t fuel) {
  Fuel f(fuel);
  return normalize(t, f);
}

}  // namespace bitt
