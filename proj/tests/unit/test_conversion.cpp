#include <deque>
#include <random>

#include "support.hpp"

#include "bitt/conversion.hpp"
#include "bitt/reduction.hpp"

namespace bitt {
namespace {

using test::parse;
using test::sample;

// Reference relation: explore every reduct breadth-first (all redex
// positions, not just the head), collect the normal forms reached, then
// compare those structurally. Sort grows, Π codomains are covariant and
// Π domains must coincide; everything else must coincide.
std::vector<Term> all_normal_forms(const Term& t, std::size_t budget = 20000) {
  std::vector<Term> seen{t};
  std::deque<Term> queue{t};
  std::vector<Term> normal;
  while (!queue.empty() && seen.size() < budget) {
    Term cur = queue.front();
    queue.pop_front();
    const std::size_t n = count_redexes(cur);
    if (n == 0) {
      bool dup = false;
      for (const auto& x : normal) dup = dup || alpha_eq(x, cur);
      if (!dup) normal.push_back(cur);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Term next = *reduce_at(cur, i);
      bool dup = false;
      for (const auto& x : seen) {
        if (alpha_eq(x, next)) {
          dup = true;
          break;
        }
      }
      if (dup) continue;
      seen.push_back(next);
      queue.push_back(next);
    }
  }
  return normal;
}

bool structurally_below(const Term& a, const Term& b) {
  if (a.is(TermKind::Sort) && b.is(TermKind::Sort)) return a.level() <= b.level();
  if (a.is(TermKind::Pi) && b.is(TermKind::Pi)) {
    return alpha_eq(a.domain(), b.domain()) && structurally_below(a.codomain(), b.codomain());
  }
  return alpha_eq(a, b);
}

bool reference_cumul(const Term& a, const Term& b) {
  const auto na = all_normal_forms(a);
  const auto nb = all_normal_forms(b);
  EXPECT_EQ(na.size(), 1u) << surface::print(a);
  EXPECT_EQ(nb.size(), 1u) << surface::print(b);
  return structurally_below(na.front(), nb.front());
}

bool reference_conv(const Term& a, const Term& b) {
  return reference_cumul(a, b) && reference_cumul(b, a);
}

TEST(Convertible, Examples) {
  EXPECT_TRUE(convertible(Term::sort(0), Term::sort(0)));
  EXPECT_FALSE(convertible(Term::sort(0), Term::sort(1)));
  EXPECT_TRUE(convertible(parse("(fun (A : Type0) => A) Nat"), Term::nat()));
}

TEST(Convertible, NoEta) {
  EXPECT_FALSE(convertible(parse("fun (f : Nat -> Nat) => f"),
                           parse("fun (f : Nat -> Nat) => fun (x : Nat) => f x")));
}

TEST(Convertible, ComparesUnderBinders) {
  EXPECT_TRUE(convertible(parse("fun (x : Nat) => (fun (y : Nat) => y) x"),
                          parse("fun (x : Nat) => x")));
}

TEST(Cumul, Examples) {
  EXPECT_TRUE(cumul(Term::sort(0), Term::sort(1)));
  EXPECT_FALSE(cumul(Term::sort(1), Term::sort(0)));
  const Term small = parse("Nat -> Type0");
  const Term big = parse("Nat -> Type2");
  EXPECT_TRUE(reference_cumul(small, big));
  EXPECT_TRUE(cumul(small, big));
  EXPECT_FALSE(cumul(big, small));
}

TEST(Cumul, PiDomainIsInvariant) {
  EXPECT_FALSE(cumul(parse("Type0 -> Nat"), parse("Type1 -> Nat")));
  EXPECT_FALSE(cumul(parse("Type1 -> Nat"), parse("Type0 -> Nat")));
}

TEST(Cumul, SigmaAndEqAreInvariant) {
  EXPECT_FALSE(cumul(parse("Sig (a : Nat) . Type0"), parse("Sig (a : Nat) . Type1")));
  EXPECT_FALSE(cumul(parse("Eq Type1 Type0 Type0"), parse("Eq Type2 Type0 Type0")));
}

TEST(Cumul, ReducesBeforeComparing) {
  EXPECT_TRUE(cumul(parse("(fun (A : Type1) => A) Type0"), Term::sort(3)));
  EXPECT_TRUE(cumul(parse("natrec (z => Type1) Type0 (x p => p) (succ zero)"), Term::sort(1)));
}

TEST(Cumul, FuelExhaustionPropagates) {
  const Term delta = parse("fun (x : Nat) => x x");
  EXPECT_THROW(cumul(Term::app(delta, delta), Term::nat(), 500), FuelExhausted);
}

// Pairs of well-typed types: generated types, their lifts, and normal forms.
std::vector<Term> type_pool() {
  std::vector<Term> pool;
  for (const auto& g : sample(120, 3)) {
    pool.push_back(g.type);
    pool.push_back(g.base_type);
  }
  for (const char* s : {"Type0", "Type1", "Type2", "Nat -> Type0", "Nat -> Type1",
                        "(A : Type0) -> A -> A", "(A : Type1) -> A -> A", "Nat",
                        "(fun (A : Type1) => A -> A) Type0"}) {
    pool.push_back(parse(s));
  }
  return pool;
}

bool closed(const Term& t) { return t.loose_bound() == 0; }

TEST(ConversionProperties, AgreesWithReferenceRelation) {
  const auto pool = type_pool();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < 400; ++i) {
    const Term& a = pool[pick(rng)];
    const Term& b = pool[pick(rng)];
    if (!closed(a) || !closed(b)) continue;
    EXPECT_EQ(cumul(a, b), reference_cumul(a, b)) << surface::print(a) << " ≼ " << surface::print(b);
    EXPECT_EQ(convertible(a, b), reference_conv(a, b));
  }
}

TEST(ConversionProperties, ConvertibleIffEqualNormalForms) {
  const auto instances = sample(200);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Term& t = instances[i].term;
    EXPECT_TRUE(convertible(t, normalize(t)));
    const Term& u = instances[(i * 13 + 5) % instances.size()].term;
    EXPECT_EQ(convertible(t, u), alpha_eq(normalize(t), normalize(u)));
  }
}

TEST(ConversionProperties, ConvImpliesCumulBothWays) {
  const auto pool = type_pool();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = 0; j < pool.size(); j += 7) {
      const Term& a = pool[i];
      const Term& b = pool[j];
      if (convertible(a, b)) {
        EXPECT_TRUE(cumul(a, b));
        EXPECT_TRUE(cumul(b, a));
      }
      if (cumul(a, b) && cumul(b, a)) {
        EXPECT_TRUE(convertible(a, b));
      }
    }
  }
}

TEST(ConversionProperties, CumulIsTransitive) {
  const auto pool = type_pool();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  int chains = 0;
  for (int i = 0; i < 3000; ++i) {
    const Term& a = pool[pick(rng)];
    const Term& b = pool[pick(rng)];
    const Term& c = pool[pick(rng)];
    if (cumul(a, b) && cumul(b, c)) {
      EXPECT_TRUE(cumul(a, c));
      ++chains;
    }
  }
  EXPECT_GT(chains, 20);
}

TEST(ConversionProperties, ConvertibleToSortMeansWhnfIsThatSort) {
  for (const auto& g : sample(400)) {
    for (const Term& t : {g.type, g.base_type}) {
      for (std::uint32_t i = 0; i < 4; ++i) {
        if (convertible(t, Term::sort(i))) {
          EXPECT_ALPHA(whnf(t).term, Term::sort(i));
        }
      }
    }
  }
}

TEST(ConversionProperties, GeneratedLiftIsAboveBase) {
  for (const auto& g : sample(300)) EXPECT_TRUE(cumul(g.base_type, g.type));
}

}  // namespace
}  // namespace bitt
