#include <functional>
#include <memory>
#include <random>

#include "support.hpp"

#include "bitt/reduction.hpp"

namespace bitt {
namespace {

using test::parse;
using test::sample;

// Environment-passing evaluator for closed terms, written against the
// recursor equations directly. Used as the reference for normal forms of
// closed ℕ-valued terms.
struct Value;
using ValuePtr = std::shared_ptr<const Value>;
using Env = std::vector<ValuePtr>;  // back() is index 0

struct Value {
  enum class Tag { Num, Closure, Pair, Refl, Type } tag;
  unsigned num = 0;
  std::optional<Term> body;
  Env env;
  ValuePtr fst, snd;
};

ValuePtr num(unsigned n) { return std::make_shared<Value>(Value{Value::Tag::Num, n, {}, {}, {}, {}}); }
ValuePtr opaque(Value::Tag tag) { return std::make_shared<Value>(Value{tag, 0, {}, {}, {}, {}}); }

ValuePtr eval(const Term& t, const Env& env);

ValuePtr eval_in(const Term& t, Env env, std::initializer_list<ValuePtr> extra) {
  for (const auto& v : extra) env.push_back(v);
  return eval(t, env);
}

ValuePtr eval(const Term& t, const Env& env) {
  switch (t.kind()) {
    case TermKind::Var:
      return env.at(env.size() - 1 - t.index());
    case TermKind::Lambda:
      return std::make_shared<Value>(Value{Value::Tag::Closure, 0, t.body(), env, {}, {}});
    case TermKind::App: {
      ValuePtr f = eval(t.head(), env);
      ValuePtr a = eval(t.arg(), env);
      if (f->tag != Value::Tag::Closure) throw std::logic_error("applying a non-function");
      return eval_in(*f->body, f->env, {a});
    }
    case TermKind::Zero:
      return num(0);
    case TermKind::Succ:
      return num(eval(t.child(0), env)->num + 1);
    case TermKind::NatRec: {
      const unsigned n = eval(t.child(3), env)->num;
      ValuePtr acc = eval(t.child(1), env);
      for (unsigned i = 0; i < n; ++i) acc = eval_in(t.child(2), env, {num(i), acc});
      return acc;
    }
    case TermKind::Pair: {
      auto v = std::make_shared<Value>(Value{Value::Tag::Pair, 0, {}, {}, {}, {}});
      v->fst = eval(t.child(2), env);
      v->snd = eval(t.child(3), env);
      return v;
    }
    case TermKind::SigRec: {
      ValuePtr p = eval(t.child(2), env);
      return eval_in(t.child(1), env, {p->fst, p->snd});
    }
    case TermKind::Refl:
      return opaque(Value::Tag::Refl);
    case TermKind::EqRec:
      return eval(t.child(1), env);
    default:
      return opaque(Value::Tag::Type);
  }
}

TEST(Step, BetaContracts) {
  EXPECT_ALPHA(*step(parse("(fun (x : Nat) => x) zero")), Term::zero());
}

TEST(Step, NatRecOnZeroGivesBase) {
  const Term t = parse("natrec (z => Nat) (succ zero) (x p => p) zero");
  EXPECT_ALPHA(*step(t), Term::numeral(1));
}

TEST(Step, SortIsNormal) { EXPECT_FALSE(step(Term::sort(0)).has_value()); }

TEST(Step, LeftmostOutermostFirst) {
  // Outer β-redex is contracted before the one in its argument.
  const Term t = parse("(fun (x : Nat) => zero) ((fun (y : Nat) => y) zero)");
  EXPECT_ALPHA(*step(t), Term::zero());
  EXPECT_ALPHA(*reduce_at(t, 0), Term::zero());
  EXPECT_EQ(count_redexes(t), 2u);
  EXPECT_ALPHA(*reduce_at(t, 1), parse("(fun (x : Nat) => zero) zero"));
  EXPECT_FALSE(reduce_at(t, 2).has_value());
}

TEST(Step, IotaRules) {
  EXPECT_ALPHA(*step(parse("natrec (z => Nat) zero (x p => succ p) (succ zero)")),
               parse("succ (natrec (z => Nat) zero (x p => succ p) zero)"));
  EXPECT_ALPHA(*step(parse("sigrec (z => Nat) (x y => y) (pair (x : Nat => Nat) zero (succ zero))")),
               Term::numeral(1));
  EXPECT_ALPHA(*step(parse("eqrec (x z => Nat) (succ zero) (refl Nat zero)")), Term::numeral(1));
}

TEST(Whnf, SingleHeadBeta) {
  const WhnfResult r = whnf(parse("(fun (A : Type0) => A) Nat"));
  EXPECT_ALPHA(r.term, Term::nat());
  EXPECT_EQ(r.steps, 1u);
}

TEST(Whnf, PiIsAHead) {
  const Term pi = parse("Nat -> Nat");
  const WhnfResult r = whnf(pi);
  EXPECT_ALPHA(r.term, pi);
  EXPECT_EQ(r.steps, 0u);
}

TEST(Whnf, SigRecOnPairSubstitutesBoth) {
  // b = pair of its two bound variables, in swapped order.
  const Term t = parse(
      "sigrec (z => Sig (a : Nat) . Nat) (x y => pair (a : Nat => Nat) y x) "
      "(pair (a : Nat => Nat) zero (succ zero))");
  EXPECT_ALPHA(whnf(t).term, parse("pair (a : Nat => Nat) (succ zero) zero"));
}

TEST(Whnf, DoesNotReduceUnderBinders) {
  const Term t = parse("fun (x : Nat) => (fun (y : Nat) => y) x");
  EXPECT_ALPHA(whnf(t).term, t);
  const Term s = parse("succ ((fun (y : Nat) => y) zero)");
  EXPECT_ALPHA(whnf(s).term, s);
}

TEST(Normalize, Examples) {
  EXPECT_ALPHA(normalize(parse("(fun (x : Nat) => succ x) zero")), Term::numeral(1));
  EXPECT_ALPHA(normalize(Term::sort(3)), Term::sort(3));
}

TEST(Normalize, NatRecUnfoldsTwice) {
  const Term t = parse("natrec (z => Nat) zero (x p => succ p) (succ (succ zero))");
  // Independent evaluation first, then the normal form must be that numeral.
  EXPECT_EQ(eval(t, {})->num, 2u);
  EXPECT_ALPHA(normalize(t), Term::numeral(2));
  // Step-by-step: two ι-steps with successor, one with zero.
  Term cur = t;
  int steps = 0;
  while (auto next = step(cur)) {
    cur = *next;
    ++steps;
  }
  EXPECT_EQ(steps, 3);
  EXPECT_ALPHA(cur, Term::numeral(2));
}

TEST(Normalize, AdditionTwoPlusTwo) {
  const Term plus = parse(
      "fun (m : Nat) => fun (n : Nat) => natrec (z => Nat) n (x p => succ p) m");
  const Term t = Term::apps(plus, {Term::numeral(2), Term::numeral(2)});
  EXPECT_EQ(eval(t, {})->num, 4u);
  EXPECT_ALPHA(normalize(t), Term::numeral(4));
}

TEST(Normalize, DivergenceExhaustsFuel) {
  const Term delta = parse("fun (x : Nat) => x x");
  const Term omega = Term::app(delta, delta);
  EXPECT_THROW(normalize(omega, 1000), FuelExhausted);
  EXPECT_THROW(whnf(omega, 1000), FuelExhausted);
  try {
    whnf(omega, 17);
  } catch (const FuelExhausted& e) {
    EXPECT_EQ(e.limit(), 17u);
  }
}

TEST(ReductionProperties, ClosedNatTermsNormalizeToTheirValue) {
  unsigned checked = 0;
  for (const auto& g : sample(1500, 5)) {
    if (!g.ctx.empty() || !alpha_eq(normalize(g.type), Term::nat())) continue;
    const unsigned v = eval(g.term, {})->num;
    EXPECT_ALPHA(normalize(g.term), Term::numeral(v));
    ++checked;
  }
  EXPECT_GT(checked, 20u);
}

TEST(ReductionProperties, WhnfIsReachableByHeadSteps) {
  for (const auto& g : sample(400)) {
    const WhnfResult r = whnf(g.term);
    Term cur = g.term;
    for (std::uint64_t i = 0; i < r.steps; ++i) {
      auto next = head_step(cur);
      ASSERT_TRUE(next.has_value());
      cur = *next;
    }
    EXPECT_ALPHA(cur, r.term);
    EXPECT_FALSE(head_step(r.term).has_value());
    EXPECT_FALSE(is_redex(r.term));
  }
}

TEST(ReductionProperties, NormalizeIsIdempotentAndNormal) {
  for (const auto& g : sample(400)) {
    const Term n = normalize(g.term);
    EXPECT_ALPHA(normalize(n), n);
    EXPECT_FALSE(step(n).has_value());
    EXPECT_EQ(count_redexes(n), 0u);
  }
}

TEST(ReductionProperties, ChurchRosserUnderRandomRedexChoices) {
  std::mt19937_64 rng(42);
  for (const auto& g : sample(400)) {
    Term cur = g.term;
    for (int k = 0; k < 5; ++k) {
      const std::size_t n = count_redexes(cur);
      if (n == 0) break;
      cur = *reduce_at(cur, std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    }
    EXPECT_ALPHA(normalize(cur), normalize(g.term));
  }
}

TEST(ReductionProperties, StepIsFirstRedex) {
  for (const auto& g : sample(300)) {
    const auto a = step(g.term);
    const auto b = reduce_at(g.term, 0);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      EXPECT_ALPHA(*a, *b);
    }
    EXPECT_EQ(a.has_value(), count_redexes(g.term) > 0);
  }
}

}  // namespace
}  // namespace bitt
