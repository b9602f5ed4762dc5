#include <regex>

#include "support.hpp"

namespace bitt {
namespace {

using test::parse;
using test::sample;

surface::Position parse_error_at(std::string_view text) {
  try {
    surface::parse(text);
  } catch (const surface::ParseError& e) {
    return e.position();
  }
  ADD_FAILURE() << "no ParseError for: " << text;
  return {};
}

TEST(Parse, Atoms) {
  EXPECT_ALPHA(parse("Type0"), Term::sort(0));
  EXPECT_ALPHA(parse("Type12"), Term::sort(12));
  EXPECT_ALPHA(parse("Nat"), Term::nat());
  EXPECT_ALPHA(parse("zero"), Term::zero());
}

TEST(Parse, BinderResolution) {
  EXPECT_ALPHA(parse("fun (x : Nat) => x"), Term::lambda(Term::nat(), Term::var(0)));
}

TEST(Parse, DependentArrowIndices) {
  EXPECT_ALPHA(parse("(A : Type0) -> A -> A"),
               Term::pi(Term::sort(0), Term::pi(Term::var(0), Term::var(1))));
}

TEST(Parse, ArrowIsRightAssociative) {
  EXPECT_ALPHA(parse("Nat -> Nat -> Nat"),
               Term::pi(Term::nat(), Term::pi(Term::nat(), Term::nat())));
  EXPECT_ALPHA(parse("(Nat -> Nat) -> Nat"),
               Term::pi(Term::pi(Term::nat(), Term::nat()), Term::nat()));
}

TEST(Parse, ApplicationIsLeftAssociative) {
  EXPECT_ALPHA(parse("f a b", {"f", "a", "b"}),
               Term::app(Term::app(Term::var(2), Term::var(1)), Term::var(0)));
}

TEST(Parse, KeywordForms) {
  EXPECT_ALPHA(parse("Sig (x : Nat) . Eq Nat x x"),
               Term::sigma(Term::nat(), Term::eq(Term::nat(), Term::var(0), Term::var(0))));
  EXPECT_ALPHA(parse("pair (x : Nat => Nat) zero (succ zero)"),
               Term::pair(Term::nat(), Term::nat(), Term::zero(), Term::numeral(1)));
  EXPECT_ALPHA(parse("sigrec (z => Nat) (x y => y) s", {"s"}),
               Term::sig_rec(Term::nat(), Term::var(0), Term::var(0)));
  EXPECT_ALPHA(parse("natrec (z => Nat) n (x p => x) n", {"n"}),
               Term::nat_rec(Term::nat(), Term::var(0), Term::var(1), Term::var(0)));
  EXPECT_ALPHA(parse("eqrec (x z => Eq Nat x x) b e", {"b", "e"}),
               Term::eq_rec(Term::eq(Term::nat(), Term::var(1), Term::var(1)), Term::var(1),
                            Term::var(0)));
  EXPECT_ALPHA(parse("refl Nat zero"), Term::refl(Term::nat(), Term::zero()));
}

TEST(Parse, ShadowingPicksInnermost) {
  EXPECT_ALPHA(parse("fun (x : Nat) => fun (x : Nat) => x"),
               Term::lambda(Term::nat(), Term::lambda(Term::nat(), Term::var(0))));
}

TEST(Parse, UnicodeIdentifiers) {
  EXPECT_ALPHA(parse("fun (α : Type0) => fun (x₁ : α) => x₁"),
               parse("fun (A : Type0) => fun (x : A) => x"));
}

TEST(Parse, Comments) {
  const auto file = surface::parse("-- leading comment\ndef a := zero. -- trailing\n");
  ASSERT_EQ(file.definitions.size(), 1u);
}

TEST(Parse, Definitions) {
  const auto file = surface::parse(
      "def id : (A : Type0) -> A -> A := fun (A : Type0) => fun (x : A) => x.\n"
      "def n := id Nat zero.\n");
  ASSERT_EQ(file.definitions.size(), 2u);
  EXPECT_EQ(file.definitions[0].name, "id");
  EXPECT_TRUE(file.definitions[0].annotation.has_value());
  EXPECT_FALSE(file.definitions[1].annotation.has_value());
  EXPECT_EQ(file.definitions[1].pos.line, 2u);
  EXPECT_ALPHA(surface::resolve(*file.definitions[1].body, {"id"}),
               Term::apps(Term::var(0), {Term::nat(), Term::zero()}));
}

TEST(ParseErrors, CarryLineAndColumn) {
  const auto p = parse_error_at("def a := zero.\ndef b := fun (x Nat) => x.");
  EXPECT_EQ(p.line, 2u);
  EXPECT_EQ(p.column, 17u);
  EXPECT_EQ(parse_error_at("def a := zero").line, 1u);  // missing final dot
  parse_error_at("def a := (zero.");
  parse_error_at("def := zero.");
  parse_error_at("def a := Type.");
  parse_error_at("def a := zero. junk");
}

TEST(ParseErrors, DuplicateDefinition) {
  try {
    surface::parse("def a := zero.\ndef a := Nat.");
    FAIL();
  } catch (const surface::ParseError& e) {
    EXPECT_EQ(e.position().line, 2u);
    EXPECT_NE(e.message().find("duplicate"), std::string::npos);
  }
}

TEST(ParseErrors, UnboundNameHasPosition) {
  try {
    parse("fun (x : Nat) => y");
    FAIL();
  } catch (const surface::UnboundName& e) {
    EXPECT_EQ(e.name(), "y");
    EXPECT_EQ(e.position().line, 1u);
    EXPECT_EQ(e.position().column, 18u);
  }
}

TEST(ParseErrors, ForwardReferenceIsUnbound) {
  const auto file = surface::parse("def a := b.\ndef b := zero.");
  EXPECT_THROW(surface::resolve(*file.definitions[0].body, {}), surface::UnboundName);
}

TEST(Print, Examples) {
  EXPECT_EQ(surface::print(Term::sort(2)), "Type2");
  EXPECT_EQ(surface::print(Term::pi(Term::nat(), Term::nat())), "Nat -> Nat");
  EXPECT_EQ(surface::print(Term::lambda(Term::sort(0), Term::var(0))), "fun (x0 : Type0) => x0");
}

TEST(Print, KeepsUsableHints) {
  EXPECT_EQ(surface::print(parse("fun (A : Type0) => fun (x : A) => x")),
            "fun (A : Type0) => fun (x : A) => x");
  EXPECT_EQ(surface::print(parse("(A : Type0) -> A -> A")), "(A : Type0) -> A -> A");
}

TEST(Print, AvoidsCapture) {
  // Inner binder named like a free outer variable must be renamed.
  const Term t = Term::lambda(Term::nat(), Term::app(Term::var(1), Term::var(0)), "f");
  const std::string s = surface::print(t, {"f"});
  EXPECT_ALPHA(parse(s, {"f"}), t);
}

TEST(Print, Parenthesization) {
  EXPECT_EQ(surface::print(parse("(Nat -> Nat) -> Nat")), "(Nat -> Nat) -> Nat");
  EXPECT_EQ(surface::print(parse("succ (succ zero)")), "succ (succ zero)");
  EXPECT_EQ(surface::print(parse("(fun (x : Nat) => x) zero")), "(fun (x : Nat) => x) zero");
}

TEST(Print, UsesContextNames) {
  Context ctx;
  ctx.push(Term::sort(0), "A");
  ctx.push(Term::var(0), "a");
  EXPECT_EQ(surface::print(Term::eq(Term::var(1), Term::var(0), Term::var(0)), ctx), "Eq A a a");
}

TEST(SurfaceProperties, RoundTripOnGeneratedTerms) {
  for (const auto& g : sample(500, 5)) {
    const auto scope = surface::scope_names(g.ctx);
    for (const Term& t : {g.term, g.type}) {
      const std::string text = surface::print(t, scope);
      EXPECT_ALPHA(parse(text, scope), t) << text;
      EXPECT_EQ(surface::print(parse(text, scope), scope), text);
    }
  }
}

// Arrow sugar appears exactly for products whose codomain ignores the binder.
void collect_pis(const Term& t, std::vector<Term>& out) {
  if (t.is(TermKind::Pi)) out.push_back(t);
  for (const Term& c : t.children()) collect_pis(c, out);
}

TEST(SurfaceProperties, ArrowSugarExactlyWhenNonDependent) {
  // The binder form is the only place "(name : " can open a printed product.
  const std::regex binder_form(R"(^\([^\s()]+ : )");
  int dependent = 0, plain = 0;
  for (const auto& g : sample(500, 5)) {
    std::vector<Term> pis;
    collect_pis(g.type, pis);
    collect_pis(g.term, pis);
    for (const Term& pi : pis) {
      std::vector<std::string> scope;
      for (std::uint32_t i = 0; i < pi.loose_bound(); ++i) scope.push_back("v" + std::to_string(i));
      const std::string s = surface::print(pi, scope);
      const bool uses = occurs_free(pi.codomain(), 0);
      (uses ? dependent : plain)++;
      EXPECT_EQ(std::regex_search(s, binder_form), uses) << s;
    }
  }
  EXPECT_GT(dependent, 0);
  EXPECT_GT(plain, 0);
}

}  // namespace
}  // namespace bitt
