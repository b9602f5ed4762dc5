#include <optional>
#include <string>
#include <unordered_set>

#include "bitt/conversion.hpp"
#include "bitt/oracle.hpp"
#include "bitt/surface.hpp"

namespace bitt::oracle {

namespace {

// A failed side condition, raised while checking one node.
struct Violation {
  std::string what;
};

std::string show(const Term& t, const Context& ctx) { return surface::print(t, ctx); }

const Derivation& premise(const Derivation& d, std::size_t i) { return *d.premises[i]; }

void require(bool cond, const std::string& what) {
  if (!cond) throw Violation{what};
}

void expect_context(const Derivation& p, const Context& ctx, const char* role) {
  require(is_context_rule(p.rule), std::string(role) + ": expected a context judgment");
  require(alpha_eq(p.ctx, ctx), std::string(role) + ": context mismatch");
}

// Γ ⊢ term : type, with either side optional.
void expect_typing(const Derivation& p, const Context& ctx, const std::optional<Term>& term,
                   const std::optional<Term>& type, const char* role) {
  require(!is_context_rule(p.rule), std::string(role) + ": expected a typing judgment");
  require(alpha_eq(p.ctx, ctx), std::string(role) + ": context mismatch");
  if (term) {
    require(alpha_eq(*p.term, *term), std::string(role) + ": subject is " + show(*p.term, ctx) +
                                          ", expected " + show(*term, ctx));
  }
  if (type) {
    require(alpha_eq(*p.type, *type), std::string(role) + ": type is " + show(*p.type, ctx) +
                                          ", expected " + show(*type, ctx));
  }
}

Level expect_sorted(const Derivation& p, const Context& ctx, const Term& term, const char* role) {
  expect_typing(p, ctx, term, std::nullopt, role);
  require(p.type->is(TermKind::Sort), std::string(role) + ": type is not a sort");
  return p.type->level();
}

void expect_kind(const Term& t, TermKind kind, const char* role) {
  require(t.is(kind), std::string(role) + ": expected " + kind_name(kind) + ", got " +
                          kind_name(t.kind()));
}

void check_node(const Derivation& d) {
  require(d.premises.size() == premise_count(d.rule), "wrong number of premises");
  for (const auto& p : d.premises) require(p != nullptr, "missing premise");
  const Context& ctx = d.ctx;

  if (is_context_rule(d.rule)) {
    require(!d.term && !d.type, "context judgment carries a subject");
    if (d.rule == Rule::Empty) {
      require(ctx.empty(), "Empty rule with a non-empty context");
      return;
    }
    require(!ctx.empty(), "Ext rule with an empty context");
    const Context prefix = ctx.prefix(ctx.size() - 1);
    expect_context(premise(d, 0), prefix, "context premise");
    expect_sorted(premise(d, 1), prefix, ctx.decls().back(), "declaration premise");
    return;
  }

  require(d.term && d.type, "typing judgment without subject or type");
  const Term& t = *d.term;
  const Term& ty = *d.type;

  switch (d.rule) {
    case Rule::Sort:
      expect_kind(t, TermKind::Sort, "subject");
      expect_context(premise(d, 0), ctx, "context premise");
      require(ty.is(TermKind::Sort) && ty.level() == t.level().succ(), "level mismatch");
      return;
    case Rule::Var:
      expect_kind(t, TermKind::Var, "subject");
      expect_context(premise(d, 0), ctx, "context premise");
      require(t.index() < ctx.size(), "variable not in context");
      require(alpha_eq(ty, ctx.lookup(t.index())), "type differs from the declaration");
      return;
    case Rule::NatType:
      expect_kind(t, TermKind::Nat, "subject");
      expect_context(premise(d, 0), ctx, "context premise");
      require(ty.is(TermKind::Sort) && ty.level() == Level(0), "level mismatch");
      return;
    case Rule::Zero:
      expect_kind(t, TermKind::Zero, "subject");
      expect_context(premise(d, 0), ctx, "context premise");
      expect_kind(ty, TermKind::Nat, "type");
      return;
    case Rule::Prod:
    case Rule::SigmaType: {
      expect_kind(t, d.rule == Rule::Prod ? TermKind::Pi : TermKind::Sigma, "subject");
      const Level i = expect_sorted(premise(d, 0), ctx, t.child(0), "domain premise");
      const Level j = expect_sorted(premise(d, 1), ctx.extended(t.child(0)), t.child(1),
                                    "codomain premise");
      require(ty.is(TermKind::Sort) && ty.level() == max(i, j), "level mismatch");
      return;
    }
    case Rule::Abs: {
      expect_kind(t, TermKind::Lambda, "subject");
      expect_kind(ty, TermKind::Pi, "type");
      require(alpha_eq(ty.domain(), t.domain()), "product domain differs from the binder type");
      expect_sorted(premise(d, 0), ctx, ty, "product premise");
      expect_typing(premise(d, 1), ctx.extended(t.domain()), t.body(), ty.codomain(),
                    "body premise");
      return;
    }
    case Rule::App: {
      expect_kind(t, TermKind::App, "subject");
      const Derivation& fn = premise(d, 0);
      expect_typing(fn, ctx, t.head(), std::nullopt, "function premise");
      expect_kind(*fn.type, TermKind::Pi, "function type");
      expect_typing(premise(d, 1), ctx, t.arg(), fn.type->domain(), "argument premise");
      require(alpha_eq(ty, subst(fn.type->codomain(), t.arg(), 0)),
              "type is not the instantiated codomain");
      return;
    }
    case Rule::Cumul: {
      const Derivation& inner = premise(d, 0);
      expect_typing(inner, ctx, t, std::nullopt, "subject premise");
      expect_sorted(premise(d, 1), ctx, ty, "target type premise");
      bool ok = false;
      try {
        ok = cumul(*inner.type, ty);
      } catch (const FuelExhausted&) {
        throw Violation{"cumulativity check ran out of fuel"};
      }
      require(ok, "cumulativity fails: " + show(*inner.type, ctx) + " is not below " +
                      show(ty, ctx));
      return;
    }
    case Rule::SigmaCons: {
      expect_kind(t, TermKind::Pair, "subject");
      const Term& a_ty = t.child(0);
      const Term& b_ty = t.child(1);
      expect_sorted(premise(d, 0), ctx, a_ty, "first type premise");
      expect_sorted(premise(d, 1), ctx.extended(a_ty), b_ty, "second type premise");
      expect_typing(premise(d, 2), ctx, t.child(2), a_ty, "first component premise");
      expect_typing(premise(d, 3), ctx, t.child(3), subst(b_ty, t.child(2), 0),
                    "second component premise");
      require(alpha_eq(ty, Term::sigma(a_ty, b_ty)), "type is not the pair's sigma type");
      return;
    }
    case Rule::SigmaRec: {
      expect_kind(t, TermKind::SigRec, "subject");
      const Term& motive = t.child(0);
      const Term& scrutinee = t.child(2);
      const Derivation& s = premise(d, 2);
      expect_typing(s, ctx, scrutinee, std::nullopt, "scrutinee premise");
      expect_kind(*s.type, TermKind::Sigma, "scrutinee type");
      const Term& a_ty = s.type->child(0);
      const Term& b_ty = s.type->child(1);
      expect_sorted(premise(d, 0), ctx.extended(*s.type), motive, "motive premise");
      const Term pair =
          Term::pair(lift(a_ty, 2, 0), lift(b_ty, 2, 1), Term::var(1), Term::var(0));
      expect_typing(premise(d, 1), ctx.extended(a_ty, b_ty), t.child(1),
                    subst(lift(motive, 2, 1), pair, 0), "branch premise");
      require(alpha_eq(ty, subst(motive, scrutinee, 0)), "type is not the motive at the scrutinee");
      return;
    }
    case Rule::Succ:
      expect_kind(t, TermKind::Succ, "subject");
      expect_kind(ty, TermKind::Nat, "type");
      expect_typing(premise(d, 0), ctx, t.child(0), Term::nat(), "predecessor premise");
      return;
    case Rule::NatRec: {
      expect_kind(t, TermKind::NatRec, "subject");
      const Term& motive = t.child(0);
      const Term& scrutinee = t.child(3);
      expect_sorted(premise(d, 0), ctx.extended(Term::nat()), motive, "motive premise");
      expect_typing(premise(d, 1), ctx, t.child(1), subst(motive, Term::zero(), 0),
                    "zero branch premise");
      expect_typing(premise(d, 2), ctx.extended(Term::nat(), motive), t.child(2),
                    subst(lift(motive, 2, 1), Term::succ(Term::var(1)), 0),
                    "successor branch premise");
      expect_typing(premise(d, 3), ctx, scrutinee, Term::nat(), "scrutinee premise");
      require(alpha_eq(ty, subst(motive, scrutinee, 0)), "type is not the motive at the scrutinee");
      return;
    }
    case Rule::EqType: {
      expect_kind(t, TermKind::Eq, "subject");
      const Level i = expect_sorted(premise(d, 0), ctx, t.child(0), "carrier premise");
      expect_typing(premise(d, 1), ctx, t.child(1), t.child(0), "left side premise");
      expect_typing(premise(d, 2), ctx, t.child(2), t.child(0), "right side premise");
      require(ty.is(TermKind::Sort) && ty.level() == i, "level mismatch");
      return;
    }
    case Rule::Refl:
      expect_kind(t, TermKind::Refl, "subject");
      expect_sorted(premise(d, 0), ctx, t.child(0), "carrier premise");
      expect_typing(premise(d, 1), ctx, t.child(1), t.child(0), "value premise");
      require(alpha_eq(ty, Term::eq(t.child(0), t.child(1), t.child(1))),
              "type is not the reflexive equality");
      return;
    case Rule::EqRec: {
      expect_kind(t, TermKind::EqRec, "subject");
      const Term& motive = t.child(0);
      const Term& scrutinee = t.child(2);
      const Derivation& s = premise(d, 2);
      expect_typing(s, ctx, scrutinee, std::nullopt, "scrutinee premise");
      expect_kind(*s.type, TermKind::Eq, "scrutinee type");
      const Term& a_ty = s.type->child(0);
      const Term& lhs = s.type->child(1);
      const Term& rhs = s.type->child(2);
      const Term family = Term::eq(lift(a_ty, 1, 0), lift(lhs, 1, 0), Term::var(0));
      expect_sorted(premise(d, 0), ctx.extended(a_ty, family), motive, "motive premise");
      expect_typing(premise(d, 1), ctx, t.child(1), subst2(motive, lhs, Term::refl(a_ty, lhs)),
                    "branch premise");
      require(alpha_eq(ty, subst2(motive, rhs, scrutinee)),
              "type is not the motive at the scrutinee");
      return;
    }
    case Rule::Empty:
    case Rule::Ext:
      break;
  }
  throw Violation{"unknown rule"};
}

class Validator {
 public:
  Validation run(const DerivationPtr& root) {
    Validation out;
    if (!root) {
      out.ok = false;
      out.diagnostic = "missing derivation";
      out.path = "root";
      return out;
    }
    visit(*root, "root", out);
    return out;
  }

 private:
  bool visit(const Derivation& d, const std::string& path, Validation& out) {
    if (done_.contains(&d)) return true;
    try {
      check_node(d);
    } catch (const Violation& v) {
      out.ok = false;
      out.diagnostic = std::string(rule_name(d.rule)) + ": " + v.what;
      out.path = path;
      return false;
    }
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      if (!visit(*d.premises[i], path + "/" + std::to_string(i), out)) return false;
    }
    done_.insert(&d);
    return true;
  }

  std::unordered_set<const Derivation*> done_;
};

}  // namespace

Validation validate(const DerivationPtr& d) { return Validator().run(d); }

}  // namespace bitt::oracle
