#include <unordered_map>
#include <utility>

#include "bitt/oracle.hpp"
#include "bitt/surface.hpp"

namespace bitt::oracle {

namespace {

struct TraceNode {
  const TraceStep* step;
  std::vector<TraceNode> kids;
};

TraceNode parse_tree(const Trace& trace, std::size_t& pos) {
  if (pos >= trace.size()) throw ElaborationError("trace ends inside a rule");
  TraceNode node{&trace[pos++], {}};
  const unsigned n = bitt::premise_count(node.step->rule);
  node.kids.reserve(n);
  for (unsigned i = 0; i < n; ++i) node.kids.push_back(parse_tree(trace, pos));
  return node;
}

TraceNode parse_tree(const Trace& trace) {
  std::size_t pos = 0;
  TraceNode root = parse_tree(trace, pos);
  if (pos != trace.size()) throw ElaborationError("trailing steps after the root rule");
  return root;
}

// Type derivations nest (the type of a type is typed too); this bounds it.
constexpr int kMaxTypeDepth = 64;

class Elaborator {
 public:
  DerivationPtr run(const TraceNode& node, const DerivationPtr& ctxd) { return elab(node, ctxd); }

  // Γ ⊢ T : □i, by validity: run bidir on T and elaborate that run.
  DerivationPtr type_of(const DerivationPtr& ctxd, const Term& type) {
    auto& bucket = cache_[ctxd.get()];
    for (const auto& [t, d] : bucket) {
      if (alpha_eq(t, type)) return d;
    }
    if (++depth_ > kMaxTypeDepth) throw ElaborationError("type reconstruction does not terminate");
    InferOutcome out{type, std::nullopt};
    try {
      out = bitt::infer_constrained(ctxd->ctx, type, HeadKind::Sort, {kDefaultFuel, true});
    } catch (const TypeError& e) {
      throw ElaborationError("cannot reconstruct a sort for " + surface::print(type, ctxd->ctx) +
                             ": " + e.what());
    }
    DerivationPtr d = elab(parse_tree(*out.trace), ctxd);
    --depth_;
    if (!d->type->is(TermKind::Sort)) throw ElaborationError("reconstructed type is not sorted");
    cache_[ctxd.get()].emplace_back(type, d);
    return d;
  }

 private:
  static DerivationPtr ext(const DerivationPtr& ctxd, const DerivationPtr& sorted,
                           std::string name) {
    return extend_context(ctxd, sorted, std::move(name));
  }

  DerivationPtr node(Rule rule, const TraceStep& s, std::vector<DerivationPtr> premises,
                     const DerivationPtr& ctxd) {
    return make_typing(rule, ctxd->ctx, s.subject, s.output, std::move(premises));
  }

  DerivationPtr cumul_to(DerivationPtr d, const Term& target, const DerivationPtr& ctxd) {
    DerivationPtr target_sort = type_of(ctxd, target);
    Term subject = *d->term;
    return make_typing(Rule::Cumul, ctxd->ctx, std::move(subject), target, {d, target_sort});
  }

  DerivationPtr elab(const TraceNode& n, const DerivationPtr& ctxd) {
    const TraceStep& s = *n.step;
    if (!alpha_eq(s.ctx, ctxd->ctx)) throw ElaborationError("trace context drifted");
    const Term& t = s.subject;
    const auto& k = n.kids;

    switch (s.rule) {
      case BidirRule::Sort:
        return node(Rule::Sort, s, {ctxd}, ctxd);
      case BidirRule::Var:
        return node(Rule::Var, s, {ctxd}, ctxd);
      case BidirRule::NatType:
        return node(Rule::NatType, s, {ctxd}, ctxd);
      case BidirRule::Zero:
        return node(Rule::Zero, s, {ctxd}, ctxd);
      case BidirRule::Succ:
        return node(Rule::Succ, s, {elab(k[0], ctxd)}, ctxd);
      case BidirRule::Prod:
      case BidirRule::SigmaType: {
        DerivationPtr a = elab(k[0], ctxd);
        DerivationPtr b = elab(k[1], ext(ctxd, a, t.name(0)));
        const Rule r = s.rule == BidirRule::Prod ? Rule::Prod : Rule::SigmaType;
        return node(r, s, {a, b}, ctxd);
      }
      case BidirRule::Abs: {
        DerivationPtr a = elab(k[0], ctxd);
        DerivationPtr inner = ext(ctxd, a, t.name(0));
        DerivationPtr body = elab(k[1], inner);
        // The product premise is not in the run; rebuild it from the body type.
        DerivationPtr cod = type_of(inner, *body->type);
        const Term pi = Term::pi(t.domain(), *body->type, t.name(0));
        DerivationPtr prod = make_typing(
            Rule::Prod, ctxd->ctx, pi, Term::sort(max(a->type->level(), cod->type->level())),
            {a, cod});
        return node(Rule::Abs, s, {prod, body}, ctxd);
      }
      case BidirRule::App:
        return node(Rule::App, s, {elab(k[0], ctxd), elab(k[1], ctxd)}, ctxd);
      case BidirRule::SigmaCons: {
        DerivationPtr a = elab(k[0], ctxd);
        DerivationPtr b = elab(k[1], ext(ctxd, a, t.name(0)));
        return node(Rule::SigmaCons, s, {a, b, elab(k[2], ctxd), elab(k[3], ctxd)}, ctxd);
      }
      case BidirRule::SigmaRec: {
        DerivationPtr scrut = elab(k[0], ctxd);
        const Term& sig = *scrut->type;
        DerivationPtr motive = elab(k[1], ext(ctxd, type_of(ctxd, sig), t.name(0)));
        DerivationPtr with_a = ext(ctxd, type_of(ctxd, sig.child(0)), t.name(1));
        DerivationPtr with_b = ext(with_a, type_of(with_a, sig.child(1)), t.name(2));
        DerivationPtr branch = elab(k[2], with_b);
        return node(Rule::SigmaRec, s, {motive, branch, scrut}, ctxd);
      }
      case BidirRule::NatRec: {
        DerivationPtr scrut = elab(k[0], ctxd);
        DerivationPtr nat =
            make_typing(Rule::NatType, ctxd->ctx, Term::nat(), Term::sort(0), {ctxd});
        DerivationPtr with_n = ext(ctxd, nat, t.name(0));
        DerivationPtr motive = elab(k[1], with_n);
        DerivationPtr base = elab(k[2], ctxd);
        DerivationPtr with_x = ext(ctxd, nat, t.name(1));
        // The motive lives in Γ, z : ℕ, which is also Γ, x : ℕ up to names.
        DerivationPtr with_p = ext(with_x, motive, t.name(2));
        DerivationPtr step = elab(k[3], with_p);
        return node(Rule::NatRec, s, {motive, base, step, scrut}, ctxd);
      }
      case BidirRule::EqType:
        return node(Rule::EqType, s, {elab(k[0], ctxd), elab(k[1], ctxd), elab(k[2], ctxd)},
                    ctxd);
      case BidirRule::Refl:
        return node(Rule::Refl, s, {elab(k[0], ctxd), elab(k[1], ctxd)}, ctxd);
      case BidirRule::EqRec: {
        DerivationPtr scrut = elab(k[0], ctxd);
        const Term& eq = *scrut->type;
        DerivationPtr with_x = ext(ctxd, type_of(ctxd, eq.child(0)), t.name(0));
        const Term family = Term::eq(lift(eq.child(0), 1, 0), lift(eq.child(1), 1, 0), Term::var(0));
        DerivationPtr with_z = ext(with_x, type_of(with_x, family), t.name(1));
        DerivationPtr motive = elab(k[1], with_z);
        DerivationPtr branch = elab(k[2], ctxd);
        return node(Rule::EqRec, s, {motive, branch, scrut}, ctxd);
      }
      case BidirRule::Cumul:
        return cumul_to(elab(k[0], ctxd), s.output, ctxd);
      case BidirRule::SortInf:
      case BidirRule::ProdInf:
      case BidirRule::SigmaInf:
      case BidirRule::NatInf:
      case BidirRule::EqInf: {
        DerivationPtr d = elab(k[0], ctxd);
        if (alpha_eq(*d->type, s.output)) return d;
        return cumul_to(std::move(d), s.output, ctxd);
      }
    }
    throw ElaborationError("unknown bidirectional rule");
  }

  std::unordered_map<const Derivation*, std::vector<std::pair<Term, DerivationPtr>>> cache_;
  int depth_ = 0;
};

}  // namespace

DerivationPtr elaborate(const Trace& trace, const DerivationPtr& ctx_derivation) {
  if (trace.empty()) throw ElaborationError("empty trace");
  return Elaborator().run(parse_tree(trace), ctx_derivation);
}

DerivationPtr type_derivation(const DerivationPtr& ctx_derivation, const Term& type) {
  return Elaborator().type_of(ctx_derivation, type);
}

DerivationPtr elaborate_context(const Context& ctx) {
  DerivationPtr d = empty_context();
  Elaborator e;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    d = extend_context(d, e.type_of(d, ctx.decls()[i]), ctx.names()[i]);
  }
  return d;
}

}  // namespace bitt::oracle
