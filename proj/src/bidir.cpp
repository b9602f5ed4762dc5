#include "bitt/bidir.hpp"

#include <utility>

#include "bitt/conversion.hpp"

namespace bitt {

const char* head_name(HeadKind head) {
  switch (head) {
    case HeadKind::Sort: return "sort";
    case HeadKind::Pi: return "product";
    case HeadKind::Sigma: return "sigma";
    case HeadKind::Nat: return "Nat";
    case HeadKind::Eq: return "equality";
  }
  return "?";
}

const char* rule_name(BidirRule rule) {
  switch (rule) {
    case BidirRule::Sort: return "Sort";
    case BidirRule::Var: return "Var";
    case BidirRule::Prod: return "Prod";
    case BidirRule::Abs: return "Abs";
    case BidirRule::App: return "App";
    case BidirRule::SigmaType: return "Sigma-type";
    case BidirRule::SigmaCons: return "Sigma-cons";
    case BidirRule::SigmaRec: return "Sigma-rec";
    case BidirRule::NatType: return "Nat-type";
    case BidirRule::Zero: return "Nat-zero";
    case BidirRule::Succ: return "Nat-succ";
    case BidirRule::NatRec: return "Nat-rec";
    case BidirRule::EqType: return "Eq-type";
    case BidirRule::Refl: return "Eq-refl";
    case BidirRule::EqRec: return "Eq-rec";
    case BidirRule::Cumul: return "Cumul";
    case BidirRule::SortInf: return "Sort-Inf";
    case BidirRule::ProdInf: return "Prod-Inf";
    case BidirRule::SigmaInf: return "Sigma-Inf";
    case BidirRule::NatInf: return "Nat-Inf";
    case BidirRule::EqInf: return "Eq-Inf";
  }
  return "?";
}

unsigned premise_count(BidirRule rule) {
  switch (rule) {
    case BidirRule::Sort:
    case BidirRule::Var:
    case BidirRule::NatType:
    case BidirRule::Zero:
      return 0;
    case BidirRule::Succ:
    case BidirRule::Cumul:
    case BidirRule::SortInf:
    case BidirRule::ProdInf:
    case BidirRule::SigmaInf:
    case BidirRule::NatInf:
    case BidirRule::EqInf:
      return 1;
    case BidirRule::Prod:
    case BidirRule::Abs:
    case BidirRule::App:
    case BidirRule::SigmaType:
    case BidirRule::Refl:
      return 2;
    case BidirRule::SigmaRec:
    case BidirRule::EqType:
    case BidirRule::EqRec:
      return 3;
    case BidirRule::SigmaCons:
    case BidirRule::NatRec:
      return 4;
  }
  return 0;
}

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::NotASort: return "NotASort";
    case ErrorKind::NotAProduct: return "NotAProduct";
    case ErrorKind::NotASigma: return "NotASigma";
    case ErrorKind::NotANat: return "NotANat";
    case ErrorKind::NotAnEq: return "NotAnEq";
    case ErrorKind::CumulFailed: return "CumulFailed";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

TypeError::TypeError(ErrorKind kind, std::vector<unsigned> location, Context ctx, Term subject,
                     std::optional<Term> expected, std::optional<Term> found)
    : std::runtime_error(error_kind_name(kind)),
      kind_(kind),
      location_(std::move(location)),
      ctx_(std::move(ctx)),
      subject_(std::move(subject)),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

BidirRule constrained_rule(HeadKind head) {
  switch (head) {
    case HeadKind::Sort: return BidirRule::SortInf;
    case HeadKind::Pi: return BidirRule::ProdInf;
    case HeadKind::Sigma: return BidirRule::SigmaInf;
    case HeadKind::Nat: return BidirRule::NatInf;
    case HeadKind::Eq: return BidirRule::EqInf;
  }
  return BidirRule::SortInf;
}

ErrorKind mismatch_error(HeadKind head) {
  switch (head) {
    case HeadKind::Sort: return ErrorKind::NotASort;
    case HeadKind::Pi: return ErrorKind::NotAProduct;
    case HeadKind::Sigma: return ErrorKind::NotASigma;
    case HeadKind::Nat: return ErrorKind::NotANat;
    case HeadKind::Eq: return ErrorKind::NotAnEq;
  }
  return ErrorKind::NotASort;
}

bool head_matches(const Term& t, HeadKind head) {
  switch (head) {
    case HeadKind::Sort: return t.is(TermKind::Sort);
    case HeadKind::Pi: return t.is(TermKind::Pi);
    case HeadKind::Sigma: return t.is(TermKind::Sigma);
    case HeadKind::Nat: return t.is(TermKind::Nat);
    case HeadKind::Eq: return t.is(TermKind::Eq);
  }
  return false;
}

class Checker {
 public:
  explicit Checker(const CheckOptions& options)
      : fuel_(options.fuel), trace_(options.record_trace ? &owned_trace_ : nullptr) {}

  Term infer(const Context& ctx, const Term& t) {
    switch (t.kind()) {
      case TermKind::Var: {
        if (t.index() >= ctx.size()) {
          throw TypeError(ErrorKind::UnboundVariable, path_, ctx, t);
        }
        const auto at = open(BidirRule::Var, ctx, t);
        return close(at, ctx.lookup(t.index()));
      }
      case TermKind::Sort: {
        const auto at = open(BidirRule::Sort, ctx, t);
        return close(at, Term::sort(t.level().succ()));
      }
      case TermKind::Pi:
      case TermKind::Sigma: {
        const auto at = open(t.is(TermKind::Pi) ? BidirRule::Prod : BidirRule::SigmaType, ctx, t);
        const Level i = sort_of(ctx, t, 0);
        const Level j = sort_of(ctx.extended(t.child(0), t.name(0)), t, 1);
        return close(at, Term::sort(max(i, j)));
      }
      case TermKind::Lambda: {
        const auto at = open(BidirRule::Abs, ctx, t);
        sort_of(ctx, t, 0);
        Term body_ty = infer_child(ctx.extended(t.domain(), t.name(0)), t, 1);
        return close(at, Term::pi(t.domain(), std::move(body_ty), t.name(0)));
      }
      case TermKind::App: {
        const auto at = open(BidirRule::App, ctx, t);
        const Term fn_ty = constrained_child(ctx, t, 0, HeadKind::Pi);
        check_child(ctx, t, 1, fn_ty.domain());
        return close(at, subst(fn_ty.codomain(), t.arg(), 0));
      }
      case TermKind::Pair: {
        const auto at = open(BidirRule::SigmaCons, ctx, t);
        const Term& first_ty = t.child(0);
        const Term& second_ty = t.child(1);
        sort_of(ctx, t, 0);
        sort_of(ctx.extended(first_ty, t.name(0)), t, 1);
        check_child(ctx, t, 2, first_ty);
        check_child(ctx, t, 3, subst(second_ty, t.child(2), 0));
        return close(at, Term::sigma(first_ty, second_ty, t.name(0)));
      }
      case TermKind::SigRec: {
        const auto at = open(BidirRule::SigmaRec, ctx, t);
        // The scrutinee goes first: its Σ-type builds the motive's context.
        const Term sig = constrained_child(ctx, t, 2, HeadKind::Sigma);
        const Term& motive = t.child(0);
        sort_of(ctx.extended(sig, t.name(0)), t, 0);
        const Term& a = sig.child(0);
        const Term& b = sig.child(1);
        const Term pair = Term::pair(lift(a, 2, 0), lift(b, 2, 1), Term::var(1), Term::var(0),
                                     sig.name(0));
        check_child(ctx.extended(a, b, t.name(1), t.name(2)), t, 1,
                    subst(lift(motive, 2, 1), pair, 0));
        return close(at, subst(motive, t.child(2), 0));
      }
      case TermKind::Nat: {
        const auto at = open(BidirRule::NatType, ctx, t);
        return close(at, Term::sort(0));
      }
      case TermKind::Zero: {
        const auto at = open(BidirRule::Zero, ctx, t);
        return close(at, Term::nat());
      }
      case TermKind::Succ: {
        const auto at = open(BidirRule::Succ, ctx, t);
        check_child(ctx, t, 0, Term::nat());
        return close(at, Term::nat());
      }
      case TermKind::NatRec: {
        const auto at = open(BidirRule::NatRec, ctx, t);
        constrained_child(ctx, t, 3, HeadKind::Nat);
        const Term& motive = t.child(0);
        const Context with_nat = ctx.extended(Term::nat(), t.name(0));
        sort_of(with_nat, t, 0);
        check_child(ctx, t, 1, subst(motive, Term::zero(), 0));
        const Term step_ty = subst(lift(motive, 2, 1), Term::succ(Term::var(1)), 0);
        check_child(ctx.extended(Term::nat(), motive, t.name(1), t.name(2)), t, 2, step_ty);
        return close(at, subst(motive, t.child(3), 0));
      }
      case TermKind::Eq: {
        const auto at = open(BidirRule::EqType, ctx, t);
        const Level i = sort_of(ctx, t, 0);
        check_child(ctx, t, 1, t.child(0));
        check_child(ctx, t, 2, t.child(0));
        return close(at, Term::sort(i));
      }
      case TermKind::Refl: {
        const auto at = open(BidirRule::Refl, ctx, t);
        sort_of(ctx, t, 0);
        check_child(ctx, t, 1, t.child(0));
        return close(at, Term::eq(t.child(0), t.child(1), t.child(1)));
      }
      case TermKind::EqRec: {
        const auto at = open(BidirRule::EqRec, ctx, t);
        const Term eq_ty = constrained_child(ctx, t, 2, HeadKind::Eq);
        const Term& a_ty = eq_ty.child(0);
        const Term& lhs = eq_ty.child(1);
        const Term& rhs = eq_ty.child(2);
        const Term& motive = t.child(0);
        const Term family = Term::eq(lift(a_ty, 1, 0), lift(lhs, 1, 0), Term::var(0));
        sort_of(ctx.extended(a_ty, family, t.name(0), t.name(1)), t, 0);
        check_child(ctx, t, 1, subst2(motive, lhs, Term::refl(a_ty, lhs)));
        return close(at, subst2(motive, rhs, t.child(2)));
      }
    }
    throw std::logic_error("infer: unknown term kind");
  }

  void check(const Context& ctx, const Term& t, const Term& expected) {
    const auto at = open(BidirRule::Cumul, ctx, t);
    const Term inferred = infer(ctx, t);
    bool ok = false;
    try {
      ok = cumul(inferred, expected, fuel_);
    } catch (const FuelExhausted&) {
      throw TypeError(ErrorKind::FuelExhausted, path_, ctx, t, expected, inferred);
    }
    if (!ok) throw TypeError(ErrorKind::CumulFailed, path_, ctx, t, expected, inferred);
    close(at, expected);
  }

  Term infer_constrained(const Context& ctx, const Term& t, HeadKind head) {
    const auto at = open(constrained_rule(head), ctx, t);
    const Term inferred = infer(ctx, t);
    Term reduced = inferred;
    try {
      reduced = whnf(inferred, fuel_).term;
    } catch (const FuelExhausted&) {
      throw TypeError(ErrorKind::FuelExhausted, path_, ctx, t, std::nullopt, inferred);
    }
    if (!head_matches(reduced, head)) {
      throw TypeError(mismatch_error(head), path_, ctx, t, std::nullopt, reduced);
    }
    return close(at, std::move(reduced));
  }

  std::optional<Trace> take_trace() {
    if (!trace_) return std::nullopt;
    return std::move(owned_trace_);
  }

 private:
  static constexpr std::size_t kNoEntry = static_cast<std::size_t>(-1);

  std::size_t open(BidirRule rule, const Context& ctx, const Term& subject) {
    if (!trace_) return kNoEntry;
    trace_->push_back(TraceStep{rule, ctx, subject, subject});
    return trace_->size() - 1;
  }

  Term close(std::size_t at, Term output) {
    if (at != kNoEntry) (*trace_)[at].output = output;
    return output;
  }

  struct PathGuard {
    std::vector<unsigned>& path;
    PathGuard(std::vector<unsigned>& p, unsigned i) : path(p) { path.push_back(i); }
    ~PathGuard() { path.pop_back(); }
  };

  Term infer_child(const Context& ctx, const Term& parent, unsigned i) {
    PathGuard g(path_, i);
    return infer(ctx, parent.child(i));
  }

  void check_child(const Context& ctx, const Term& parent, unsigned i, const Term& expected) {
    PathGuard g(path_, i);
    check(ctx, parent.child(i), expected);
  }

  Term constrained_child(const Context& ctx, const Term& parent, unsigned i, HeadKind head) {
    PathGuard g(path_, i);
    return infer_constrained(ctx, parent.child(i), head);
  }

  Level sort_of(const Context& ctx, const Term& parent, unsigned i) {
    return constrained_child(ctx, parent, i, HeadKind::Sort).level();
  }

  Fuel fuel_;
  Trace owned_trace_;
  Trace* trace_;
  std::vector<unsigned> path_;
};

}  // namespace

InferOutcome infer(const Context& ctx, const Term& t, const CheckOptions& options) {
  Checker checker(options);
  Term ty = checker.infer(ctx, t);
  return InferOutcome{std::move(ty), checker.take_trace()};
}

Trace check(const Context& ctx, const Term& t, const Term& expected, const CheckOptions& options) {
  Checker checker(options);
  checker.check(ctx, t, expected);
  return checker.take_trace().value_or(Trace{});
}

InferOutcome infer_constrained(const Context& ctx, const Term& t, HeadKind head,
                               const CheckOptions& options) {
  Checker checker(options);
  Term ty = checker.infer_constrained(ctx, t, head);
  return InferOutcome{std::move(ty), checker.take_trace()};
}

Trace check_wf_context(const Context& ctx, const CheckOptions& options) {
  Trace all;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    try {
      auto out = infer_constrained(ctx.prefix(i), ctx.decls()[i], HeadKind::Sort, options);
      if (out.trace) all.insert(all.end(), out.trace->begin(), out.trace->end());
    } catch (TypeError& e) {
      throw e.with_decl_index(i);
    }
  }
  return all;
}

Term principal_type(const Context& ctx, const Term& t, const CheckOptions& options) {
  return infer(ctx, t, options).ty;
}

}  // namespace bitt
