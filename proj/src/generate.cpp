#include <algorithm>
#include <map>
#include <random>
#include <unordered_set>

#include "bitt/conversion.hpp"
#include "bitt/oracle.hpp"

namespace bitt::oracle {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
  std::uint32_t level_in(std::uint32_t lo, std::uint32_t hi) {
    return lo + static_cast<std::uint32_t>(below(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

// Abandon the current attempt; generate() retries with fresh randomness.
struct DeadEnd {};

constexpr double kInternalLift = 0.15;
constexpr double kVarPreference = 0.35;
constexpr double kRedexWrap = 0.2;
constexpr int kMaxAttempts = 1000;

// Γ ⊢ t : T together with Γ ⊢ T : □i.
struct Typed {
  DerivationPtr d;
  DerivationPtr dt;
};

const Term& term_of(const DerivationPtr& d) { return *d->term; }
const Term& type_of(const DerivationPtr& d) { return *d->type; }

DerivationPtr leaf(Rule rule, const DerivationPtr& ctxd, Term term, Term type) {
  return make_typing(rule, ctxd->ctx, std::move(term), std::move(type), {ctxd});
}

DerivationPtr sort_leaf(const DerivationPtr& ctxd, Level i) {
  return leaf(Rule::Sort, ctxd, Term::sort(i), Term::sort(i.succ()));
}

DerivationPtr nat_leaf(const DerivationPtr& ctxd) {
  return leaf(Rule::NatType, ctxd, Term::nat(), Term::sort(0));
}

DerivationPtr zero_leaf(const DerivationPtr& ctxd) {
  return leaf(Rule::Zero, ctxd, Term::zero(), Term::nat());
}

DerivationPtr var_leaf(const DerivationPtr& ctxd, std::uint32_t i) {
  return leaf(Rule::Var, ctxd, Term::var(i), ctxd->ctx.lookup(i));
}

DerivationPtr node(Rule rule, const DerivationPtr& ctxd, Term term, Term type,
                   std::vector<DerivationPtr> premises) {
  return make_typing(rule, ctxd->ctx, std::move(term), std::move(type), std::move(premises));
}

DerivationPtr cumul_node(const DerivationPtr& d, const DerivationPtr& target_sort) {
  return make_typing(Rule::Cumul, d->ctx, term_of(d), term_of(target_sort), {d, target_sort});
}

std::size_t size_of(const DerivationPtr& ctxd) { return ctxd->ctx.size(); }

// Ext chain element deriving a context of the given length.
DerivationPtr context_prefix(DerivationPtr ctxd, std::size_t length) {
  while (ctxd->ctx.size() > length) ctxd = ctxd->premises.at(0);
  return ctxd;
}

class Generator {
 public:
  Generator(const GenConfig& config, std::uint64_t seed) : cfg_(config), rng_(seed) {}

  Level cap() const { return cfg_.universe_cap; }

  DerivationPtr gen_context() {
    DerivationPtr ctxd = empty_context();
    if (cfg_.max_depth < 2) return ctxd;
    const auto n = rng_.below(cfg_.max_context + 1);
    static const char* const kNames[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
    for (std::uint64_t i = 0; i < n; ++i) {
      const Typed ty = gen_type(ctxd, 2, cap());
      ctxd = extend_context(ctxd, ty.d, kNames[i % 8]);
    }
    return ctxd;
  }

  // Any well-typed term.
  Typed gen_any(const DerivationPtr& ctxd, int depth) {
    if (depth <= 1) return gen_leaf(ctxd);
    const auto r = rng_.below(100);
    if (r < 50) return gen_leaf(ctxd);
    if (r < 75) {
      switch (rng_.below(4)) {
        case 0: return gen_former(ctxd, depth, true);
        case 1: return gen_former(ctxd, depth, false);
        case 2: return gen_lambda(ctxd, depth);
        default: return gen_pair(ctxd, depth);
      }
    }
    switch (rng_.below(7)) {
      case 0: return gen_app(ctxd, depth);
      case 1: return gen_succ(ctxd, depth);
      case 2: return gen_natrec(ctxd, depth);
      case 3: return gen_sigrec(ctxd, depth);
      case 4: return gen_eq(ctxd, depth, cap());
      case 5: return gen_refl(ctxd, depth);
      default: return gen_eqrec(ctxd, depth);
    }
  }

  // A type X with d : Γ ⊢ X : □k, k ≤ max_level, and dt : Γ ⊢ □k : □k+1.
  Typed gen_type(const DerivationPtr& ctxd, int depth, Level max_level) {
    Typed out = pick_type(ctxd, depth, max_level);
    const Level k = type_of(out.d).level();
    if (k < max_level && rng_.chance(kInternalLift)) {
      const Level j(rng_.level_in(k.value + 1, max_level.value));
      out.d = cumul_node(out.d, sort_leaf(ctxd, j));
      out.dt = sort_leaf(ctxd, j);
    }
    return out;
  }

  // A term t with Γ ⊢ t : T exactly, given dt : Γ ⊢ T : □i.
  DerivationPtr gen_of(const DerivationPtr& ctxd, int depth, const Term& target,
                       const DerivationPtr& dt) {
    const Context& ctx = ctxd->ctx;
    std::vector<std::uint32_t> exact, below;
    for (std::uint32_t i = 0; i < ctx.size(); ++i) {
      const Term ty = ctx.lookup(i);
      if (alpha_eq(ty, target)) {
        exact.push_back(i);
      } else if (cumul(ty, target)) {
        below.push_back(i);
      }
    }
    const bool have_vars = !exact.empty() || !below.empty();
    if (have_vars && (depth <= 1 || rng_.chance(kVarPreference))) {
      const auto r = rng_.below(exact.size() + below.size());
      if (r < exact.size()) return var_leaf(ctxd, exact[r]);
      return cumul_node(var_leaf(ctxd, below[r - exact.size()]), dt);
    }
    if (depth > 1 && rng_.chance(kRedexWrap)) return gen_redex(ctxd, depth, dt);
    try {
      return gen_structural(ctxd, depth, target, dt);
    } catch (const DeadEnd&) {
      if (!have_vars) throw;
      if (!exact.empty()) return var_leaf(ctxd, exact.front());
      return cumul_node(var_leaf(ctxd, below.front()), dt);
    }
  }

  // A strictly larger type T' ≽ T with its sort derivation.
  std::optional<std::pair<Term, DerivationPtr>> lift_type(Rng& rng, const DerivationPtr& ctxd,
                                                          const Term& type,
                                                          const DerivationPtr& dt) {
    if (type.is(TermKind::Sort) && type.level() < cap()) {
      const Level j(rng.level_in(type.level().value + 1, cap().value));
      return std::make_pair(Term::sort(j), sort_leaf(ctxd, j));
    }
    if (type.is(TermKind::Pi) && has_strict_lift(type.codomain(), cap())) {
      const DerivationPtr prod = strip_cumul(dt);
      if (prod->rule != Rule::Prod) return std::nullopt;
      const DerivationPtr& da = prod->premises[0];
      const DerivationPtr inner = extend_context(ctxd, da, type.name(0));
      auto cod = lift_type(rng, inner, type.codomain(), prod->premises[1]);
      if (!cod) return std::nullopt;
      const Term lifted = Term::pi(type.domain(), cod->first, type.name(0));
      const Level l = max(type_of(da).level(), type_of(cod->second).level());
      return std::make_pair(lifted,
                            node(Rule::Prod, ctxd, lifted, Term::sort(l), {da, cod->second}));
    }
    return std::nullopt;
  }

 private:
  // Γ ⊢ x : A and Γ ⊢ A : □ for a variable.
  Typed var_typed(const DerivationPtr& ctxd, std::uint32_t i) {
    return {var_leaf(ctxd, i), decl_sort(ctxd, i)};
  }

  DerivationPtr decl_sort(const DerivationPtr& ctxd, std::uint32_t i) {
    const auto key = std::make_pair(ctxd.get(), i);
    if (auto it = decl_cache_.find(key); it != decl_cache_.end()) return it->second.second;
    const std::size_t position = size_of(ctxd) - 1 - i;
    const DerivationPtr raw = context_prefix(ctxd, position + 1)->premises.at(1);
    DerivationPtr out = weaken(raw, position, ctxd);
    decl_cache_.emplace(key, std::make_pair(ctxd, out));
    return out;
  }

  std::vector<std::uint32_t> vars_where(const DerivationPtr& ctxd, auto&& pred) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < size_of(ctxd); ++i) {
      if (pred(ctxd->ctx.lookup(i))) out.push_back(i);
    }
    return out;
  }

  Typed gen_leaf(const DerivationPtr& ctxd) {
    std::vector<int> options{1, 2};
    if (cap().value >= 1) options.push_back(0);
    if (size_of(ctxd) > 0) options.push_back(3);
    switch (options[rng_.below(options.size())]) {
      case 0: {
        const Level i(rng_.level_in(0, cap().value - 1));
        return {sort_leaf(ctxd, i), sort_leaf(ctxd, i.succ())};
      }
      case 1:
        return {nat_leaf(ctxd), sort_leaf(ctxd, Level(0))};
      case 2:
        return {zero_leaf(ctxd), nat_leaf(ctxd)};
      default:
        return var_typed(ctxd, static_cast<std::uint32_t>(rng_.below(size_of(ctxd))));
    }
  }

  Typed pick_type(const DerivationPtr& ctxd, int depth, Level max_level) {
    const auto sorted_vars = vars_where(ctxd, [&](const Term& ty) {
      return ty.is(TermKind::Sort) && ty.level() <= max_level;
    });
    std::vector<int> options{0};  // Nat
    if (max_level.value >= 1) options.push_back(1);
    if (!sorted_vars.empty()) options.insert(options.end(), {2, 2});
    if (depth > 1) options.insert(options.end(), {3, 3, 4, 5, 6});
    switch (options[rng_.below(options.size())]) {
      case 0:
        return {nat_leaf(ctxd), sort_leaf(ctxd, Level(0))};
      case 1: {
        const Level i(rng_.level_in(0, max_level.value - 1));
        return {sort_leaf(ctxd, i), sort_leaf(ctxd, i.succ())};
      }
      case 2: {
        const auto i = sorted_vars[rng_.below(sorted_vars.size())];
        const DerivationPtr v = var_leaf(ctxd, i);
        return {v, sort_leaf(ctxd, type_of(v).level())};
      }
      case 3:
        return gen_former(ctxd, depth, rng_.chance(0.6), max_level);
      case 4:
        return gen_eq(ctxd, depth, max_level);
      default: {
        const Level k(rng_.level_in(0, max_level.value));
        const DerivationPtr d = gen_redex(ctxd, depth, sort_leaf(ctxd, k));
        return {d, sort_leaf(ctxd, k)};
      }
    }
  }

  // Π or Σ former.
  Typed gen_former(const DerivationPtr& ctxd, int depth, bool pi) {
    return gen_former(ctxd, depth, pi, cap());
  }

  Typed gen_former(const DerivationPtr& ctxd, int depth, bool pi, Level max_level) {
    const Typed a = gen_type(ctxd, depth - 1, max_level);
    const std::string name = fresh_name();
    const DerivationPtr inner = extend_context(ctxd, a.d, name);
    const Typed b = gen_type(inner, depth - 1, max_level);
    const Level l = max(type_of(a.d).level(), type_of(b.d).level());
    const Term t = pi ? Term::pi(term_of(a.d), term_of(b.d), name)
                      : Term::sigma(term_of(a.d), term_of(b.d), name);
    return {node(pi ? Rule::Prod : Rule::SigmaType, ctxd, t, Term::sort(l), {a.d, b.d}),
            sort_leaf(ctxd, l)};
  }

  Typed gen_lambda(const DerivationPtr& ctxd, int depth) {
    const Typed a = gen_type(ctxd, depth - 1, cap());
    const std::string name = fresh_name();
    const DerivationPtr inner = extend_context(ctxd, a.d, name);
    const Typed body = gen_any(inner, depth - 1);
    return abstract(ctxd, a.d, body, name);
  }

  Typed abstract(const DerivationPtr& ctxd, const DerivationPtr& da, const Typed& body,
                 const std::string& name) {
    const Term pi = Term::pi(term_of(da), type_of(body.d), name);
    const Level l = max(type_of(da).level(), type_of(body.dt).level());
    const DerivationPtr prod = node(Rule::Prod, ctxd, pi, Term::sort(l), {da, body.dt});
    const Term lam = Term::lambda(term_of(da), term_of(body.d), name);
    return {node(Rule::Abs, ctxd, lam, pi, {prod, body.d}), prod};
  }

  Typed gen_pair(const DerivationPtr& ctxd, int depth) {
    const Typed sig = gen_former(ctxd, depth, false);
    return {build_pair(ctxd, depth, sig.d), sig.d};
  }

  // A pair inhabiting the Σ-type derived (after Cumul stripping) by `dsig`.
  DerivationPtr build_pair(const DerivationPtr& ctxd, int depth, const DerivationPtr& dsig) {
    const DerivationPtr former = strip_cumul(dsig);
    if (former->rule != Rule::SigmaType) throw DeadEnd{};
    const DerivationPtr& da = former->premises[0];
    const DerivationPtr& db = former->premises[1];
    const Term& sig = term_of(former);
    const DerivationPtr a = gen_of(ctxd, depth - 1, term_of(da), da);
    const DerivationPtr b_sort = substitute(db, size_of(ctxd), a);
    const DerivationPtr b = gen_of(ctxd, depth - 1, term_of(b_sort), b_sort);
    const Term p = Term::pair(sig.child(0), sig.child(1), term_of(a), term_of(b), sig.name(0));
    return node(Rule::SigmaCons, ctxd, p, Term::sigma(sig.child(0), sig.child(1), sig.name(0)),
                {da, db, a, b});
  }

  Typed gen_app(const DerivationPtr& ctxd, int depth) {
    // Function: a variable of syntactic product type, or a fresh abstraction.
    const auto fn_vars = vars_where(ctxd, [](const Term& ty) { return ty.is(TermKind::Pi); });
    Typed fn{nullptr, nullptr};
    if (!fn_vars.empty() && rng_.chance(0.4)) {
      fn = var_typed(ctxd, fn_vars[rng_.below(fn_vars.size())]);
    } else {
      fn = gen_lambda(ctxd, depth - 1 > 1 ? depth - 1 : 2);
    }
    const DerivationPtr prod = strip_cumul(fn.dt);
    if (prod->rule != Rule::Prod) throw DeadEnd{};
    const DerivationPtr& da = prod->premises[0];
    const DerivationPtr& db = prod->premises[1];
    const DerivationPtr u = gen_of(ctxd, depth - 1, term_of(da), da);
    const Term& pi = type_of(fn.d);
    const Term result = subst(pi.codomain(), term_of(u), 0);
    return {node(Rule::App, ctxd, Term::app(term_of(fn.d), term_of(u)), result, {fn.d, u}),
            substitute(db, size_of(ctxd), u)};
  }

  Typed gen_succ(const DerivationPtr& ctxd, int depth) {
    const DerivationPtr n = gen_of(ctxd, depth - 1, Term::nat(), nat_leaf(ctxd));
    return {node(Rule::Succ, ctxd, Term::succ(term_of(n)), Term::nat(), {n}), nat_leaf(ctxd)};
  }

  Typed gen_natrec(const DerivationPtr& ctxd, int depth) {
    const DerivationPtr with_n = extend_context(ctxd, nat_leaf(ctxd), "n");
    const Typed motive = gen_type(with_n, depth - 1, cap());
    return natrec_with(ctxd, depth, motive.d,
                       gen_of(ctxd, depth - 1, Term::nat(), nat_leaf(ctxd)));
  }

  // natrec over a given motive derivation Γ, ℕ ⊢ P : □i and scrutinee.
  Typed natrec_with(const DerivationPtr& ctxd, int depth, const DerivationPtr& dp,
                    const DerivationPtr& scrut) {
    const std::size_t base = size_of(ctxd);
    const Term& p = term_of(dp);
    const DerivationPtr zero_sort = substitute(dp, base, zero_leaf(ctxd));
    const DerivationPtr b0 = gen_of(ctxd, depth - 1, term_of(zero_sort), zero_sort);

    const DerivationPtr with_x = extend_context(ctxd, nat_leaf(ctxd), "k");
    const DerivationPtr with_p = extend_context(with_x, dp, "ih");
    const DerivationPtr succ_x =
        node(Rule::Succ, with_p, Term::succ(Term::var(1)), Term::nat(), {var_leaf(with_p, 1)});
    const DerivationPtr step_sort = substitute(weaken(dp, base, with_p), base + 2, succ_x);
    const DerivationPtr bs = gen_of(with_p, depth - 1, term_of(step_sort), step_sort);

    const Term t = Term::nat_rec(p, term_of(b0), term_of(bs), term_of(scrut), {"n", "k", "ih"});
    return {node(Rule::NatRec, ctxd, t, subst(p, term_of(scrut), 0), {dp, b0, bs, scrut}),
            substitute(dp, base, scrut)};
  }

  Typed gen_sigrec(const DerivationPtr& ctxd, int depth) {
    const std::size_t base = size_of(ctxd);
    const Typed sig = gen_former(ctxd, depth - 1 > 1 ? depth - 1 : 2, false);
    const DerivationPtr& da = sig.d->premises[0];
    const DerivationPtr& db = sig.d->premises[1];
    const Term& sig_ty = term_of(sig.d);
    const DerivationPtr scrut = gen_of(ctxd, depth - 1, sig_ty, sig.d);

    const DerivationPtr with_z = extend_context(ctxd, sig.d, "s");
    const Typed motive = gen_type(with_z, depth - 1, cap());
    const DerivationPtr& dp = motive.d;

    const DerivationPtr with_a = extend_context(ctxd, da, "u");
    const DerivationPtr with_b = extend_context(with_a, db, "v");
    const DerivationPtr da2 = weaken(da, base, with_b);
    const DerivationPtr db2 = weaken(db, base, with_b);
    const Term pair_sig = Term::sigma(term_of(da2), term_of(db2), sig_ty.name(0));
    const Term pair = Term::pair(term_of(da2), term_of(db2), Term::var(1), Term::var(0),
                                 sig_ty.name(0));
    const DerivationPtr dpair = node(Rule::SigmaCons, with_b, pair, pair_sig,
                                     {da2, db2, var_leaf(with_b, 1), var_leaf(with_b, 0)});
    const DerivationPtr branch_sort = substitute(weaken(dp, base, with_b), base + 2, dpair);
    const DerivationPtr branch = gen_of(with_b, depth - 1, term_of(branch_sort), branch_sort);

    const Term& p = term_of(dp);
    const Term t = Term::sig_rec(p, term_of(branch), term_of(scrut), {"s", "u", "v"});
    return {node(Rule::SigmaRec, ctxd, t, subst(p, term_of(scrut), 0), {dp, branch, scrut}),
            substitute(dp, base, scrut)};
  }

  Typed gen_eq(const DerivationPtr& ctxd, int depth, Level max_level) {
    const Typed a = gen_type(ctxd, depth - 1, max_level);
    const DerivationPtr lhs = gen_of(ctxd, depth - 1, term_of(a.d), a.d);
    const DerivationPtr rhs = rng_.chance(0.5) ? lhs : gen_of(ctxd, depth - 1, term_of(a.d), a.d);
    const Level i = type_of(a.d).level();
    const Term t = Term::eq(term_of(a.d), term_of(lhs), term_of(rhs));
    return {node(Rule::EqType, ctxd, t, Term::sort(i), {a.d, lhs, rhs}), sort_leaf(ctxd, i)};
  }

  DerivationPtr refl_node(const DerivationPtr& ctxd, const DerivationPtr& da,
                          const DerivationPtr& value) {
    const Term t = Term::refl(term_of(da), term_of(value));
    return node(Rule::Refl, ctxd, t, Term::eq(term_of(da), term_of(value), term_of(value)),
                {da, value});
  }

  DerivationPtr eq_node(const DerivationPtr& ctxd, const DerivationPtr& da,
                        const DerivationPtr& lhs, const DerivationPtr& rhs) {
    const Term t = Term::eq(term_of(da), term_of(lhs), term_of(rhs));
    return node(Rule::EqType, ctxd, t, type_of(da), {da, lhs, rhs});
  }

  Typed gen_refl(const DerivationPtr& ctxd, int depth) {
    const Typed a = gen_type(ctxd, depth - 1, cap());
    const DerivationPtr value = gen_of(ctxd, depth - 1, term_of(a.d), a.d);
    return {refl_node(ctxd, a.d, value), eq_node(ctxd, a.d, value, value)};
  }

  Typed gen_eqrec(const DerivationPtr& ctxd, int depth) {
    const std::size_t base = size_of(ctxd);
    // Scrutinee: an equality variable whose sort derivation exposes its parts,
    // or a reflexivity proof.
    DerivationPtr da, lhs, rhs, scrut;
    const auto eq_vars = vars_where(ctxd, [](const Term& ty) { return ty.is(TermKind::Eq); });
    if (!eq_vars.empty() && rng_.chance(0.5)) {
      const Typed v = var_typed(ctxd, eq_vars[rng_.below(eq_vars.size())]);
      const DerivationPtr former = strip_cumul(v.dt);
      if (former->rule != Rule::EqType) throw DeadEnd{};
      da = former->premises[0];
      lhs = former->premises[1];
      rhs = former->premises[2];
      scrut = v.d;
    } else {
      da = gen_type(ctxd, depth - 1, cap()).d;
      lhs = gen_of(ctxd, depth - 1, term_of(da), da);
      rhs = lhs;
      scrut = refl_node(ctxd, da, lhs);
    }

    const DerivationPtr with_x = extend_context(ctxd, da, "y");
    const DerivationPtr family = eq_node(with_x, weaken(da, base, with_x),
                                         weaken(lhs, base, with_x), var_leaf(with_x, 0));
    const DerivationPtr with_z = extend_context(with_x, family, "e");
    const DerivationPtr dp = gen_type(with_z, depth - 1, cap()).d;
    const Term& p = term_of(dp);

    const DerivationPtr branch_sort =
        substitute(substitute(dp, base, lhs), base, refl_node(ctxd, da, lhs));
    const DerivationPtr branch = gen_of(ctxd, depth - 1, term_of(branch_sort), branch_sort);

    const Term t = Term::eq_rec(p, term_of(branch), term_of(scrut), {"y", "e"});
    return {node(Rule::EqRec, ctxd, t, subst2(p, term_of(rhs), term_of(scrut)),
                 {dp, branch, scrut}),
            substitute(substitute(dp, base, rhs), base, scrut)};
  }

  // A β- or ι-redex of the given type.
  DerivationPtr gen_redex(const DerivationPtr& ctxd, int depth,
                          const DerivationPtr& dt) {
    const std::size_t base = size_of(ctxd);
    if (rng_.chance(0.5)) {
      const Typed a = gen_type(ctxd, depth - 1, cap());
      const std::string name = fresh_name();
      const DerivationPtr inner = extend_context(ctxd, a.d, name);
      const DerivationPtr body_sort = weaken(dt, base, inner);
      const DerivationPtr body = gen_of(inner, depth - 1, term_of(body_sort), body_sort);
      const Typed fn = abstract(ctxd, a.d, {body, body_sort}, name);
      const DerivationPtr u = gen_of(ctxd, depth - 1, term_of(a.d), a.d);
      return node(Rule::App, ctxd, Term::app(term_of(fn.d), term_of(u)),
                  subst(type_of(fn.d).codomain(), term_of(u), 0), {fn.d, u});
    }
    // natrec with a constant motive.
    const DerivationPtr with_n = extend_context(ctxd, nat_leaf(ctxd), "n");
    const DerivationPtr motive = weaken(dt, base, with_n);
    const DerivationPtr scrut = gen_of(ctxd, depth - 1, Term::nat(), nat_leaf(ctxd));
    return natrec_with(ctxd, depth, motive, scrut).d;
  }

  DerivationPtr gen_structural(const DerivationPtr& ctxd, int depth, const Term& target,
                               const DerivationPtr& dt) {
    switch (target.kind()) {
      case TermKind::Sort: {
        const Typed x = gen_type(ctxd, depth, target.level());
        if (alpha_eq(type_of(x.d), target)) return x.d;
        return cumul_node(x.d, dt);
      }
      case TermKind::Nat:
        return gen_nat(ctxd, depth);
      case TermKind::Pi: {
        const DerivationPtr prod = strip_cumul(dt);
        if (prod->rule != Rule::Prod) throw DeadEnd{};
        const std::string name = target.name(0).empty() ? fresh_name() : target.name(0);
        const DerivationPtr inner = extend_context(ctxd, prod->premises[0], name);
        const DerivationPtr& cod = prod->premises[1];
        const DerivationPtr body = gen_of(inner, depth - 1, term_of(cod), cod);
        const Term lam = Term::lambda(target.domain(), term_of(body), name);
        return node(Rule::Abs, ctxd, lam, target, {prod, body});
      }
      case TermKind::Sigma:
        return build_pair(ctxd, depth, dt);
      case TermKind::Eq: {
        const DerivationPtr former = strip_cumul(dt);
        if (former->rule != Rule::EqType) throw DeadEnd{};
        if (!convertible(target.child(1), target.child(2))) throw DeadEnd{};
        const DerivationPtr r = refl_node(ctxd, former->premises[0], former->premises[1]);
        if (alpha_eq(type_of(r), target)) return r;
        return cumul_node(r, dt);
      }
      default:
        break;
    }
    // Not syntactically a canonical type: aim at its weak-head form when
    // that needs no sub-derivations, otherwise wrap a redex around it.
    const Term head = whnf(target).term;
    if (head.is(TermKind::Nat)) return cumul_node(gen_nat(ctxd, depth), dt);
    if (head.is(TermKind::Sort)) {
      const Typed x = gen_type(ctxd, depth, head.level());
      return cumul_node(x.d, dt);
    }
    if (depth > 1) return gen_redex(ctxd, depth, dt);
    throw DeadEnd{};
  }

  DerivationPtr gen_nat(const DerivationPtr& ctxd, int depth) {
    if (depth <= 1 || rng_.chance(0.4)) return zero_leaf(ctxd);
    return gen_succ(ctxd, depth).d;
  }

  std::string fresh_name() {
    static const char* const kNames[] = {"x", "y", "z", "w", "t"};
    return kNames[rng_.below(5)];
  }

  GenConfig cfg_;
  Rng rng_;
  std::map<std::pair<const Derivation*, std::uint32_t>, std::pair<DerivationPtr, DerivationPtr>>
      decl_cache_;
};

Generated finish(const DerivationPtr& base, const DerivationPtr& base_sort,
                 const DerivationPtr& ctxd) {
  Generated g{base, ctxd->ctx, term_of(base), type_of(base), base, type_of(base), base_sort, ctxd,
              false};
  return g;
}

void apply_lift(Generator& gen, Rng& rng, Generated& g) {
  auto lifted = gen.lift_type(rng, g.ctx_derivation, g.base_type, g.base_type_derivation);
  if (!lifted) return;
  g.derivation = cumul_node(g.base, lifted->second);
  g.type = lifted->first;
  g.lifted = true;
}

}  // namespace

bool has_strict_lift(const Term& type, Level cap) {
  if (type.is(TermKind::Sort)) return type.level() < cap;
  if (type.is(TermKind::Pi)) return has_strict_lift(type.codomain(), cap);
  return false;
}

Generated generate(const GenConfig& config) {
  GenConfig cfg = config;
  if (cfg.max_depth < 1) cfg.max_depth = 1;
  Generator gen(cfg, cfg.seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    try {
      const DerivationPtr ctxd = gen.gen_context();
      const Typed t = gen.gen_any(ctxd, static_cast<int>(cfg.max_depth));
      Generated g = finish(t.d, t.dt, ctxd);
      // The trailing lift draws from its own stream so that the subject does
      // not depend on cumul_insert_prob.
      Rng lift_rng(cfg.seed ^ 0x6c69667473747265ULL);
      if (lift_rng.chance(cfg.cumul_insert_prob)) apply_lift(gen, lift_rng, g);
      return g;
    } catch (const DeadEnd&) {
    }
  }
  throw std::runtime_error("generator: no derivation after repeated dead ends");
}

std::optional<Generated> relift(const Generated& g, const GenConfig& config, std::uint64_t stream) {
  if (!has_strict_lift(g.base_type, config.universe_cap)) return std::nullopt;
  Generator gen(config, config.seed);
  Rng rng(config.seed ^ mix(stream + 1));
  Generated out = g;
  out.derivation = g.base;
  out.type = g.base_type;
  out.lifted = false;
  apply_lift(gen, rng, out);
  if (!out.lifted) return std::nullopt;
  return out;
}

DerivationPtr shrink(const DerivationPtr& d,
                     const std::function<bool(const DerivationPtr&)>& fails) {
  std::vector<DerivationPtr> typing;
  std::unordered_set<const Derivation*> seen;
  std::vector<DerivationPtr> todo{d};
  while (!todo.empty()) {
    DerivationPtr n = todo.back();
    todo.pop_back();
    if (!seen.insert(n.get()).second) continue;
    if (!is_context_rule(n->rule)) typing.push_back(n);
    for (auto it = n->premises.rbegin(); it != n->premises.rend(); ++it) todo.push_back(*it);
  }
  std::stable_sort(typing.begin(), typing.end(), [](const auto& a, const auto& b) {
    return a->term->size() < b->term->size();
  });
  for (const auto& n : typing) {
    if (fails(n)) return n;
  }
  return d;
}

}  // namespace bitt::oracle
