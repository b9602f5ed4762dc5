#include <cassert>
#include <unordered_map>

#include "bitt/oracle.hpp"

namespace bitt::oracle {

namespace {

using Memo = std::unordered_map<const Derivation*, DerivationPtr>;

DerivationPtr rebuild(const Derivation& d, Context ctx, std::optional<Term> term,
                      std::optional<Term> type, std::vector<DerivationPtr> premises) {
  return std::make_shared<const Derivation>(
      Derivation{d.rule, std::move(ctx), std::move(term), std::move(type), std::move(premises)});
}

class Weakener {
 public:
  Weakener(std::size_t base, DerivationPtr extended)
      : base_(base), amount_(extended->ctx.size() - base), extended_(std::move(extended)) {}

  DerivationPtr go(const DerivationPtr& d) {
    if (auto it = memo_.find(d.get()); it != memo_.end()) return it->second;
    DerivationPtr out = visit(*d);
    memo_.emplace(d.get(), out);
    return out;
  }

 private:
  DerivationPtr visit(const Derivation& d) {
    const std::size_t n = d.ctx.size();
    assert(n >= base_);
    if (is_context_rule(d.rule) && n == base_) return extended_;
    const auto depth = static_cast<std::uint32_t>(n - base_);
    Context ctx = extended_->ctx;
    for (std::uint32_t j = 0; j < depth; ++j) {
      ctx.push(lift(d.ctx.decls()[base_ + j], amount_, j), d.ctx.names()[base_ + j]);
    }
    std::vector<DerivationPtr> premises;
    premises.reserve(d.premises.size());
    for (const auto& p : d.premises) premises.push_back(go(p));
    std::optional<Term> term, type;
    if (d.term) term = lift(*d.term, amount_, depth);
    if (d.type) type = lift(*d.type, amount_, depth);
    return rebuild(d, std::move(ctx), std::move(term), std::move(type), std::move(premises));
  }

  std::size_t base_;
  std::uint32_t amount_;
  DerivationPtr extended_;
  Memo memo_;
};

class Substituter {
 public:
  Substituter(std::size_t base, DerivationPtr du) : base_(base), du_(std::move(du)) {}

  DerivationPtr go(const DerivationPtr& d) {
    if (auto it = memo_.find(d.get()); it != memo_.end()) return it->second;
    DerivationPtr out = visit(*d);
    memo_.emplace(d.get(), out);
    return out;
  }

 private:
  DerivationPtr visit(const Derivation& d) {
    const std::size_t n = d.ctx.size();
    assert(n > base_);
    // ⊢ Γ, z : C  becomes  ⊢ Γ.
    if (is_context_rule(d.rule) && n == base_ + 1) return d.premises.at(0);
    const auto depth = static_cast<std::uint32_t>(n - base_ - 1);
    const Term& u = *du_->term;

    if (d.rule == Rule::Var && d.term->index() == depth) {
      // The substituted variable itself: reuse the derivation of u.
      return weaken(du_, base_, go(d.premises.at(0)));
    }

    Context ctx = d.ctx.prefix(base_);
    for (std::uint32_t j = 0; j < depth; ++j) {
      ctx.push(subst(d.ctx.decls()[base_ + 1 + j], u, j), d.ctx.names()[base_ + 1 + j]);
    }
    std::vector<DerivationPtr> premises;
    premises.reserve(d.premises.size());
    for (const auto& p : d.premises) premises.push_back(go(p));
    std::optional<Term> term, type;
    if (d.term) term = subst(*d.term, u, depth);
    if (d.type) type = subst(*d.type, u, depth);
    return rebuild(d, std::move(ctx), std::move(term), std::move(type), std::move(premises));
  }

  std::size_t base_;
  DerivationPtr du_;
  Memo memo_;
};

}  // namespace

DerivationPtr weaken(const DerivationPtr& d, std::size_t base, const DerivationPtr& extended) {
  return Weakener(base, extended).go(d);
}

DerivationPtr substitute(const DerivationPtr& d, std::size_t base, const DerivationPtr& du) {
  return Substituter(base, du).go(d);
}

}  // namespace bitt::oracle
