#include "bitt/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

namespace bitt {

namespace detail {

struct Node {
  TermKind kind;
  std::uint32_t payload = 0;
  std::uint32_t loose = 0;
  std::size_t size = 1;
  std::vector<Term> children;
  std::vector<std::string> names;
};

}  // namespace detail

namespace {

// Number of bound-variable names each kind carries.
std::size_t name_count(TermKind kind) {
  switch (kind) {
    case TermKind::Pi:
    case TermKind::Lambda:
    case TermKind::Sigma:
    case TermKind::Pair:
      return 1;
    case TermKind::SigRec:
    case TermKind::NatRec:
      return 3;
    case TermKind::EqRec:
      return 2;
    default:
      return 0;
  }
}

const std::string kNoName;

}  // namespace

const char* kind_name(TermKind kind) {
  switch (kind) {
    case TermKind::Var: return "Var";
    case TermKind::Sort: return "Sort";
    case TermKind::Pi: return "Pi";
    case TermKind::Lambda: return "Lambda";
    case TermKind::App: return "App";
    case TermKind::Sigma: return "Sigma";
    case TermKind::Pair: return "Pair";
    case TermKind::SigRec: return "SigRec";
    case TermKind::Nat: return "Nat";
    case TermKind::Zero: return "Zero";
    case TermKind::Succ: return "Succ";
    case TermKind::NatRec: return "NatRec";
    case TermKind::Eq: return "Eq";
    case TermKind::Refl: return "Refl";
    case TermKind::EqRec: return "EqRec";
  }
  return "?";
}

unsigned Term::binders_of(TermKind kind, std::size_t i) {
  switch (kind) {
    case TermKind::Pi:
    case TermKind::Lambda:
    case TermKind::Sigma:
      return i == 1 ? 1 : 0;
    case TermKind::Pair:
      return i == 1 ? 1 : 0;
    case TermKind::SigRec:
      return i == 0 ? 1 : i == 1 ? 2 : 0;
    case TermKind::NatRec:
      return i == 0 ? 1 : i == 2 ? 2 : 0;
    case TermKind::EqRec:
      return i == 0 ? 2 : 0;
    default:
      return 0;
  }
}

Term Term::make(TermKind kind, std::uint32_t payload, std::vector<Term> children,
                std::vector<std::string> names) {
  auto node = std::make_shared<detail::Node>();
  node->kind = kind;
  node->payload = payload;
  names.resize(name_count(kind));
  node->names = std::move(names);
  std::uint32_t loose = kind == TermKind::Var ? payload + 1 : 0;
  std::size_t size = 1;
  for (std::size_t i = 0; i < children.size(); ++i) {
    const std::uint32_t b = binders_of(kind, i);
    const std::uint32_t inner = children[i].loose_bound();
    loose = std::max(loose, inner > b ? inner - b : 0);
    size += children[i].size();
  }
  node->loose = loose;
  node->size = size;
  node->children = std::move(children);
  return Term(std::move(node));
}

Term Term::var(std::uint32_t index) { return make(TermKind::Var, index, {}, {}); }
Term Term::sort(Level level) { return make(TermKind::Sort, level.value, {}, {}); }

Term Term::pi(Term domain, Term codomain, std::string name) {
  return make(TermKind::Pi, 0, {std::move(domain), std::move(codomain)}, {std::move(name)});
}

Term Term::lambda(Term domain, Term body, std::string name) {
  return make(TermKind::Lambda, 0, {std::move(domain), std::move(body)}, {std::move(name)});
}

Term Term::app(Term head, Term arg) {
  return make(TermKind::App, 0, {std::move(head), std::move(arg)}, {});
}

Term Term::apps(Term head, std::initializer_list<Term> args) {
  Term result = std::move(head);
  for (const Term& a : args) result = app(std::move(result), a);
  return result;
}

Term Term::sigma(Term first, Term second, std::string name) {
  return make(TermKind::Sigma, 0, {std::move(first), std::move(second)}, {std::move(name)});
}

Term Term::pair(Term first_ty, Term second_ty, Term fst, Term snd, std::string name) {
  return make(TermKind::Pair, 0,
              {std::move(first_ty), std::move(second_ty), std::move(fst), std::move(snd)},
              {std::move(name)});
}

Term Term::sig_rec(Term motive, Term branch, Term scrutinee, std::vector<std::string> names) {
  return make(TermKind::SigRec, 0, {std::move(motive), std::move(branch), std::move(scrutinee)},
              std::move(names));
}

Term Term::nat() {
  static const Term t = make(TermKind::Nat, 0, {}, {});
  return t;
}

Term Term::zero() {
  static const Term t = make(TermKind::Zero, 0, {}, {});
  return t;
}

Term Term::succ(Term pred) { return make(TermKind::Succ, 0, {std::move(pred)}, {}); }

Term Term::nat_rec(Term motive, Term base, Term step, Term scrutinee,
                   std::vector<std::string> names) {
  return make(TermKind::NatRec, 0,
              {std::move(motive), std::move(base), std::move(step), std::move(scrutinee)},
              std::move(names));
}

Term Term::eq(Term ty, Term lhs, Term rhs) {
  return make(TermKind::Eq, 0, {std::move(ty), std::move(lhs), std::move(rhs)}, {});
}

Term Term::refl(Term ty, Term val) {
  return make(TermKind::Refl, 0, {std::move(ty), std::move(val)}, {});
}

Term Term::eq_rec(Term motive, Term branch, Term scrutinee, std::vector<std::string> names) {
  return make(TermKind::EqRec, 0, {std::move(motive), std::move(branch), std::move(scrutinee)},
              std::move(names));
}

Term Term::numeral(unsigned n) {
  Term t = zero();
  for (unsigned i = 0; i < n; ++i) t = succ(std::move(t));
  return t;
}

TermKind Term::kind() const { return node_->kind; }

std::uint32_t Term::index() const {
  assert(kind() == TermKind::Var);
  return node_->payload;
}

Level Term::level() const {
  assert(kind() == TermKind::Sort);
  return Level(node_->payload);
}

std::size_t Term::arity() const { return node_->children.size(); }

const Term& Term::child(std::size_t i) const {
  assert(i < node_->children.size());
  return node_->children[i];
}

std::span<const Term> Term::children() const { return node_->children; }
std::span<const std::string> Term::names() const { return node_->names; }

const std::string& Term::name(std::size_t k) const {
  return k < node_->names.size() ? node_->names[k] : kNoName;
}

std::uint32_t Term::loose_bound() const { return node_->loose; }
std::size_t Term::size() const { return node_->size; }

Term Term::rebuild(std::vector<Term> children) const {
  assert(children.size() == arity());
  bool same = true;
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (!children[i].same_node(child(i))) {
      same = false;
      break;
    }
  }
  if (same) return *this;
  return make(kind(), node_->payload, std::move(children), node_->names);
}

Term lift(const Term& t, std::uint32_t amount, std::uint32_t cutoff) {
  if (amount == 0 || t.loose_bound() <= cutoff) return t;
  if (t.is(TermKind::Var)) return Term::var(t.index() + amount);
  std::vector<Term> kids;
  kids.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) {
    kids.push_back(lift(t.child(i), amount, cutoff + Term::binders_of(t.kind(), i)));
  }
  return t.rebuild(std::move(kids));
}

Term subst(const Term& t, const Term& u, std::uint32_t index) {
  if (t.loose_bound() <= index) return t;
  if (t.is(TermKind::Var)) {
    const std::uint32_t n = t.index();
    if (n < index) return t;
    if (n == index) return lift(u, index, 0);
    return Term::var(n - 1);
  }
  std::vector<Term> kids;
  kids.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) {
    kids.push_back(subst(t.child(i), u, index + Term::binders_of(t.kind(), i)));
  }
  return t.rebuild(std::move(kids));
}

Term subst2(const Term& t, const Term& outer, const Term& inner) {
  return subst(subst(t, lift(inner, 1, 0), 0), outer, 0);
}

bool alpha_eq(const Term& t, const Term& u) {
  if (t.same_node(u)) return true;
  if (t.kind() != u.kind() || t.arity() != u.arity() || t.loose_bound() != u.loose_bound() ||
      t.size() != u.size()) {
    return false;
  }
  switch (t.kind()) {
    case TermKind::Var:
      return t.index() == u.index();
    case TermKind::Sort:
      return t.level() == u.level();
    default:
      break;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (!alpha_eq(t.child(i), u.child(i))) return false;
  }
  return true;
}

bool occurs_free(const Term& t, std::uint32_t index) {
  if (t.loose_bound() <= index) return false;
  if (t.is(TermKind::Var)) return t.index() == index;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (occurs_free(t.child(i), index + Term::binders_of(t.kind(), i))) return true;
  }
  return false;
}

Context::Context(std::initializer_list<Term> decls) : decls_(decls), names_(decls.size()) {}

Term Context::lookup(std::uint32_t index) const {
  assert(index < decls_.size());
  return lift(raw(index), index + 1, 0);
}

void Context::push(Term decl, std::string name) {
  decls_.push_back(std::move(decl));
  names_.push_back(std::move(name));
}

Context Context::extended(Term decl, std::string name) const {
  Context c = *this;
  c.push(std::move(decl), std::move(name));
  return c;
}

Context Context::extended(Term outer, Term inner, std::string outer_name,
                          std::string inner_name) const {
  Context c = *this;
  c.push(std::move(outer), std::move(outer_name));
  c.push(std::move(inner), std::move(inner_name));
  return c;
}

Context Context::prefix(std::size_t length) const {
  assert(length <= decls_.size());
  Context c;
  c.decls_.assign(decls_.begin(), decls_.begin() + static_cast<std::ptrdiff_t>(length));
  c.names_.assign(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(length));
  return c;
}

bool alpha_eq(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!alpha_eq(a.decls()[i], b.decls()[i])) return false;
  }
  return true;
}

}  // namespace bitt
