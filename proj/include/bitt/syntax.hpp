#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bitt {

/// Universe index of a sort.
struct Level {
  std::uint32_t value = 0;

  constexpr Level() = default;
  constexpr explicit Level(std::uint32_t v) : value(v) {}

  constexpr Level succ() const { return Level(value + 1); }
  friend constexpr Level max(Level a, Level b) { return a.value < b.value ? b : a; }
  friend constexpr auto operator<=>(Level, Level) = default;
};

enum class TermKind : std::uint8_t {
  Var,
  Sort,
  Pi,
  Lambda,
  App,
  Sigma,
  Pair,
  SigRec,
  Nat,
  Zero,
  Succ,
  NatRec,
  Eq,
  Refl,
  EqRec,
};

const char* kind_name(TermKind kind);

namespace detail {
struct Node;
}

/// Immutable, shared kernel term with de Bruijn indices.
///
/// Binder name hints are carried for printing only; they never take part in
/// equality. Child layout per kind (binder count in brackets):
///
///   Pi(domain, codomain[1])          Lambda(domain, body[1])
///   App(head, arg)                   Sigma(first, second[1])
///   Pair(first_ty, second_ty[1], fst, snd)
///   SigRec(motive[1], branch[2], scrutinee)
///   Succ(pred)                       NatRec(motive[1], base, step[2], scrutinee)
///   Eq(ty, lhs, rhs)                 Refl(ty, val)
///   EqRec(motive[2], branch, scrutinee)
///
/// In a two-binder child the outer variable is index 1 and the inner one is
/// index 0 (e.g. in a NatRec step, `p` is 0 and the predecessor `x` is 1).
class Term {
 public:
  static Term var(std::uint32_t index);
  static Term sort(Level level);
  static Term sort(std::uint32_t level) { return sort(Level(level)); }
  static Term pi(Term domain, Term codomain, std::string name = {});
  static Term lambda(Term domain, Term body, std::string name = {});
  static Term app(Term head, Term arg);
  static Term apps(Term head, std::initializer_list<Term> args);
  static Term sigma(Term first, Term second, std::string name = {});
  static Term pair(Term first_ty, Term second_ty, Term fst, Term snd, std::string name = {});
  static Term sig_rec(Term motive, Term branch, Term scrutinee, std::vector<std::string> names = {});
  static Term nat();
  static Term zero();
  static Term succ(Term pred);
  static Term nat_rec(Term motive, Term base, Term step, Term scrutinee,
                      std::vector<std::string> names = {});
  static Term eq(Term ty, Term lhs, Term rhs);
  static Term refl(Term ty, Term val);
  static Term eq_rec(Term motive, Term branch, Term scrutinee, std::vector<std::string> names = {});

  /// Unary numeral `succ^n zero`.
  static Term numeral(unsigned n);

  TermKind kind() const;
  bool is(TermKind k) const { return kind() == k; }

  /// de Bruijn index; only meaningful for Var.
  std::uint32_t index() const;
  /// Universe level; only meaningful for Sort.
  Level level() const;

  std::size_t arity() const;
  const Term& child(std::size_t i) const;
  std::span<const Term> children() const;
  /// Number of variables bound around child `i`.
  static unsigned binders_of(TermKind kind, std::size_t i);

  /// Name hints for every bound variable of this node, in child order and
  /// outermost first within a child. Empty strings mean "no hint".
  std::span<const std::string> names() const;
  /// Name hint of the `k`-th variable bound by this node, or "".
  const std::string& name(std::size_t k) const;

  /// 1 + the largest free de Bruijn index, or 0 for a closed term.
  std::uint32_t loose_bound() const;
  /// Number of nodes.
  std::size_t size() const;

  // Role accessors for the binary formers.
  const Term& domain() const { return child(0); }
  const Term& codomain() const { return child(1); }
  const Term& body() const { return child(1); }
  const Term& head() const { return child(0); }
  const Term& arg() const { return child(1); }

  /// Same kind, payload and names; new children.
  Term rebuild(std::vector<Term> children) const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  explicit Term(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
  static Term make(TermKind kind, std::uint32_t payload, std::vector<Term> children,
                   std::vector<std::string> names);

  std::shared_ptr<const detail::Node> node_;
};

/// Shift free indices >= `cutoff` up by `amount`.
Term lift(const Term& t, std::uint32_t amount, std::uint32_t cutoff = 0);

/// Replace variable `index` in `t` by `u`, decrementing the indices above it.
/// `u` lives in the context *outside* the substituted variable, so it is
/// lifted by `index` at the replacement site.
Term subst(const Term& t, const Term& u, std::uint32_t index = 0);

/// Instantiate the two innermost variables of `t` (outer = index 1,
/// inner = index 0). Both replacement terms live outside the two binders.
Term subst2(const Term& t, const Term& outer, const Term& inner);

/// Structural equality on de Bruijn terms, ignoring name hints.
bool alpha_eq(const Term& t, const Term& u);

/// Does free variable `index` occur in `t`?
bool occurs_free(const Term& t, std::uint32_t index);

/// Typing context: declarations innermost last.
class Context {
 public:
  Context() = default;
  Context(std::initializer_list<Term> decls);

  std::size_t size() const { return decls_.size(); }
  bool empty() const { return decls_.empty(); }

  /// Declarations, outermost first.
  const std::vector<Term>& decls() const { return decls_; }
  const std::vector<std::string>& names() const { return names_; }

  /// Declaration at de Bruijn index `index`, expressed in the full context.
  Term lookup(std::uint32_t index) const;
  /// Declaration at `index` as written (in its own prefix).
  const Term& raw(std::uint32_t index) const { return decls_[decls_.size() - 1 - index]; }

  void push(Term decl, std::string name = {});
  Context extended(Term decl, std::string name = {}) const;
  Context extended(Term outer, Term inner, std::string outer_name = {}, std::string inner_name = {}) const;
  /// The first `length` declarations.
  Context prefix(std::size_t length) const;

 private:
  std::vector<Term> decls_;
  std::vector<std::string> names_;
};

bool alpha_eq(const Context& a, const Context& b);

}  // namespace bitt
