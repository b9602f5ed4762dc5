#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bitt/bidir.hpp"
#include "bitt/syntax.hpp"

namespace bitt::oracle {

/// Rules of the undirected system. Empty and Ext derive context judgments
/// ⊢ Γ; the rest derive typing judgments Γ ⊢ t : T.
enum class Rule : std::uint8_t {
  Empty,
  Ext,
  Sort,
  Var,
  Prod,
  Abs,
  App,
  Cumul,
  SigmaType,
  SigmaCons,
  SigmaRec,
  NatType,
  Zero,
  Succ,
  NatRec,
  EqType,
  Refl,
  EqRec,
};

const char* rule_name(Rule rule);
std::optional<Rule> rule_from_name(const std::string& name);
unsigned premise_count(Rule rule);
bool is_context_rule(Rule rule);

struct Derivation;
using DerivationPtr = std::shared_ptr<const Derivation>;

/// One rule application. Premise order per rule:
///
///   Ext        [⊢ Γ, Γ ⊢ A : □i]
///   Sort/Var/NatType/Zero  [⊢ Γ]
///   Prod, SigmaType        [Γ ⊢ A : □i, Γ,A ⊢ B : □j]
///   Abs        [Γ ⊢ ΠA.B : □i, Γ,A ⊢ t : B]
///   App        [Γ ⊢ f : ΠA.B, Γ ⊢ u : A]
///   Cumul      [Γ ⊢ t : A, Γ ⊢ B : □i]          with A ≼ B
///   SigmaCons  [A : □i, Γ,A ⊢ B : □j, a : A, b : B[a]]
///   SigmaRec   [Γ,ΣA.B ⊢ P : □i, Γ,A,B ⊢ b : P[(x,y)], s : ΣA.B]
///   Succ       [n : ℕ]
///   NatRec     [Γ,ℕ ⊢ P : □i, b0 : P[0], Γ,ℕ,P ⊢ bS : P[S x], s : ℕ]
///   EqType     [A : □i, a : A, a' : A]
///   Refl       [A : □i, a : A]
///   EqRec      [Γ,A,Eq A a x ⊢ P : □i, b : P[a, refl A a], s : Eq A a a']
struct Derivation {
  Rule rule;
  Context ctx;
  std::optional<Term> term;  // absent for context judgments
  std::optional<Term> type;
  std::vector<DerivationPtr> premises;
};

DerivationPtr make_context(Rule rule, Context ctx, std::vector<DerivationPtr> premises);
DerivationPtr make_typing(Rule rule, Context ctx, Term term, Term type,
                          std::vector<DerivationPtr> premises);

/// ⊢ · and ⊢ Γ, x : A.
DerivationPtr empty_context();
DerivationPtr extend_context(const DerivationPtr& ctx_derivation, const DerivationPtr& decl_sort,
                             std::string name = {});

std::size_t node_count(const DerivationPtr& d);

// ---------------------------------------------------------------------------
// Validation

struct Validation {
  bool ok = true;
  std::string diagnostic;  // empty when ok
  std::string path;        // "root/1/0" style address of the first bad node
};

Validation validate(const DerivationPtr& d);

// ---------------------------------------------------------------------------
// Elaboration of bidirectional traces

/// Raised when a successful bidirectional run cannot be turned into a valid
/// undirected derivation.
class ElaborationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Build the undirected derivation for the judgment at the root of `trace`
/// (inference, checking or constrained inference) in the context derived by
/// `ctx_derivation`.
DerivationPtr elaborate(const Trace& trace, const DerivationPtr& ctx_derivation);

/// ⊢ Γ, with each declaration's sort derivation elaborated from bidir.
DerivationPtr elaborate_context(const Context& ctx);

/// Γ ⊢ T : □i for a type T, obtained by running and elaborating bidir.
DerivationPtr type_derivation(const DerivationPtr& ctx_derivation, const Term& type);

// ---------------------------------------------------------------------------
// Derivation transforms

/// Weakening: `d` lives in Γ, Δ with |Γ| = base; the result lives in
/// Γ, Θ, Δ↑ where `extended` derives ⊢ Γ, Θ.
DerivationPtr weaken(const DerivationPtr& d, std::size_t base, const DerivationPtr& extended);

/// Substitution: `d` lives in Γ, z : C, Δ with |Γ| = base and `du` derives
/// Γ ⊢ u : C; the result lives in Γ, Δ[u].
DerivationPtr substitute(const DerivationPtr& d, std::size_t base, const DerivationPtr& du);

/// Drop Cumul nodes at the root.
DerivationPtr strip_cumul(DerivationPtr d);

// ---------------------------------------------------------------------------
// Generation

struct GenConfig {
  unsigned max_depth = 4;
  Level universe_cap = Level(2);
  std::uint64_t seed = 0;
  double cumul_insert_prob = 0.5;
  /// Extra declarations generated in front of the subject, at most.
  unsigned max_context = 3;
};

struct Generated {
  DerivationPtr derivation;  // Γ ⊢ term : type
  Context ctx;
  Term term;
  Term type;
  /// Conclusion before the trailing Cumul node (same as `derivation` when no
  /// lift was inserted).
  DerivationPtr base;
  Term base_type;
  /// Γ ⊢ base_type : □i
  DerivationPtr base_type_derivation;
  DerivationPtr ctx_derivation;
  bool lifted = false;
};

Generated generate(const GenConfig& config);

/// Another trailing lift of the same subject drawn from `stream`; nullopt
/// when the base type has no strict lift under the universe cap.
std::optional<Generated> relift(const Generated& g, const GenConfig& config, std::uint64_t stream);

/// Strict ≼-enlargements exist for this type under the cap?
bool has_strict_lift(const Term& type, Level cap);

/// Smallest typing sub-derivation of `d` (by term size) for which `fails`
/// still holds, or `d` itself.
DerivationPtr shrink(const DerivationPtr& d,
                     const std::function<bool(const DerivationPtr&)>& fails);

// ---------------------------------------------------------------------------
// Properties over generated instances. Each returns a description of the
// violation, or nullopt when the property holds.

/// If infer succeeds on (Γ, t), its elaborated trace validates.
std::optional<std::string> correctness_violation(const DerivationPtr& ctx_derivation,
                                                 const Term& term);

/// infer(Γ, t) succeeds with some T0 ≼ type.
std::optional<std::string> completeness_violation(const Context& ctx, const Term& term,
                                                  const Term& type);

/// The inferred type is below the generated type and below a re-lifted one.
std::optional<std::string> principality_violation(const Generated& g, const GenConfig& config,
                                                  bool* relifted = nullptr);

// ---------------------------------------------------------------------------
// Serialization

/// {rule, ctx, term, type, premises}; terms printed in concrete syntax.
nlohmann::json to_json(const DerivationPtr& d);
nlohmann::json to_json(const Trace& trace);

}  // namespace bitt::oracle
