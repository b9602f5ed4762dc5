#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitt/reduction.hpp"
#include "bitt/syntax.hpp"

namespace bitt {

/// Head constructor a constrained-inference judgment asks for.
enum class HeadKind : std::uint8_t { Sort, Pi, Sigma, Nat, Eq };

const char* head_name(HeadKind head);

/// Rules of the bidirectional system. `Cumul` is the single checking rule;
/// the `*Inf` rules are the constrained-inference family.
enum class BidirRule : std::uint8_t {
  Sort,
  Var,
  Prod,
  Abs,
  App,
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
  Cumul,
  SortInf,
  ProdInf,
  SigmaInf,
  NatInf,
  EqInf,
};

const char* rule_name(BidirRule rule);

/// Number of sub-judgments a rule fires, in the order they are traced.
unsigned premise_count(BidirRule rule);

/// One fired rule: Γ ⊢ subject ⇒ output (inference), ◃ output (checking, where
/// output is the expected type) or ▹h output (constrained inference).
struct TraceStep {
  BidirRule rule;
  Context ctx;
  Term subject;
  Term output;
};

/// Fired rules in prefix order. Together with premise_count this is a
/// serialized derivation tree.
using Trace = std::vector<TraceStep>;

struct InferOutcome {
  Term ty;
  std::optional<Trace> trace;
};

enum class ErrorKind : std::uint8_t {
  UnboundVariable,
  NotASort,
  NotAProduct,
  NotASigma,
  NotANat,
  NotAnEq,
  CumulFailed,
  FuelExhausted,
};

const char* error_kind_name(ErrorKind kind);

class TypeError : public std::runtime_error {
 public:
  TypeError(ErrorKind kind, std::vector<unsigned> location, Context ctx, Term subject,
            std::optional<Term> expected = std::nullopt,
            std::optional<Term> found = std::nullopt);

  ErrorKind kind() const { return kind_; }
  /// Child indices leading from the checked term to the failing subterm.
  const std::vector<unsigned>& location() const { return location_; }
  /// Context of the failing judgment.
  const Context& ctx() const { return ctx_; }
  /// Failing subterm.
  const Term& subject() const { return subject_; }
  /// CumulFailed: the type checked against.
  const std::optional<Term>& expected() const { return expected_; }
  /// CumulFailed: the inferred type. NotA*: the weak-head form that did not
  /// match the requested head.
  const std::optional<Term>& found() const { return found_; }
  /// Set by check_wf_context: position of the offending declaration.
  const std::optional<std::size_t>& decl_index() const { return decl_index_; }

  TypeError& with_decl_index(std::size_t index) {
    decl_index_ = index;
    return *this;
  }

 private:
  ErrorKind kind_;
  std::vector<unsigned> location_;
  Context ctx_;
  Term subject_;
  std::optional<Term> expected_;
  std::optional<Term> found_;
  std::optional<std::size_t> decl_index_;
};

struct CheckOptions {
  /// Contraction budget shared by one top-level call.
  std::uint64_t fuel = kDefaultFuel;
  bool record_trace = false;
};

/// Γ ⊢ t ⇒ T. The context is assumed well-formed (see check_wf_context).
InferOutcome infer(const Context& ctx, const Term& t, const CheckOptions& options = {});

/// Γ ⊢ t ◃ expected, via the single Cumul rule. Returns the trace (empty
/// unless requested).
Trace check(const Context& ctx, const Term& t, const Term& expected,
            const CheckOptions& options = {});

/// Γ ⊢ t ▹h T: infer, then weak-head reduce until the head is exposed.
InferOutcome infer_constrained(const Context& ctx, const Term& t, HeadKind head,
                               const CheckOptions& options = {});

/// ⊢ Γ: every declaration must be a type in the prefix before it.
Trace check_wf_context(const Context& ctx, const CheckOptions& options = {});

/// The inferred type, which is the ≼-least type of `t` in `ctx`.
Term principal_type(const Context& ctx, const Term& t, const CheckOptions& options = {});

}  // namespace bitt
