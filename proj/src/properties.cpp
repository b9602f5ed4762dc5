#include "bitt/conversion.hpp"
#include "bitt/oracle.hpp"
#include "bitt/surface.hpp"

namespace bitt::oracle {

namespace {

std::optional<Term> try_infer(const Context& ctx, const Term& term, std::string& why) {
  try {
    return infer(ctx, term).ty;
  } catch (const TypeError& e) {
    why = std::string("infer failed with ") + error_kind_name(e.kind());
    return std::nullopt;
  }
}

}  // namespace

std::optional<std::string> correctness_violation(const DerivationPtr& ctx_derivation,
                                                 const Term& term) {
  InferOutcome out{term, std::nullopt};
  try {
    out = infer(ctx_derivation->ctx, term, {kDefaultFuel, true});
  } catch (const TypeError&) {
    return std::nullopt;  // nothing to elaborate
  }
  try {
    const Validation v = validate(elaborate(*out.trace, ctx_derivation));
    if (!v.ok) return "elaborated derivation rejected at " + v.path + ": " + v.diagnostic;
  } catch (const ElaborationError& e) {
    return std::string("elaboration failed: ") + e.what();
  }
  return std::nullopt;
}

std::optional<std::string> completeness_violation(const Context& ctx, const Term& term,
                                                  const Term& type) {
  std::string why;
  const auto inferred = try_infer(ctx, term, why);
  if (!inferred) return why;
  if (!cumul(*inferred, type)) {
    return "inferred " + surface::print(*inferred, ctx) + " is not below " +
           surface::print(type, ctx);
  }
  return std::nullopt;
}

std::optional<std::string> principality_violation(const Generated& g, const GenConfig& config,
                                                  bool* relifted) {
  std::string why;
  const auto inferred = try_infer(g.ctx, g.term, why);
  if (!inferred) return why;
  if (relifted) *relifted = false;
  std::vector<Term> alternatives{g.type, g.base_type};
  if (auto second = relift(g, config, 1)) {
    alternatives.push_back(second->type);
    if (relifted) *relifted = true;
  }
  for (const auto& alt : alternatives) {
    if (!cumul(*inferred, alt)) {
      return "inferred " + surface::print(*inferred, g.ctx) + " is not below " +
             surface::print(alt, g.ctx);
    }
  }
  return std::nullopt;
}

}  // namespace bitt::oracle
