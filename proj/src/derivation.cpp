#include <array>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "bitt/oracle.hpp"
#include "bitt/surface.hpp"

namespace bitt::oracle {

namespace {

struct RuleInfo {
  Rule rule;
  const char* name;
  unsigned premises;
};

constexpr std::array<RuleInfo, 18> kRules{{
    {Rule::Empty, "Empty", 0},
    {Rule::Ext, "Ext", 2},
    {Rule::Sort, "Sort", 1},
    {Rule::Var, "Var", 1},
    {Rule::Prod, "Prod", 2},
    {Rule::Abs, "Abs", 2},
    {Rule::App, "App", 2},
    {Rule::Cumul, "Cumul", 2},
    {Rule::SigmaType, "Sigma-type", 2},
    {Rule::SigmaCons, "Sigma-cons", 4},
    {Rule::SigmaRec, "Sigma-rec", 3},
    {Rule::NatType, "Nat-type", 1},
    {Rule::Zero, "Nat-zero", 1},
    {Rule::Succ, "Nat-succ", 1},
    {Rule::NatRec, "Nat-rec", 4},
    {Rule::EqType, "Eq-type", 3},
    {Rule::Refl, "Eq-refl", 2},
    {Rule::EqRec, "Eq-rec", 3},
}};

}  // namespace

const char* rule_name(Rule rule) { return kRules[static_cast<std::size_t>(rule)].name; }

std::optional<Rule> rule_from_name(const std::string& name) {
  for (const auto& info : kRules) {
    if (name == info.name) return info.rule;
  }
  return std::nullopt;
}

unsigned premise_count(Rule rule) { return kRules[static_cast<std::size_t>(rule)].premises; }

bool is_context_rule(Rule rule) { return rule == Rule::Empty || rule == Rule::Ext; }

DerivationPtr make_context(Rule rule, Context ctx, std::vector<DerivationPtr> premises) {
  return std::make_shared<const Derivation>(
      Derivation{rule, std::move(ctx), std::nullopt, std::nullopt, std::move(premises)});
}

DerivationPtr make_typing(Rule rule, Context ctx, Term term, Term type,
                          std::vector<DerivationPtr> premises) {
  return std::make_shared<const Derivation>(
      Derivation{rule, std::move(ctx), std::move(term), std::move(type), std::move(premises)});
}

DerivationPtr empty_context() { return make_context(Rule::Empty, Context{}, {}); }

DerivationPtr extend_context(const DerivationPtr& ctx_derivation, const DerivationPtr& decl_sort,
                             std::string name) {
  Context ctx = ctx_derivation->ctx.extended(*decl_sort->term, std::move(name));
  return make_context(Rule::Ext, std::move(ctx), {ctx_derivation, decl_sort});
}

std::size_t node_count(const DerivationPtr& d) {
  std::unordered_set<const Derivation*> seen;
  std::vector<const Derivation*> todo{d.get()};
  while (!todo.empty()) {
    const Derivation* n = todo.back();
    todo.pop_back();
    if (!seen.insert(n).second) continue;
    for (const auto& p : n->premises) todo.push_back(p.get());
  }
  return seen.size();
}

DerivationPtr strip_cumul(DerivationPtr d) {
  while (d->rule == Rule::Cumul) d = d->premises.at(0);
  return d;
}

namespace {

// Derivations are DAGs (context derivations in particular are shared by every
// leaf). A node reached more than once is written out in full the first time,
// with an "id"; later occurrences are {"ref": id} stubs with no premises.
class JsonWriter {
 public:
  explicit JsonWriter(const DerivationPtr& root) { count(root); }

  nlohmann::json write(const DerivationPtr& d) {
    nlohmann::json node = header(*d);
    const bool shared = uses_.at(d.get()) > 1;
    if (shared) {
      auto [it, fresh] = ids_.try_emplace(d.get(), ids_.size());
      if (!fresh) {
        node["ref"] = it->second;
        node["premises"] = nlohmann::json::array();
        return node;
      }
      node["id"] = it->second;
    }
    nlohmann::json premises = nlohmann::json::array();
    for (const auto& p : d->premises) premises.push_back(write(p));
    node["premises"] = std::move(premises);
    return node;
  }

 private:
  void count(const DerivationPtr& d) {
    if (uses_[d.get()]++ > 0) return;
    for (const auto& p : d->premises) count(p);
  }

  static nlohmann::json header(const Derivation& d) {
    nlohmann::json node;
    node["rule"] = rule_name(d.rule);
    const auto scope = surface::scope_names(d.ctx);
    nlohmann::json ctx = nlohmann::json::array();
    for (std::size_t i = 0; i < d.ctx.size(); ++i) {
      const std::vector<std::string> prefix(scope.begin(), scope.begin() + static_cast<long>(i));
      ctx.push_back({{"name", scope[i]}, {"type", surface::print(d.ctx.decls()[i], prefix)}});
    }
    node["ctx"] = std::move(ctx);
    node["term"] = d.term ? nlohmann::json(surface::print(*d.term, scope)) : nlohmann::json();
    node["type"] = d.type ? nlohmann::json(surface::print(*d.type, scope)) : nlohmann::json();
    return node;
  }

  std::unordered_map<const Derivation*, std::size_t> uses_;
  std::unordered_map<const Derivation*, std::size_t> ids_;
};

}  // namespace

nlohmann::json to_json(const DerivationPtr& d) { return JsonWriter(d).write(d); }

nlohmann::json to_json(const Trace& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& step : trace) {
    const auto scope = surface::scope_names(step.ctx);
    out.push_back({{"rule", bitt::rule_name(step.rule)},
                   {"subject", surface::print(step.subject, scope)},
                   {"output", surface::print(step.output, scope)}});
  }
  return out;
}

}  // namespace bitt::oracle
