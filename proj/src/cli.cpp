#include "bitt/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bitt/bidir.hpp"
#include "bitt/conversion.hpp"
#include "bitt/oracle.hpp"
#include "bitt/reduction.hpp"
#include "bitt/surface.hpp"

namespace bitt::cli {

namespace {

using nlohmann::json;

// A reportable failure, already classified.
struct Failure {
  int code;
  std::string kind;
  std::string message;
  std::string source;  // file name or "<expr>"
  std::optional<surface::Position> pos;
};

struct Settings {
  std::uint64_t fuel = kDefaultFuel;
  bool json_output = false;
};

class Session {
 public:
  Session(Settings settings, std::string command, std::ostream& out, std::ostream& err)
      : settings_(settings), out_(out), err_(err) {
    doc_["format"] = 1;
    doc_["command"] = std::move(command);
  }

  const Settings& settings() const { return settings_; }
  CheckOptions options() const { return CheckOptions{settings_.fuel, false}; }
  json& doc() { return doc_; }

  // Text-mode output line.
  void line(const std::string& s) {
    if (!settings_.json_output) out_ << s << '\n';
  }

  int finish(int code) {
    doc_["ok"] = code == kOk;
    if (settings_.json_output) out_ << doc_.dump(2) << '\n';
    return code;
  }

  int fail(const Failure& f) {
    std::string where = f.source;
    if (f.pos) where += ":" + surface::to_string(*f.pos);
    err_ << where << ": error: " << f.kind << ": " << f.message << '\n';
    json e{{"kind", f.kind}, {"message", f.message}, {"source", f.source}};
    if (f.pos) {
      e["line"] = f.pos->line;
      e["column"] = f.pos->column;
    }
    doc_["error"] = std::move(e);
    return finish(f.code);
  }

 private:
  Settings settings_;
  std::ostream& out_;
  std::ostream& err_;
  json doc_;
};

// Position of the surface subterm reached by following child indices.
surface::Position locate(const surface::SurfaceTerm& root, const std::vector<unsigned>& path) {
  const surface::SurfaceTerm* at = &root;
  for (unsigned i : path) {
    if (i >= at->children.size()) break;
    at = at->children[i].get();
  }
  return at->pos;
}

std::string describe(const TypeError& e) {
  const auto show = [&](const Term& t) { return surface::print(t, e.ctx()); };
  const std::string subject = show(e.subject());
  switch (e.kind()) {
    case ErrorKind::UnboundVariable:
      return "variable " + subject + " is not in scope";
    case ErrorKind::NotASort:
    case ErrorKind::NotAProduct:
    case ErrorKind::NotASigma:
    case ErrorKind::NotANat:
    case ErrorKind::NotAnEq: {
      static const std::map<ErrorKind, const char*> wanted{
          {ErrorKind::NotASort, "a sort"},
          {ErrorKind::NotAProduct, "a product type"},
          {ErrorKind::NotASigma, "a sigma type"},
          {ErrorKind::NotANat, "Nat"},
          {ErrorKind::NotAnEq, "an equality type"}};
      return subject + " has type " + show(*e.found()) + ", which is not " +
             wanted.at(e.kind());
    }
    case ErrorKind::CumulFailed:
      return subject + " has type " + show(*e.found()) + " but is expected to have type " +
             show(*e.expected());
    case ErrorKind::FuelExhausted:
      return "reduction budget exhausted while checking " + subject;
  }
  return e.what();
}

Failure from_type_error(const TypeError& e, const surface::SurfaceTerm& root,
                        const std::string& source) {
  const int code = e.kind() == ErrorKind::FuelExhausted ? kOutOfFuel : kFailure;
  return Failure{code, error_kind_name(e.kind()), describe(e), source, locate(root, e.location())};
}

Failure from_parse_error(const surface::ParseError& e, const std::string& source) {
  return Failure{kInputError, "ParseError", e.message(), source, e.position()};
}

// Unbound surface names are reported with the kernel's error kind.
Failure from_unbound(const surface::UnboundName& e, const std::string& source) {
  return Failure{kFailure, error_kind_name(ErrorKind::UnboundVariable),
                 "unbound name '" + e.name() + "'", source, e.position()};
}

Failure out_of_fuel(std::uint64_t limit, const std::string& source) {
  return Failure{kOutOfFuel, error_kind_name(ErrorKind::FuelExhausted),
                 "reduction budget of " + std::to_string(limit) + " steps exhausted", source,
                 std::nullopt};
}

constexpr const char* kExprSource = "<expr>";

// Parse and resolve an inline expression.
std::pair<surface::SurfacePtr, Term> read_expr(const std::string& text) {
  surface::SurfacePtr s = surface::parse_expression(text);
  Term t = surface::resolve(*s);
  return {s, t};
}

// Run `body`, translating library exceptions into a reported failure.
template <typename F>
int guarded(Session& session, const std::string& source, F&& body) {
  try {
    return body();
  } catch (const Failure& f) {
    return session.fail(f);
  } catch (const surface::ParseError& e) {
    return session.fail(from_parse_error(e, source));
  } catch (const surface::UnboundName& e) {
    return session.fail(from_unbound(e, source));
  } catch (const FuelExhausted& e) {
    return session.fail(out_of_fuel(e.limit(), source));
  }
}

// Γ ⊢ T ▹□ _ : reject annotations that are not types.
void check_is_type(const Context& ctx, const surface::SurfaceTerm& s, const Term& ty,
                   const Session& session, const std::string& source) {
  try {
    infer_constrained(ctx, ty, HeadKind::Sort, session.options());
  } catch (const TypeError& e) {
    throw from_type_error(e, s, source);
  }
}

int cmd_check_file(Session& session, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return session.fail(Failure{kInputError, "IOError", "cannot read file", path, std::nullopt});
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  return guarded(session, path, [&] {
    const surface::SourceFile file = surface::parse(text);
    Context ctx;
    std::vector<std::string> scope;
    json defs = json::array();
    session.doc()["definitions"] = defs;
    for (const auto& def : file.definitions) {
      const Term body = surface::resolve(*def.body, scope);
      Term ty = body;
      if (def.annotation) {
        const surface::SurfaceTerm& ann_s = **def.annotation;
        const Term ann = surface::resolve(ann_s, scope);
        check_is_type(ctx, ann_s, ann, session, path);
        try {
          check(ctx, body, ann, session.options());
        } catch (const TypeError& e) {
          throw from_type_error(e, *def.body, path);
        }
        ty = ann;
      } else {
        try {
          ty = infer(ctx, body, session.options()).ty;
        } catch (const TypeError& e) {
          throw from_type_error(e, *def.body, path);
        }
      }
      const std::string printed = surface::print(ty, scope);
      session.line(def.name + " : " + printed);
      defs.push_back({{"name", def.name}, {"type", printed}});
      session.doc()["definitions"] = defs;
      ctx.push(ty, def.name);
      scope.push_back(def.name);
    }
    return session.finish(kOk);
  });
}

int cmd_check_expr(Session& session, const std::string& expr, const std::optional<std::string>& type) {
  return guarded(session, kExprSource, [&] {
    const auto [s, t] = read_expr(expr);
    Term ty = t;
    if (type) {
      const auto [ts, tt] = read_expr(*type);
      check_is_type(Context{}, *ts, tt, session, kExprSource);
      try {
        check(Context{}, t, tt, session.options());
      } catch (const TypeError& e) {
        throw from_type_error(e, *s, kExprSource);
      }
      ty = tt;
    } else {
      try {
        ty = infer(Context{}, t, session.options()).ty;
      } catch (const TypeError& e) {
        throw from_type_error(e, *s, kExprSource);
      }
    }
    const std::string term_text = surface::print(t);
    const std::string type_text = surface::print(ty);
    session.line(term_text + " : " + type_text);
    session.doc()["term"] = term_text;
    session.doc()["type"] = type_text;
    return session.finish(kOk);
  });
}

Term infer_or_fail(const Session& session, const surface::SurfaceTerm& s, const Term& t) {
  try {
    return infer(Context{}, t, session.options()).ty;
  } catch (const TypeError& e) {
    throw from_type_error(e, s, kExprSource);
  }
}

int cmd_infer(Session& session, const std::string& expr) {
  return guarded(session, kExprSource, [&] {
    const auto [s, t] = read_expr(expr);
    const std::string type_text = surface::print(infer_or_fail(session, *s, t));
    session.line(type_text);
    session.doc()["term"] = surface::print(t);
    session.doc()["type"] = type_text;
    return session.finish(kOk);
  });
}

int cmd_normalize(Session& session, const std::string& expr) {
  return guarded(session, kExprSource, [&] {
    const auto [s, t] = read_expr(expr);
    const Term ty = infer_or_fail(session, *s, t);
    const std::string nf = surface::print(normalize(t, session.settings().fuel));
    session.line(nf);
    session.doc()["term"] = surface::print(t);
    session.doc()["type"] = surface::print(ty);
    session.doc()["normal_form"] = nf;
    return session.finish(kOk);
  });
}

int cmd_equiv(Session& session, const std::vector<std::string>& exprs, bool cumulative) {
  if (exprs.size() != 2) {
    return session.fail(Failure{kInputError, "UsageError", "equiv takes exactly two -e expressions",
                                kExprSource, std::nullopt});
  }
  return guarded(session, kExprSource, [&] {
    const auto [s1, t1] = read_expr(exprs[0]);
    const auto [s2, t2] = read_expr(exprs[1]);
    infer_or_fail(session, *s1, t1);
    infer_or_fail(session, *s2, t2);
    const std::uint64_t fuel = session.settings().fuel;
    const bool holds = cumulative ? cumul(t1, t2, fuel) : convertible(t1, t2, fuel);
    const std::string relation = cumulative ? "cumulative" : "convertible";
    session.line(holds ? relation : "not " + relation);
    session.doc()["relation"] = cumulative ? "cumulativity" : "conversion";
    session.doc()["holds"] = holds;
    return session.finish(holds ? kOk : kFailure);
  });
}

int cmd_trace(Session& session, std::ostream& out, const std::string& expr) {
  return guarded(session, kExprSource, [&] {
    const auto [s, t] = read_expr(expr);
    InferOutcome result{t, std::nullopt};
    try {
      result = infer(Context{}, t, CheckOptions{session.settings().fuel, true});
    } catch (const TypeError& e) {
      throw from_type_error(e, *s, kExprSource);
    }
    oracle::DerivationPtr derivation;
    try {
      derivation = oracle::elaborate(*result.trace, oracle::empty_context());
    } catch (const oracle::ElaborationError& e) {
      throw Failure{kFailure, "ElaborationError", e.what(), kExprSource, std::nullopt};
    }
    // Fail closed: nothing is printed unless the derivation checks.
    const oracle::Validation v = oracle::validate(derivation);
    if (!v.ok) {
      throw Failure{kFailure, "InvalidDerivation", v.path + ": " + v.diagnostic, kExprSource,
                    std::nullopt};
    }
    json doc{{"format", 1},
             {"term", surface::print(t)},
             {"type", surface::print(result.ty)},
             {"trace", oracle::to_json(*result.trace)},
             {"derivation", oracle::to_json(derivation)}};
    out << doc.dump(2) << '\n';
    return kOk;
  });
}

// One counterexample search over generated instances.
int cmd_fuzz(Session& session, std::uint64_t count, std::uint64_t seed) {
  oracle::GenConfig config;
  std::uint64_t relifted = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    config.seed = seed * 1000003ULL + i;
    const oracle::Generated g = oracle::generate(config);

    std::string property;
    std::optional<std::string> detail;
    std::function<bool(const oracle::DerivationPtr&)> fails;
    if ((detail = oracle::correctness_violation(g.ctx_derivation, g.term))) {
      property = "correctness";
      fails = [](const oracle::DerivationPtr& d) {
        try {
          return oracle::correctness_violation(oracle::elaborate_context(d->ctx), *d->term)
              .has_value();
        } catch (const std::exception&) {
          return false;
        }
      };
    } else if ((detail = oracle::completeness_violation(g.ctx, g.term, g.type))) {
      property = "completeness";
      fails = [](const oracle::DerivationPtr& d) {
        return oracle::completeness_violation(d->ctx, *d->term, *d->type).has_value();
      };
    } else {
      bool second = false;
      if ((detail = oracle::principality_violation(g, config, &second))) {
        property = "principality";
        fails = [](const oracle::DerivationPtr&) { return false; };
      }
      relifted += second ? 1 : 0;
    }
    if (detail) {
      const oracle::DerivationPtr small = oracle::shrink(g.derivation, fails);
      std::ostringstream msg;
      msg << property << " violated at iteration " << i << " (generator seed " << config.seed
          << "): " << *detail;
      session.line("counterexample: " + msg.str());
      session.line(oracle::to_json(small).dump(2));
      session.doc()["counterexample"] = {{"property", property},
                                         {"iteration", i},
                                         {"generator_seed", config.seed},
                                         {"detail", *detail},
                                         {"derivation", oracle::to_json(small)}};
      return session.fail(Failure{kFailure, "PropertyViolation", msg.str(), "fuzz", std::nullopt});
    }
  }
  session.line("fuzz: " + std::to_string(count) + " iterations from seed " + std::to_string(seed));
  session.line("correctness: " + std::to_string(count) + " passed");
  session.line("completeness: " + std::to_string(count) + " passed");
  session.line("principality: " + std::to_string(count) + " passed (" + std::to_string(relifted) +
               " with a second lift)");
  session.doc()["count"] = count;
  session.doc()["seed"] = seed;
  session.doc()["relifted"] = relifted;
  return session.finish(kOk);
}

std::optional<std::uint64_t> env_fuel(std::ostream& err) {
  const char* raw = std::getenv("BITT_FUEL");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) {
    err << "bitt: error: UsageError: BITT_FUEL must be a positive integer\n";
    return 0;
  }
  return v;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bidirectional type checker for CCω with Σ, ℕ and Eq", "bitt"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings settings;
  if (auto f = env_fuel(err)) {
    if (*f == 0) return kInputError;
    settings.fuel = *f;
  }
  app.add_option("--fuel", settings.fuel, "Reduction steps allowed per check (env BITT_FUEL)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--json", settings.json_output, "Print a JSON report on standard output");

  std::string file;
  std::vector<std::string> exprs;
  std::optional<std::string> type;
  bool cumulative = false;
  std::uint64_t count = 500;
  std::uint64_t seed = 0;

  auto* check = app.add_subcommand("check", "Type-check a .bitt file or an expression");
  check->add_option("file", file, "Source file");
  check->add_option("-e,--expr", exprs, "Expression to check")->expected(1);
  check->add_option("-t,--type", type, "Type to check the expression against");

  auto* infer_cmd = app.add_subcommand("infer", "Print the principal type of an expression");
  infer_cmd->add_option("-e,--expr", exprs, "Expression")->required()->expected(1);

  auto* normalize_cmd = app.add_subcommand("normalize", "Type-check, then print the normal form");
  normalize_cmd->add_option("-e,--expr", exprs, "Expression")->required()->expected(1);

  auto* equiv = app.add_subcommand("equiv", "Decide conversion (or cumulativity) of two terms");
  equiv->add_option("-e,--expr", exprs, "Expression (give two)")->required();
  equiv->add_flag("--cumul", cumulative, "Decide cumulativity instead of conversion");

  auto* trace = app.add_subcommand("trace", "Print the typing trace and its undirected derivation");
  trace->add_option("-e,--expr", exprs, "Expression")->required()->expected(1);

  auto* fuzz = app.add_subcommand("fuzz", "Run the generated property suites");
  fuzz->add_option("--n", count, "Number of iterations");
  fuzz->add_option("--seed", seed, "Base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Session session(settings, command, out, err);

  if (check->parsed()) {
    if (file.empty() == exprs.empty()) {
      return session.fail(Failure{kInputError, "UsageError",
                                  "check takes either a file or one -e expression", "check",
                                  std::nullopt});
    }
    if (!file.empty()) return cmd_check_file(session, file);
    return cmd_check_expr(session, exprs.front(), type);
  }
  if (infer_cmd->parsed()) return cmd_infer(session, exprs.front());
  if (normalize_cmd->parsed()) return cmd_normalize(session, exprs.front());
  if (equiv->parsed()) return cmd_equiv(session, exprs, cumulative);
  if (trace->parsed()) return cmd_trace(session, out, exprs.front());
  if (fuzz->parsed()) return cmd_fuzz(session, count, seed);
  return kInputError;
}

}  // namespace bitt::cli
