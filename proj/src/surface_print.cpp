#include <algorithm>
#include <string>
#include <vector>

#include "bitt/surface.hpp"

namespace bitt::surface {

namespace {

// Operator precedence of a printing position.
enum Prec { kTop = 0, kApp = 1, kAtom = 2 };

bool usable_hint(const std::string& hint) {
  if (hint.empty()) return false;
  try {
    const Term t = parse_term(hint, {hint});
    return t.is(TermKind::Var);
  } catch (const std::exception&) {
    return false;
  }
}

class Printer {
 public:
  explicit Printer(std::vector<std::string> scope) : scope_(std::move(scope)) {}

  std::string print(const Term& t, Prec prec) {
    switch (t.kind()) {
      case TermKind::Var: {
        const std::uint32_t i = t.index();
        if (i < scope_.size()) return scope_[scope_.size() - 1 - i];
        return "#" + std::to_string(i - scope_.size());
      }
      case TermKind::Sort:
        return "Type" + std::to_string(t.level().value);
      case TermKind::Nat:
        return "Nat";
      case TermKind::Zero:
        return "zero";
      case TermKind::Pi: {
        if (!occurs_free(t.codomain(), 0)) {
          std::string dom = print(t.domain(), kApp);
          std::string cod = under({""}, [&] { return print(t.codomain(), kTop); });
          return wrap(dom + " -> " + cod, prec, kTop);
        }
        const std::string x = fresh(t.name(0));
        std::string dom = print(t.domain(), kTop);
        std::string cod = under({x}, [&] { return print(t.codomain(), kTop); });
        return wrap("(" + x + " : " + dom + ") -> " + cod, prec, kTop);
      }
      case TermKind::Lambda: {
        const std::string x = fresh(t.name(0));
        std::string dom = print(t.domain(), kTop);
        std::string body = under({x}, [&] { return print(t.body(), kTop); });
        return wrap("fun (" + x + " : " + dom + ") => " + body, prec, kTop);
      }
      case TermKind::Sigma: {
        const std::string x = fresh(t.name(0));
        std::string first = print(t.child(0), kTop);
        std::string second = under({x}, [&] { return print(t.child(1), kTop); });
        return wrap("Sig (" + x + " : " + first + ") . " + second, prec, kTop);
      }
      case TermKind::App:
        return wrap(print(t.head(), kApp) + " " + print(t.arg(), kAtom), prec, kApp);
      case TermKind::Pair: {
        const std::string x = fresh(t.name(0));
        std::string first = print(t.child(0), kTop);
        std::string second = under({x}, [&] { return print(t.child(1), kTop); });
        return wrap("pair (" + x + " : " + first + " => " + second + ") " +
                        print(t.child(2), kAtom) + " " + print(t.child(3), kAtom),
                    prec, kApp);
      }
      case TermKind::SigRec: {
        const std::string z = fresh(t.name(0));
        std::string motive = under({z}, [&] { return print(t.child(0), kTop); });
        const std::string x = fresh(t.name(1));
        std::string y;
        std::string branch = under({x}, [&] {
          y = fresh(t.name(2));
          return under({y}, [&] { return print(t.child(1), kTop); });
        });
        return wrap("sigrec (" + z + " => " + motive + ") (" + x + " " + y + " => " + branch +
                        ") " + print(t.child(2), kAtom),
                    prec, kApp);
      }
      case TermKind::Succ:
        return wrap("succ " + print(t.child(0), kAtom), prec, kApp);
      case TermKind::NatRec: {
        const std::string z = fresh(t.name(0));
        std::string motive = under({z}, [&] { return print(t.child(0), kTop); });
        std::string base = print(t.child(1), kAtom);
        const std::string x = fresh(t.name(1));
        std::string p;
        std::string step = under({x}, [&] {
          p = fresh(t.name(2));
          return under({p}, [&] { return print(t.child(2), kTop); });
        });
        return wrap("natrec (" + z + " => " + motive + ") " + base + " (" + x + " " + p +
                        " => " + step + ") " + print(t.child(3), kAtom),
                    prec, kApp);
      }
      case TermKind::Eq:
        return wrap("Eq " + print(t.child(0), kAtom) + " " + print(t.child(1), kAtom) + " " +
                        print(t.child(2), kAtom),
                    prec, kApp);
      case TermKind::Refl:
        return wrap("refl " + print(t.child(0), kAtom) + " " + print(t.child(1), kAtom), prec,
                    kApp);
      case TermKind::EqRec: {
        const std::string x = fresh(t.name(0));
        std::string z;
        std::string motive = under({x}, [&] {
          z = fresh(t.name(1));
          return under({z}, [&] { return print(t.child(0), kTop); });
        });
        return wrap("eqrec (" + x + " " + z + " => " + motive + ") " + print(t.child(1), kAtom) +
                        " " + print(t.child(2), kAtom),
                    prec, kApp);
      }
    }
    return "?";
  }

 private:
  static std::string wrap(std::string s, Prec at, Prec needed) {
    return at > needed ? "(" + s + ")" : s;
  }

  bool in_scope(const std::string& name) const {
    return std::find(scope_.begin(), scope_.end(), name) != scope_.end();
  }

  std::string fresh(const std::string& hint) const {
    if (usable_hint(hint) && !in_scope(hint)) return hint;
    for (std::size_t k = scope_.size();; ++k) {
      std::string candidate = "x" + std::to_string(k);
      if (!in_scope(candidate)) return candidate;
    }
  }

  template <typename F>
  std::string under(std::initializer_list<std::string> names, F&& body) {
    for (const auto& n : names) scope_.push_back(n);
    std::string out = body();
    scope_.resize(scope_.size() - names.size());
    return out;
  }

  std::vector<std::string> scope_;
};

}  // namespace

std::vector<std::string> scope_names(const Context& ctx) {
  std::vector<std::string> out;
  out.reserve(ctx.size());
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const std::string& hint = ctx.names()[i];
    const bool taken = std::find(out.begin(), out.end(), hint) != out.end();
    if (usable_hint(hint) && !taken) {
      out.push_back(hint);
      continue;
    }
    for (std::size_t k = i;; ++k) {
      std::string candidate = "x" + std::to_string(k);
      if (std::find(out.begin(), out.end(), candidate) == out.end() &&
          std::find(ctx.names().begin(), ctx.names().end(), candidate) == ctx.names().end()) {
        out.push_back(std::move(candidate));
        break;
      }
    }
  }
  return out;
}

std::string print(const Term& t, const std::vector<std::string>& scope) {
  return Printer(scope).print(t, kTop);
}

std::string print(const Term& t, const Context& ctx) { return print(t, scope_names(ctx)); }

}  // namespace bitt::surface
