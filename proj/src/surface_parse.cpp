#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include "bitt/surface.hpp"

namespace bitt::surface {

std::string to_string(Position pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

ParseError::ParseError(Position pos, const std::string& message)
    : std::runtime_error(to_string(pos) + ": " + message), pos_(pos), message_(message) {}

UnboundName::UnboundName(Position pos, std::string name)
    : std::runtime_error(to_string(pos) + ": unbound name '" + name + "'"),
      pos_(pos),
      name_(std::move(name)) {}

namespace {

enum class Tok { Ident, Number, LParen, RParen, Colon, Arrow, FatArrow, Dot, Define, End };

struct Token {
  Tok kind;
  std::string text;
  Position pos;
};

const std::set<std::string, std::less<>> kKeywords = {
    "fun", "Sig", "pair", "sigrec", "Nat", "zero", "succ", "natrec", "Eq", "refl", "eqrec",
    "def", "Type"};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80; }

// "Type0", "Type12", ...
std::optional<std::uint32_t> sort_literal(std::string_view s) {
  if (s.size() <= 4 || s.substr(0, 4) != "Type") return std::nullopt;
  std::uint32_t v = 0;
  for (char c : s.substr(4)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 10 + static_cast<std::uint32_t>(c - '0');
  }
  return v;
}

bool is_reserved(std::string_view s) {
  return kKeywords.count(s) > 0 || sort_literal(s).has_value();
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  Position pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      const auto c = static_cast<unsigned char>(text[i]);
      if (c == '\n') {
        ++pos.line;
        pos.column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++pos.column;
      }
    }
  };
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (text.substr(i, 2) == "--") {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const Position start = pos;
    auto punct = [&](Tok kind, std::size_t len) {
      out.push_back(Token{kind, std::string(text.substr(i, len)), start});
      advance(len);
    };
    if (text.substr(i, 2) == "->") {
      punct(Tok::Arrow, 2);
    } else if (text.substr(i, 2) == "=>") {
      punct(Tok::FatArrow, 2);
    } else if (text.substr(i, 2) == ":=") {
      punct(Tok::Define, 2);
    } else if (c == '(') {
      punct(Tok::LParen, 1);
    } else if (c == ')') {
      punct(Tok::RParen, 1);
    } else if (c == ':') {
      punct(Tok::Colon, 1);
    } else if (c == '.') {
      punct(Tok::Dot, 1);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      punct(Tok::Number, j - i);
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(static_cast<unsigned char>(text[j]))) ++j;
      punct(Tok::Ident, j - i);
    } else {
      throw ParseError(start, "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
    }
  }
  out.push_back(Token{Tok::End, "", pos});
  return out;
}

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'->'";
    case Tok::FatArrow: return "'=>'";
    case Tok::Dot: return "'.'";
    case Tok::Define: return "':='";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::shared_ptr<SurfaceTerm> node(TermKind kind, Position pos, std::vector<SurfacePtr> children,
                                  std::vector<std::string> binders = {}) {
  auto n = std::make_shared<SurfaceTerm>();
  n->kind = kind;
  n->pos = pos;
  n->children = std::move(children);
  n->binders = std::move(binders);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  SourceFile file() {
    SourceFile out;
    std::set<std::string> seen;
    while (!at(Tok::End)) {
      const Token& kw = peek();
      if (!is_keyword(kw, "def")) fail(kw, "expected 'def'");
      next();
      const Token name_tok = binder_name();
      if (!seen.insert(name_tok.text).second) {
        throw ParseError(name_tok.pos, "duplicate definition '" + name_tok.text + "'");
      }
      Definition def{name_tok.text, name_tok.pos, std::nullopt, nullptr};
      if (at(Tok::Colon)) {
        next();
        def.annotation = term();
      }
      expect(Tok::Define);
      def.body = term();
      expect(Tok::Dot);
      out.definitions.push_back(std::move(def));
    }
    return out;
  }

  SurfacePtr expression() {
    SurfacePtr t = term();
    expect(Tok::End);
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  static bool is_keyword(const Token& t, std::string_view kw) {
    return t.kind == Tok::Ident && t.text == kw;
  }

  [[noreturn]] static void fail(const Token& t, const std::string& what) {
    const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.pos, what + ", found " + found);
  }

  const Token& expect(Tok kind) {
    if (!at(kind)) fail(peek(), std::string("expected ") + describe(kind));
    return next();
  }

  Token binder_name() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || is_reserved(t.text)) fail(t, "expected a variable name");
    return next();
  }

  // "(" ident ":" term ")"
  std::pair<std::string, SurfacePtr> typed_binder() {
    expect(Tok::LParen);
    std::string name = binder_name().text;
    expect(Tok::Colon);
    SurfacePtr ty = term();
    expect(Tok::RParen);
    return {std::move(name), std::move(ty)};
  }

  SurfacePtr term() {
    const Token& t = peek();
    if (is_keyword(t, "fun")) {
      next();
      auto [name, dom] = typed_binder();
      expect(Tok::FatArrow);
      return node(TermKind::Lambda, t.pos, {dom, term()}, {name});
    }
    if (is_keyword(t, "Sig")) {
      next();
      auto [name, first] = typed_binder();
      expect(Tok::Dot);
      return node(TermKind::Sigma, t.pos, {first, term()}, {name});
    }
    if (t.kind == Tok::LParen && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon) {
      auto [name, dom] = typed_binder();
      expect(Tok::Arrow);
      return node(TermKind::Pi, t.pos, {dom, term()}, {name});
    }
    SurfacePtr lhs = application();
    if (at(Tok::Arrow)) {
      next();
      return node(TermKind::Pi, t.pos, {lhs, term()}, {""});
    }
    return lhs;
  }

  bool starts_atom() const {
    const Token& t = peek();
    if (t.kind == Tok::LParen) return true;
    if (t.kind != Tok::Ident) return false;
    if (t.text == "Nat" || t.text == "zero" || t.text == "Type") return true;
    return !kKeywords.count(t.text);
  }

  SurfacePtr application() {
    SurfacePtr head = head_form();
    while (starts_atom()) {
      const Position pos = head->pos;
      head = node(TermKind::App, pos, {head, atom()});
    }
    return head;
  }

  SurfacePtr head_form() {
    const Token& t = peek();
    const Position pos = t.pos;
    if (is_keyword(t, "succ")) {
      next();
      return node(TermKind::Succ, pos, {atom()});
    }
    if (is_keyword(t, "Eq")) {
      next();
      SurfacePtr ty = atom();
      SurfacePtr lhs = atom();
      return node(TermKind::Eq, pos, {ty, lhs, atom()});
    }
    if (is_keyword(t, "refl")) {
      next();
      SurfacePtr ty = atom();
      return node(TermKind::Refl, pos, {ty, atom()});
    }
    if (is_keyword(t, "pair")) {
      next();
      expect(Tok::LParen);
      std::string x = binder_name().text;
      expect(Tok::Colon);
      SurfacePtr first = term();
      expect(Tok::FatArrow);
      SurfacePtr second = term();
      expect(Tok::RParen);
      SurfacePtr fst = atom();
      return node(TermKind::Pair, pos, {first, second, fst, atom()}, {x});
    }
    if (is_keyword(t, "sigrec")) {
      next();
      auto [z, motive] = motive1();
      expect(Tok::LParen);
      std::string x = binder_name().text;
      std::string y = binder_name().text;
      expect(Tok::FatArrow);
      SurfacePtr branch = term();
      expect(Tok::RParen);
      return node(TermKind::SigRec, pos, {motive, branch, atom()}, {z, x, y});
    }
    if (is_keyword(t, "natrec")) {
      next();
      auto [z, motive] = motive1();
      SurfacePtr base = atom();
      expect(Tok::LParen);
      std::string x = binder_name().text;
      std::string p = binder_name().text;
      expect(Tok::FatArrow);
      SurfacePtr step = term();
      expect(Tok::RParen);
      return node(TermKind::NatRec, pos, {motive, base, step, atom()}, {z, x, p});
    }
    if (is_keyword(t, "eqrec")) {
      next();
      expect(Tok::LParen);
      std::string x = binder_name().text;
      std::string z = binder_name().text;
      expect(Tok::FatArrow);
      SurfacePtr motive = term();
      expect(Tok::RParen);
      SurfacePtr branch = atom();
      return node(TermKind::EqRec, pos, {motive, branch, atom()}, {x, z});
    }
    return atom();
  }

  // "(" ident "=>" term ")"
  std::pair<std::string, SurfacePtr> motive1() {
    expect(Tok::LParen);
    std::string z = binder_name().text;
    expect(Tok::FatArrow);
    SurfacePtr motive = term();
    expect(Tok::RParen);
    return {std::move(z), std::move(motive)};
  }

  SurfacePtr atom() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      next();
      SurfacePtr inner = term();
      expect(Tok::RParen);
      return inner;
    }
    if (t.kind != Tok::Ident) fail(t, "expected a term");
    if (t.text == "Nat") {
      next();
      return node(TermKind::Nat, t.pos, {});
    }
    if (t.text == "zero") {
      next();
      return node(TermKind::Zero, t.pos, {});
    }
    if (t.text == "Type") {
      next();
      const Token& n = expect(Tok::Number);
      auto s = node(TermKind::Sort, t.pos, {});
      s->level = static_cast<std::uint32_t>(std::stoul(n.text));
      return s;
    }
    if (auto lvl = sort_literal(t.text)) {
      next();
      auto s = node(TermKind::Sort, t.pos, {});
      s->level = *lvl;
      return s;
    }
    if (kKeywords.count(t.text)) fail(t, "expected a term");
    next();
    auto v = node(TermKind::Var, t.pos, {});
    v->name = t.text;
    return v;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SourceFile parse(std::string_view text) { return Parser(text).file(); }

SurfacePtr parse_expression(std::string_view text) { return Parser(text).expression(); }

Term resolve(const SurfaceTerm& term, const std::vector<std::string>& scope) {
  if (term.kind == TermKind::Var) {
    for (std::size_t k = scope.size(); k-- > 0;) {
      if (scope[k] == term.name) return Term::var(static_cast<std::uint32_t>(scope.size() - 1 - k));
    }
    throw UnboundName(term.pos, term.name);
  }
  if (term.kind == TermKind::Sort) return Term::sort(term.level);

  // Binder names consumed by each child, in layout order.
  std::vector<Term> kids;
  kids.reserve(term.children.size());
  std::size_t next_binder = 0;
  for (std::size_t i = 0; i < term.children.size(); ++i) {
    const unsigned b = Term::binders_of(term.kind, i);
    std::vector<std::string> inner = scope;
    for (unsigned k = 0; k < b; ++k) inner.push_back(term.binders.at(next_binder + k));
    next_binder += b;
    kids.push_back(resolve(*term.children[i], inner));
  }
  auto names = term.binders;
  switch (term.kind) {
    case TermKind::Pi: return Term::pi(kids[0], kids[1], names[0]);
    case TermKind::Lambda: return Term::lambda(kids[0], kids[1], names[0]);
    case TermKind::App: return Term::app(kids[0], kids[1]);
    case TermKind::Sigma: return Term::sigma(kids[0], kids[1], names[0]);
    case TermKind::Pair: return Term::pair(kids[0], kids[1], kids[2], kids[3], names[0]);
    case TermKind::SigRec: return Term::sig_rec(kids[0], kids[1], kids[2], std::move(names));
    case TermKind::Nat: return Term::nat();
    case TermKind::Zero: return Term::zero();
    case TermKind::Succ: return Term::succ(kids[0]);
    case TermKind::NatRec:
      return Term::nat_rec(kids[0], kids[1], kids[2], kids[3], std::move(names));
    case TermKind::Eq: return Term::eq(kids[0], kids[1], kids[2]);
    case TermKind::Refl: return Term::refl(kids[0], kids[1]);
    case TermKind::EqRec: return Term::eq_rec(kids[0], kids[1], kids[2], std::move(names));
    default: break;
  }
  throw std::logic_error("resolve: unexpected surface node");
}

Term parse_term(std::string_view text, const std::vector<std::string>& scope) {
  return resolve(*parse_expression(text), scope);
}

}  // namespace bitt::surface
