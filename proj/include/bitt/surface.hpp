#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bitt/syntax.hpp"

namespace bitt::surface {

struct Position {
  unsigned line = 1;
  unsigned column = 1;
};

std::string to_string(Position pos);

class ParseError : public std::runtime_error {
 public:
  ParseError(Position pos, const std::string& message);
  Position position() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  Position pos_;
  std::string message_;
};

/// An identifier with no binder or earlier definition in scope.
class UnboundName : public std::runtime_error {
 public:
  UnboundName(Position pos, std::string name);
  Position position() const { return pos_; }
  const std::string& name() const { return name_; }

 private:
  Position pos_;
  std::string name_;
};

struct SurfaceTerm;
using SurfacePtr = std::shared_ptr<const SurfaceTerm>;

/// Named-variable mirror of Term. Binders are laid out as in Term::names().
struct SurfaceTerm {
  TermKind kind;
  Position pos;
  std::string name;          // Var
  std::uint32_t level = 0;   // Sort
  std::vector<std::string> binders;
  std::vector<SurfacePtr> children;
};

struct Definition {
  std::string name;
  Position pos;
  std::optional<SurfacePtr> annotation;
  SurfacePtr body;
};

struct SourceFile {
  std::vector<Definition> definitions;
};

/// Parse a `.bitt` file. Checks definition names for uniqueness; scope is
/// resolved later, definition by definition.
SourceFile parse(std::string_view text);

SurfacePtr parse_expression(std::string_view text);

/// Resolve names to de Bruijn indices. `scope` lists names outermost first.
Term resolve(const SurfaceTerm& term, const std::vector<std::string>& scope = {});

/// parse_expression + resolve.
Term parse_term(std::string_view text, const std::vector<std::string>& scope = {});

/// Unique printable names for a context (hints where usable, else x0, x1...).
std::vector<std::string> scope_names(const Context& ctx);

/// Concrete syntax that parses back to an α-equal term. Bound variables
/// keep their hint when it is free to use; others get fresh names x0, x1, ...
std::string print(const Term& t, const std::vector<std::string>& scope = {});
std::string print(const Term& t, const Context& ctx);

}  // namespace bitt::surface
