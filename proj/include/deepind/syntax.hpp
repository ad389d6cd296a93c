#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deepind/diag.hpp"

namespace deepind {

// Surface (raw) type expressions, as parsed. Names are unresolved strings;
// resolution and arity checking happen before parse_module returns.
enum class RawKind { Var, App, Product, Sum, Arrow, Unit };

struct RawTypeExpr {
  RawKind kind = RawKind::Unit;
  std::string name;                // Var name or App head
  std::vector<RawTypeExpr> args;   // App arguments, or {lhs, rhs} for Product/Sum/Arrow
  Span span;
};

struct RawBinder {
  std::string name;
  bool implicit = false;  // {A : Set} vs (A : Set)
  Span span;
};

struct RawCtor {
  std::string name;
  std::vector<RawBinder> binders;
  std::vector<RawTypeExpr> domain;  // top-level arrow-separated arguments
  RawTypeExpr ret;                  // final codomain atom chain
  Span span;
};

struct RawDecl {
  std::string name;
  int arity = 0;  // number of Set parameters
  std::vector<RawCtor> ctors;
  Span span;
};

struct SourceModule {
  std::vector<RawDecl> decls;
};

struct ParseResult {
  std::optional<SourceModule> module;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return module.has_value() && diagnostics.empty(); }
};

// Parses a .gdt module: resolves every type constructor reference against prior
// declarations and builtins, checks application arities, rejects duplicates.
ParseResult parse_module(std::string_view text);

// Deterministic printer. Binder names are normalized A, B, C, ... per constructor;
// parse(print(parse(s))) is alpha-equivalent to parse(s).
std::string print_module(const SourceModule& m);
std::string print_decl(const RawDecl& d);
std::string print_raw_type(const RawTypeExpr& t);

}  // namespace deepind
