#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deepind/diag.hpp"
#include "deepind/syntax.hpp"

namespace deepind {

// Resolved type expressions. Variables are indices into the owning
// constructor's telescope (index variables first, then binders).
enum class TypeKind { Var, Data, Product, Sum, Arrow, Unit };

struct TypeExpr {
  TypeKind kind = TypeKind::Unit;
  int var = -1;                 // Var: telescope index
  std::string name;             // Data: type constructor name
  std::vector<TypeExpr> args;   // Data arguments, or {lhs, rhs} for Product/Sum/Arrow

  static TypeExpr mk_var(int v) { return TypeExpr{TypeKind::Var, v, "", {}}; }
  static TypeExpr mk_data(std::string n, std::vector<TypeExpr> as = {}) {
    return TypeExpr{TypeKind::Data, -1, std::move(n), std::move(as)};
  }
  static TypeExpr mk_product(TypeExpr l, TypeExpr r) {
    return TypeExpr{TypeKind::Product, -1, "", {std::move(l), std::move(r)}};
  }
  static TypeExpr mk_sum(TypeExpr l, TypeExpr r) {
    return TypeExpr{TypeKind::Sum, -1, "", {std::move(l), std::move(r)}};
  }
  static TypeExpr mk_arrow(TypeExpr l, TypeExpr r) {
    return TypeExpr{TypeKind::Arrow, -1, "", {std::move(l), std::move(r)}};
  }
  static TypeExpr mk_unit() { return TypeExpr{}; }
};

bool type_equal(const TypeExpr& a, const TypeExpr& b);
bool occurs_data(const TypeExpr& t, const std::string& name);
bool occurs_var(const TypeExpr& t, int var);

struct TypeVar {
  std::string hint;       // surface name, display only
  bool implicit = false;  // implicit binders print as {A : Set}
};

struct EqConstraint {
  int index_pos = -1;   // which return index this constrains
  std::size_t arg = 0;  // position of the Equal argument in ConstructorDecl::args
  TypeExpr rhs;         // the polynomial K, free over the telescope
  bool synthesized = false;  // introduced by henry_ford rather than written by the user
};

struct ConstructorDecl {
  std::string name;
  std::vector<TypeVar> vars;        // telescope: return-index vars, then binders
  int index_var_count = 0;          // how many leading vars are return-index vars
  std::vector<TypeExpr> args;       // constructor arguments, in constructor order
  std::vector<EqConstraint> constraints;  // recognized Equal arguments, in order
  std::vector<TypeExpr> ret_indices;      // length = declaration arity
  Span span;

  bool is_constraint_arg(std::size_t i) const {
    for (const auto& c : constraints)
      if (c.arg == i) return true;
    return false;
  }
  const EqConstraint* constraint_for_arg(std::size_t i) const {
    for (const auto& c : constraints)
      if (c.arg == i) return &c;
    return nullptr;
  }
};

enum class DeclClass { Adt, NestedType, TrulyNestedType, Gadt, TrulyNestedGadt };

const char* decl_class_name(DeclClass c);

struct DataDecl {
  std::string name;
  int arity = 0;
  std::vector<ConstructorDecl> ctors;
  DeclClass classification = DeclClass::Adt;
  Span span;
};

// A lowered module: user declarations (file order) plus the builtin prelude
// (Equal and List) reachable through lookup().
struct Module {
  std::vector<DataDecl> decls;

  const DataDecl* lookup(const std::string& name) const;
  static const DataDecl& prelude_equal();
  static const DataDecl& prelude_list();
};

// True for type constants interpreted as opaque atom carriers.
bool is_primitive_type(const std::string& name);

// Lowers a parsed module to the IR and classifies every declaration.
// A re-declaration of Equal is accepted only if it matches the builtin exactly.
Module lower_module(const SourceModule& m);

// Grammar classification of a constructor domain argument per the six
// productions. `self` is the declaring type's name. Preference order:
// a G-free subterm is Const; a G-application is Rec; a foreign head over
// G-containing arguments is Nested; structural nodes otherwise.
struct ShapeF {
  enum class Kind { Product, Sum, Arrow, Rec, Const, Nested };
  Kind kind = Kind::Const;
  std::vector<ShapeF> children;   // Product/Sum: 2; Arrow: 1 (codomain); Nested: one per head argument
  TypeExpr type;                  // Const: the expression; Arrow: the G-free domain
  std::vector<TypeExpr> rec_args; // Rec: instance arguments (may contain G for truly nested types)
  std::string nested_head;        // Nested: H
};

// allow_self_nesting permits G under G (the Bush pattern); callers deriving
// for proper GADTs leave it false and get the NESTED_G diagnostic.
ShapeF shape_of(const TypeExpr& domain_arg, const std::string& self, const Module& env,
                bool allow_self_nesting = false);

DeclClass classify_decl(const DataDecl& d, const Module& env);

// Converts one lowered declaration back to surface syntax (used by encode output).
RawDecl raise_decl(const DataDecl& d);

// Alpha-equivalence of declarations (telescopes compare positionally).
bool alpha_eq_decl(const DataDecl& a, const DataDecl& b);

}  // namespace deepind
