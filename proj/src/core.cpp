#include "deepind/core.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace deepind {

bool type_equal(const TypeExpr& a, const TypeExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TypeKind::Var: return a.var == b.var;
    case TypeKind::Unit: return true;
    case TypeKind::Data:
      if (a.name != b.name || a.args.size() != b.args.size()) return false;
      break;
    default:
      if (a.args.size() != b.args.size()) return false;
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!type_equal(a.args[i], b.args[i])) return false;
  return true;
}

bool occurs_data(const TypeExpr& t, const std::string& name) {
  if (t.kind == TypeKind::Data && t.name == name) return true;
  for (const auto& a : t.args)
    if (occurs_data(a, name)) return true;
  return false;
}

bool occurs_var(const TypeExpr& t, int var) {
  if (t.kind == TypeKind::Var) return t.var == var;
  for (const auto& a : t.args)
    if (occurs_var(a, var)) return true;
  return false;
}

const char* decl_class_name(DeclClass c) {
  switch (c) {
    case DeclClass::Adt: return "ADT";
    case DeclClass::NestedType: return "nested type";
    case DeclClass::TrulyNestedType: return "truly nested type";
    case DeclClass::Gadt: return "GADT";
    case DeclClass::TrulyNestedGadt: return "truly nested GADT";
  }
  return "?";
}

bool is_primitive_type(const std::string& name) {
  return name == "Bool" || name == "String";
}

namespace {

// Recognizes Equal arguments of the shape `Equal v K` where v is a return
// index variable occurring exactly once among the return indices and K does
// not mention the declaring type.
void recognize_constraints(DataDecl& d) {
  for (auto& c : d.ctors) {
    c.constraints.clear();
    std::set<int> constrained;
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      const TypeExpr& a = c.args[i];
      if (a.kind != TypeKind::Data || a.name != "Equal" || a.args.size() != 2) continue;
      if (a.args[0].kind != TypeKind::Var) continue;
      int v = a.args[0].var;
      int index_pos = -1, occurrences = 0;
      for (std::size_t k = 0; k < c.ret_indices.size(); ++k) {
        if (c.ret_indices[k].kind == TypeKind::Var && c.ret_indices[k].var == v) {
          index_pos = static_cast<int>(k);
          ++occurrences;
        } else if (occurs_var(c.ret_indices[k], v)) {
          occurrences += 2;  // var also used inside a structured index: not a plain constraint
        }
      }
      if (occurrences != 1 || index_pos < 0) continue;
      if (constrained.count(index_pos)) continue;
      if (occurs_data(a.args[1], d.name)) continue;
      constrained.insert(index_pos);
      c.constraints.push_back(EqConstraint{index_pos, i, a.args[1], false});
    }
  }
}

TypeExpr lower_type(const RawTypeExpr& t, const std::map<std::string, int>& telescope) {
  switch (t.kind) {
    case RawKind::Unit: return TypeExpr::mk_unit();
    case RawKind::Var: {
      auto it = telescope.find(t.name);
      return TypeExpr::mk_var(it == telescope.end() ? -1 : it->second);
    }
    case RawKind::Product: return TypeExpr::mk_product(lower_type(t.args[0], telescope),
                                                       lower_type(t.args[1], telescope));
    case RawKind::Sum: return TypeExpr::mk_sum(lower_type(t.args[0], telescope),
                                               lower_type(t.args[1], telescope));
    case RawKind::Arrow: return TypeExpr::mk_arrow(lower_type(t.args[0], telescope),
                                                   lower_type(t.args[1], telescope));
    case RawKind::App: {
      std::vector<TypeExpr> args;
      args.reserve(t.args.size());
      for (const auto& a : t.args) args.push_back(lower_type(a, telescope));
      return TypeExpr::mk_data(t.name, std::move(args));
    }
  }
  return TypeExpr::mk_unit();
}

ConstructorDecl lower_ctor(const RawCtor& rc) {
  ConstructorDecl c;
  c.name = rc.name;
  c.span = rc.span;
  std::map<std::string, int> telescope;
  for (const auto& b : rc.binders) {
    telescope[b.name] = static_cast<int>(c.vars.size());
    c.vars.push_back(TypeVar{b.name, b.implicit});
  }
  c.index_var_count = 0;  // refined below: leading vars that are plain return indices
  for (const auto& a : rc.domain) c.args.push_back(lower_type(a, telescope));
  for (const auto& a : rc.ret.args) c.ret_indices.push_back(lower_type(a, telescope));
  // Count how many distinct telescope vars appear as plain return indices;
  // purely informational for pre-encoded declarations.
  std::set<int> idx_vars;
  for (const auto& r : c.ret_indices)
    if (r.kind == TypeKind::Var) idx_vars.insert(r.var);
  c.index_var_count = static_cast<int>(idx_vars.size());
  return c;
}

DataDecl make_prelude_equal() {
  DataDecl d;
  d.name = "Equal";
  d.arity = 2;
  ConstructorDecl refl;
  refl.name = "refl";
  refl.vars = {TypeVar{"A", true}};
  refl.index_var_count = 1;
  refl.ret_indices = {TypeExpr::mk_var(0), TypeExpr::mk_var(0)};
  d.ctors.push_back(std::move(refl));
  d.classification = DeclClass::Gadt;
  return d;
}

DataDecl make_prelude_list() {
  DataDecl d;
  d.name = "List";
  d.arity = 1;
  ConstructorDecl nil;
  nil.name = "nil";
  nil.vars = {TypeVar{"A", true}};
  nil.index_var_count = 1;
  nil.ret_indices = {TypeExpr::mk_var(0)};
  ConstructorDecl cons;
  cons.name = "cons";
  cons.vars = {TypeVar{"A", true}};
  cons.index_var_count = 1;
  cons.args = {TypeExpr::mk_var(0), TypeExpr::mk_data("List", {TypeExpr::mk_var(0)})};
  cons.ret_indices = {TypeExpr::mk_var(0)};
  d.ctors.push_back(std::move(nil));
  d.ctors.push_back(std::move(cons));
  d.classification = DeclClass::Adt;
  return d;
}

}  // namespace

const DataDecl& Module::prelude_equal() {
  static const DataDecl d = make_prelude_equal();
  return d;
}

const DataDecl& Module::prelude_list() {
  static const DataDecl d = make_prelude_list();
  return d;
}

const DataDecl* Module::lookup(const std::string& name) const {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  if (name == "Equal") return &prelude_equal();
  if (name == "List") return &prelude_list();
  return nullptr;
}

Module lower_module(const SourceModule& m) {
  Module out;
  for (const auto& rd : m.decls) {
    DataDecl d;
    d.name = rd.name;
    d.arity = rd.arity;
    d.span = rd.span;
    for (const auto& rc : rd.ctors) d.ctors.push_back(lower_ctor(rc));
    recognize_constraints(d);
    if (d.name == "Equal") {
      if (!alpha_eq_decl(d, Module::prelude_equal()))
        throw_diag(DiagCode::DuplicateDecl,
                   "Equal is builtin and may only be re-declared verbatim", rd.span);
      d.classification = DeclClass::Gadt;
      out.decls.push_back(std::move(d));
      continue;
    }
    d.classification = classify_decl(d, out);
    out.decls.push_back(std::move(d));
  }
  return out;
}

DeclClass classify_decl(const DataDecl& d, const Module& env) {
  (void)env;
  bool gadt = false;
  bool truly_nested = false;
  for (const auto& c : d.ctors) {
    // Structured return: a non-variable index, or a variable repeated across
    // index positions, or a recognized equality constraint.
    if (!c.constraints.empty()) gadt = true;
    std::map<int, int> var_uses;
    for (const auto& r : c.ret_indices) {
      if (r.kind != TypeKind::Var) {
        gadt = true;
      } else {
        var_uses[r.var]++;
      }
    }
    for (const auto& [v, n] : var_uses)
      if (n > 1) gadt = true;
    // True nesting: the declared type applied to an argument containing itself.
    struct {
      bool found = false;
      void walk(const TypeExpr& t, const std::string& g) {
        if (t.kind == TypeKind::Data && t.name == g) {
          for (const auto& a : t.args)
            if (occurs_data(a, g)) found = true;
        }
        for (const auto& a : t.args) walk(a, g);
      }
    } nest;
    for (const auto& a : c.args) nest.walk(a, d.name);
    if (nest.found) truly_nested = true;
  }
  if (gadt && truly_nested) return DeclClass::TrulyNestedGadt;
  if (gadt) return DeclClass::Gadt;
  if (truly_nested) return DeclClass::TrulyNestedType;
  // ADT iff every occurrence of the declared type in constructor domains is at
  // exactly the declared variable instance.
  for (const auto& c : d.ctors) {
    std::vector<int> declared;
    bool all_vars = true;
    for (const auto& r : c.ret_indices) {
      if (r.kind == TypeKind::Var) declared.push_back(r.var);
      else all_vars = false;
    }
    struct {
      bool nested = false;
      void walk(const TypeExpr& t, const std::string& g, const std::vector<int>& declared,
                bool all_vars) {
        if (t.kind == TypeKind::Data && t.name == g) {
          bool at_declared = all_vars && t.args.size() == declared.size();
          if (at_declared) {
            for (std::size_t i = 0; i < t.args.size(); ++i)
              if (!(t.args[i].kind == TypeKind::Var && t.args[i].var == declared[i]))
                at_declared = false;
          }
          if (!at_declared) nested = true;
        }
        for (const auto& a : t.args) walk(a, g, declared, all_vars);
      }
    } occ;
    for (const auto& a : c.args) occ.walk(a, d.name, declared, all_vars);
    if (occ.nested) return DeclClass::NestedType;
  }
  return DeclClass::Adt;
}

ShapeF shape_of(const TypeExpr& t, const std::string& self, const Module& env,
                bool allow_self_nesting) {
  if (!occurs_data(t, self)) {
    ShapeF s;
    s.kind = ShapeF::Kind::Const;
    s.type = t;
    return s;
  }
  switch (t.kind) {
    case TypeKind::Product:
    case TypeKind::Sum: {
      ShapeF s;
      s.kind = t.kind == TypeKind::Product ? ShapeF::Kind::Product : ShapeF::Kind::Sum;
      s.type = t;
      s.children.push_back(shape_of(t.args[0], self, env, allow_self_nesting));
      s.children.push_back(shape_of(t.args[1], self, env, allow_self_nesting));
      return s;
    }
    case TypeKind::Arrow: {
      if (occurs_data(t.args[0], self))
        throw_diag(DiagCode::GrammarViolation,
                   self + " occurs in the domain of an arrow argument");
      ShapeF s;
      s.kind = ShapeF::Kind::Arrow;
      s.type = t;
      s.children.push_back(shape_of(t.args[1], self, env, allow_self_nesting));
      return s;
    }
    case TypeKind::Data: {
      if (t.name == self) {
        bool nested = false;
        for (const auto& a : t.args)
          if (occurs_data(a, self)) nested = true;
        if (nested && !allow_self_nesting)
          throw_diag(DiagCode::NestedG, self + " occurs inside an argument of " + self,
                     Span{},
                     "a recursive occurrence applied to the type itself requires the map\n"
                     "function " + self + "^Map, which equality constraints rule out");
        ShapeF s;
        s.kind = ShapeF::Kind::Rec;
        s.type = t;
        s.rec_args = t.args;
        return s;
      }
      const DataDecl* h = env.lookup(t.name);
      if (h && (h->classification == DeclClass::Gadt ||
                h->classification == DeclClass::TrulyNestedGadt))
        throw_diag(DiagCode::HIsGadt,
                   t.name + " is a GADT and cannot surround occurrences of " + self);
      if (!h && !is_primitive_type(t.name))
        throw_diag(DiagCode::UnresolvedName, "unresolved name " + t.name);
      ShapeF s;
      s.kind = ShapeF::Kind::Nested;
      s.type = t;
      s.nested_head = t.name;
      for (const auto& a : t.args) s.children.push_back(shape_of(a, self, env, allow_self_nesting));
      return s;
    }
    case TypeKind::Var:
    case TypeKind::Unit:
      break;  // unreachable: handled by the no-occurrence case
  }
  ShapeF s;
  s.kind = ShapeF::Kind::Const;
  s.type = t;
  return s;
}

RawDecl raise_decl(const DataDecl& d) {
  RawDecl rd;
  rd.name = d.name;
  rd.arity = d.arity;
  for (const auto& c : d.ctors) {
    RawCtor rc;
    rc.name = c.name;
    for (const auto& v : c.vars) rc.binders.push_back(RawBinder{v.hint, v.implicit, {}});
    struct {
      RawTypeExpr raise(const TypeExpr& t, const std::vector<TypeVar>& vars) {
        RawTypeExpr r;
        switch (t.kind) {
          case TypeKind::Var:
            r.kind = RawKind::Var;
            r.name = vars[static_cast<std::size_t>(t.var)].hint;
            return r;
          case TypeKind::Unit:
            r.kind = RawKind::Unit;
            return r;
          case TypeKind::Data:
            r.kind = RawKind::App;
            r.name = t.name;
            for (const auto& a : t.args) r.args.push_back(raise(a, vars));
            return r;
          case TypeKind::Product: r.kind = RawKind::Product; break;
          case TypeKind::Sum: r.kind = RawKind::Sum; break;
          case TypeKind::Arrow: r.kind = RawKind::Arrow; break;
        }
        r.args.push_back(raise(t.args[0], vars));
        r.args.push_back(raise(t.args[1], vars));
        return r;
      }
    } up;
    for (const auto& a : c.args) rc.domain.push_back(up.raise(a, c.vars));
    RawTypeExpr ret;
    ret.kind = RawKind::App;
    ret.name = d.name;
    for (const auto& r : c.ret_indices) ret.args.push_back(up.raise(r, c.vars));
    rc.ret = std::move(ret);
    rd.ctors.push_back(std::move(rc));
  }
  return rd;
}

bool alpha_eq_decl(const DataDecl& a, const DataDecl& b) {
  if (a.name != b.name || a.arity != b.arity || a.ctors.size() != b.ctors.size()) return false;
  for (std::size_t i = 0; i < a.ctors.size(); ++i) {
    const auto& ca = a.ctors[i];
    const auto& cb = b.ctors[i];
    if (ca.name != cb.name || ca.vars.size() != cb.vars.size() ||
        ca.args.size() != cb.args.size() || ca.ret_indices.size() != cb.ret_indices.size())
      return false;
    for (std::size_t k = 0; k < ca.args.size(); ++k)
      if (!type_equal(ca.args[k], cb.args[k])) return false;
    for (std::size_t k = 0; k < ca.ret_indices.size(); ++k)
      if (!type_equal(ca.ret_indices[k], cb.ret_indices[k])) return false;
  }
  return true;
}

}  // namespace deepind
