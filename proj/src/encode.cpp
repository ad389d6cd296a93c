#include "deepind/encode.hpp"

#include <map>
#include <set>

namespace deepind {

namespace {

TypeExpr remap_vars(const TypeExpr& t, const std::map<int, int>& m) {
  TypeExpr out = t;
  if (out.kind == TypeKind::Var) {
    out.var = m.at(out.var);
    return out;
  }
  for (auto& a : out.args) a = remap_vars(a, m);
  return out;
}

// An index position is structured if it is a non-variable expression or a
// variable occurring in more than one index position.
bool index_structured(const ConstructorDecl& c, std::size_t pos) {
  const TypeExpr& r = c.ret_indices[pos];
  if (r.kind != TypeKind::Var) return true;
  for (std::size_t k = 0; k < c.ret_indices.size(); ++k) {
    if (k == pos) continue;
    if (occurs_var(c.ret_indices[k], r.var)) return true;
  }
  return false;
}

ConstructorDecl encode_ctor(const ConstructorDecl& c) {
  bool any_structured = false;
  for (std::size_t i = 0; i < c.ret_indices.size(); ++i)
    if (index_structured(c, i)) any_structured = true;
  if (!any_structured) return c;

  ConstructorDecl out;
  out.name = c.name;
  out.span = c.span;

  // New telescope: fresh or kept index variables first, then every old
  // variable that is not a kept index.
  std::map<int, int> old_to_new;
  std::set<int> kept;
  struct NewIndex {
    bool fresh;
    int old_var;      // kept index: the old variable
    std::size_t pos;  // fresh index: which return position it replaces
  };
  std::vector<NewIndex> indices;
  for (std::size_t i = 0; i < c.ret_indices.size(); ++i) {
    if (!index_structured(c, i)) {
      indices.push_back(NewIndex{false, c.ret_indices[i].var, i});
      kept.insert(c.ret_indices[i].var);
    } else {
      indices.push_back(NewIndex{true, -1, i});
    }
  }
  std::set<std::string> used_hints;
  for (const auto& v : c.vars) used_hints.insert(v.hint);
  auto fresh_hint = [&](int n) {
    std::string base = n == 0 ? "A" : "A" + std::to_string(n);
    int tick = 0;
    std::string cand = base;
    while (used_hints.count(cand)) cand = base + std::string(static_cast<std::size_t>(++tick), '\'');
    used_hints.insert(cand);
    return cand;
  };
  int fresh_count = 0;
  for (const auto& ix : indices) {
    int nv = static_cast<int>(out.vars.size());
    if (ix.fresh) {
      out.vars.push_back(TypeVar{fresh_hint(fresh_count++), true});
    } else {
      out.vars.push_back(TypeVar{c.vars[static_cast<std::size_t>(ix.old_var)].hint, true});
      old_to_new[ix.old_var] = nv;
    }
  }
  out.index_var_count = static_cast<int>(out.vars.size());
  for (std::size_t v = 0; v < c.vars.size(); ++v) {
    if (kept.count(static_cast<int>(v))) continue;
    old_to_new[static_cast<int>(v)] = static_cast<int>(out.vars.size());
    out.vars.push_back(TypeVar{c.vars[v].hint, false});
  }

  // Synthesized constraints come first in the domain, in index order.
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (!indices[i].fresh) continue;
    TypeExpr k = remap_vars(c.ret_indices[i], old_to_new);
    TypeExpr eq = TypeExpr::mk_data("Equal", {TypeExpr::mk_var(static_cast<int>(i)), k});
    out.constraints.push_back(
        EqConstraint{static_cast<int>(i), out.args.size(), k, true});
    out.args.push_back(std::move(eq));
  }
  const std::size_t synth_count = out.constraints.size();
  for (const auto& a : c.args) out.args.push_back(remap_vars(a, old_to_new));
  // Pre-existing user constraints keep their recognition (argument positions shifted).
  for (const auto& uc : c.constraints) {
    EqConstraint nc = uc;
    nc.arg = uc.arg + synth_count;
    nc.rhs = remap_vars(uc.rhs, old_to_new);
    out.constraints.push_back(nc);
  }
  for (std::size_t i = 0; i < indices.size(); ++i)
    out.ret_indices.push_back(TypeExpr::mk_var(static_cast<int>(i)));
  return out;
}

}  // namespace

DataDecl henry_ford(const DataDecl& d) {
  if (d.classification == DeclClass::TrulyNestedGadt)
    throw_diag(DiagCode::TrulyNested,
               "refusing to encode truly nested GADT " + d.name, d.span);
  if (d.name == "Equal") return d;  // the builtin base GADT stays unencoded
  if (d.classification == DeclClass::Adt || d.classification == DeclClass::NestedType ||
      d.classification == DeclClass::TrulyNestedType)
    return d;
  DataDecl out;
  out.name = d.name;
  out.arity = d.arity;
  out.span = d.span;
  out.classification = d.classification;
  for (const auto& c : d.ctors) out.ctors.push_back(encode_ctor(c));
  return out;
}

}  // namespace deepind
