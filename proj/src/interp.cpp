#include "deepind/interp.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace deepind {
namespace interp {

namespace {

std::string type_key(const TypeExpr& t) {
  switch (t.kind) {
    case TypeKind::Var: return "#" + std::to_string(t.var);
    case TypeKind::Unit: return "Unit";
    case TypeKind::Product: return "(" + type_key(t.args[0]) + "*" + type_key(t.args[1]) + ")";
    case TypeKind::Sum: return "(" + type_key(t.args[0]) + "+" + type_key(t.args[1]) + ")";
    case TypeKind::Arrow: return "(" + type_key(t.args[0]) + "->" + type_key(t.args[1]) + ")";
    case TypeKind::Data: {
      std::string s = t.name;
      for (const auto& a : t.args) s += " " + type_key(a);
      return t.args.empty() ? s : "(" + s + ")";
    }
  }
  return "?";
}

TypeExpr subst_vars(const TypeExpr& t, const std::vector<TypeExpr>& env) {
  if (t.kind == TypeKind::Var) return env[static_cast<std::size_t>(t.var)];
  TypeExpr out = t;
  for (auto& a : out.args) a = subst_vars(a, env);
  return out;
}

bool unify(const TypeExpr& pattern, const TypeExpr& closed,
           std::vector<std::optional<TypeExpr>>& sigma) {
  if (pattern.kind == TypeKind::Var) {
    auto& slot = sigma[static_cast<std::size_t>(pattern.var)];
    if (slot) return type_equal(*slot, closed);
    slot = closed;
    return true;
  }
  if (pattern.kind != closed.kind) return false;
  if (pattern.kind == TypeKind::Data && pattern.name != closed.name) return false;
  if (pattern.args.size() != closed.args.size()) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!unify(pattern.args[i], closed.args[i], sigma)) return false;
  return true;
}

}  // namespace

bool value_equal(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Atom: return a.carrier == b.carrier && a.atom == b.atom;
    case Value::Kind::Unit: return true;
    case Value::Kind::Refl: return true;
    case Value::Kind::Ctor:
      if (a.data != b.data || a.ctor != b.ctor) return false;
      break;
    default: break;
  }
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!value_equal(*a.kids[i], *b.kids[i])) return false;
  if (a.kind == Value::Kind::Ctor) {
    if (a.var_insts.size() != b.var_insts.size()) return false;
    for (std::size_t i = 0; i < a.var_insts.size(); ++i)
      if (!type_equal(a.var_insts[i], b.var_insts[i])) return false;
  }
  return true;
}

std::string show_value(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Atom: return v.carrier + std::to_string(v.atom);
    case Value::Kind::Unit: return "unit";
    case Value::Kind::Refl: return "refl";
    case Value::Kind::Pair: return "(" + show_value(*v.kids[0]) + ", " + show_value(*v.kids[1]) + ")";
    case Value::Kind::Inl: return "(inl " + show_value(*v.kids[0]) + ")";
    case Value::Kind::Inr: return "(inr " + show_value(*v.kids[0]) + ")";
    case Value::Kind::Fun: {
      std::string s = "<fun";
      for (const auto& k : v.kids) s += " " + show_value(*k);
      return s + ">";
    }
    case Value::Kind::Ctor: {
      std::string s = "(" + v.ctor;
      for (const auto& k : v.kids) s += " " + show_value(*k);
      return s + ")";
    }
  }
  return "?";
}

bool Table::all_true() const {
  for (char b : bits)
    if (!b) return false;
  return true;
}

Interp::Interp(const Module& mod, const LiftRegistry& reg, FinModel model)
    : mod_(&mod), reg_(&reg), model_(std::move(model)) {
  for (const auto& [name, size] : model_.carriers)
    binder_universe_.push_back(TypeExpr::mk_data(name));
  binder_universe_.push_back(TypeExpr::mk_data("Bool"));
}

std::vector<ValuePtr> Interp::enumerate_at_depth(const TypeExpr& t, int depth) {
  std::string key = type_key(t) + "@" + std::to_string(depth);
  auto it = enum_cache_.find(key);
  if (it != enum_cache_.end()) return it->second;
  std::vector<ValuePtr> out;
  switch (t.kind) {
    case TypeKind::Var:
      throw std::logic_error("enumerate: open type");
    case TypeKind::Unit: {
      auto v = std::make_shared<Value>();
      v->kind = Value::Kind::Unit;
      out.push_back(v);
      break;
    }
    case TypeKind::Product: {
      auto ls = enumerate_at_depth(t.args[0], depth);
      auto rs = enumerate_at_depth(t.args[1], depth);
      for (const auto& l : ls)
        for (const auto& r : rs) {
          auto v = std::make_shared<Value>();
          v->kind = Value::Kind::Pair;
          v->kids = {l, r};
          out.push_back(v);
        }
      break;
    }
    case TypeKind::Sum: {
      for (const auto& l : enumerate_at_depth(t.args[0], depth)) {
        auto v = std::make_shared<Value>();
        v->kind = Value::Kind::Inl;
        v->kids = {l};
        out.push_back(v);
      }
      for (const auto& r : enumerate_at_depth(t.args[1], depth)) {
        auto v = std::make_shared<Value>();
        v->kind = Value::Kind::Inr;
        v->kids = {r};
        out.push_back(v);
      }
      break;
    }
    case TypeKind::Arrow: {
      auto dom = enumerate_at_depth(t.args[0], depth);
      auto cod = enumerate_at_depth(t.args[1], depth);
      double total = 1;
      for (std::size_t i = 0; i < dom.size(); ++i) {
        total *= static_cast<double>(cod.size());
        if (total > model_.function_cap)
          throw_diag(DiagCode::CapExceeded,
                     "function space " + type_key(t) + " exceeds the enumeration cap");
      }
      if (dom.empty()) {
        auto v = std::make_shared<Value>();
        v->kind = Value::Kind::Fun;
        v->var_insts = {t.args[0], t.args[1]};
        out.push_back(v);
        break;
      }
      if (cod.empty()) break;
      std::vector<std::size_t> idx(dom.size(), 0);
      while (true) {
        auto v = std::make_shared<Value>();
        v->kind = Value::Kind::Fun;
        v->var_insts = {t.args[0], t.args[1]};
        for (std::size_t i = 0; i < dom.size(); ++i) v->kids.push_back(cod[idx[i]]);
        out.push_back(v);
        std::size_t k = 0;
        while (k < idx.size()) {
          if (++idx[k] < cod.size()) break;
          idx[k] = 0;
          ++k;
        }
        if (k == idx.size()) break;
      }
      break;
    }
    case TypeKind::Data: {
      auto cit = model_.carriers.find(t.name);
      if (cit != model_.carriers.end()) {
        for (int i = 0; i < cit->second; ++i) {
          auto v = std::make_shared<Value>();
          v->kind = Value::Kind::Atom;
          v->carrier = t.name;
          v->atom = i;
          out.push_back(v);
        }
        break;
      }
      if (t.name == "Bool" || t.name == "String") {
        int n = t.name == "Bool" ? 2 : model_.string_atoms;
        for (int i = 0; i < n; ++i) {
          auto v = std::make_shared<Value>();
          v->kind = Value::Kind::Atom;
          v->carrier = t.name;
          v->atom = i;
          out.push_back(v);
        }
        break;
      }
      if (t.name == "Equal") {
        if (type_equal(t.args[0], t.args[1])) {
          auto v = std::make_shared<Value>();
          v->kind = Value::Kind::Refl;
          out.push_back(v);
        }
        break;
      }
      const DataDecl* d = mod_->lookup(t.name);
      if (!d) throw_diag(DiagCode::UnresolvedName, "unknown type " + t.name);
      if (depth <= 0) break;
      out = enum_ctor_values(*d, t.args, depth);
      break;
    }
  }
  enum_cache_.emplace(std::move(key), out);
  return out;
}

const std::vector<ValuePtr>& Interp::enumerate(const TypeExpr& t) {
  std::string key = type_key(t) + "@" + std::to_string(model_.depth);
  auto it = enum_cache_.find(key);
  if (it == enum_cache_.end()) {
    enumerate_at_depth(t, model_.depth);
    it = enum_cache_.find(key);
  }
  return it->second;
}

std::vector<ValuePtr> Interp::enum_ctor_values(const DataDecl& d,
                                               const std::vector<TypeExpr>& inst, int depth) {
  std::vector<ValuePtr> out;
  for (const auto& c : d.ctors) {
    std::vector<std::optional<TypeExpr>> sigma(c.vars.size());
    bool ok = true;
    for (std::size_t k = 0; k < c.ret_indices.size() && ok; ++k)
      ok = unify(c.ret_indices[k], inst[k], sigma);
    if (!ok) continue;
    for (const auto& q : c.constraints) {
      if (!ok) break;
      const auto& lhs = sigma[static_cast<std::size_t>(
          c.ret_indices[static_cast<std::size_t>(q.index_pos)].var)];
      ok = lhs && unify(q.rhs, *lhs, sigma);
    }
    if (!ok) continue;
    // Remaining unbound binders range over the finite universe.
    std::vector<std::size_t> free;
    for (std::size_t v = 0; v < sigma.size(); ++v)
      if (!sigma[v]) free.push_back(v);
    std::vector<std::size_t> pick(free.size(), 0);
    while (true) {
      std::vector<std::optional<TypeExpr>> sig = sigma;
      for (std::size_t i = 0; i < free.size(); ++i) sig[free[i]] = binder_universe_[pick[i]];
      std::vector<TypeExpr> env;
      env.reserve(sig.size());
      for (auto& s : sig) env.push_back(*s);
      // Enumerate each argument at the instantiated type.
      std::vector<std::vector<ValuePtr>> arg_values;
      bool feasible = true;
      for (std::size_t i = 0; i < c.args.size() && feasible; ++i) {
        TypeExpr at = subst_vars(c.args[i], env);
        auto vs = enumerate_at_depth(at, depth - 1);
        if (vs.empty()) feasible = false;
        arg_values.push_back(std::move(vs));
      }
      if (feasible) {
        std::vector<std::size_t> ai(c.args.size(), 0);
        while (true) {
          auto v = std::make_shared<Value>();
          v->kind = Value::Kind::Ctor;
          v->data = d.name;
          v->ctor = c.name;
          v->var_insts = env;
          for (std::size_t i = 0; i < c.args.size(); ++i) v->kids.push_back(arg_values[i][ai[i]]);
          bool dup = false;
          for (const auto& prev : out)
            if (value_equal(*prev, *v)) dup = true;
          if (!dup) out.push_back(v);
          std::size_t k = 0;
          while (k < ai.size()) {
            if (++ai[k] < arg_values[k].size()) break;
            ai[k] = 0;
            ++k;
          }
          if (k == ai.size()) break;
          if (c.args.empty()) break;
        }
      }
      std::size_t k = 0;
      while (k < pick.size()) {
        if (++pick[k] < binder_universe_.size()) break;
        pick[k] = 0;
        ++k;
      }
      if (k == pick.size() || free.empty()) break;
    }
  }
  return out;
}

// ---- evaluation of derived lifting terms ----

namespace {

TypeExpr term_to_type(const TypeTerm& t, const Interp::Frame& env);

}  // namespace

struct Interp::Frame {
  struct Entry {
    enum class Kind { Type, Pred, Value } kind;
    TypeExpr type;
    PredFn pred;
    ValuePtr value;
  };
  std::vector<Entry> entries;
};

namespace {

TypeExpr term_to_type(const TypeTerm& t, const Interp::Frame& env) {
  switch (t.kind) {
    case TermKind::Var: {
      const auto& e = env.entries[env.entries.size() - 1 - static_cast<std::size_t>(t.var)];
      return e.type;
    }
    case TermKind::DataRef:
      return TypeExpr::mk_data(t.name);
    case TermKind::EqualT:
      return TypeExpr::mk_data("Equal");
    case TermKind::Prod:
      return TypeExpr::mk_product(term_to_type(t.kids[0], env), term_to_type(t.kids[1], env));
    case TermKind::SumT:
      return TypeExpr::mk_sum(term_to_type(t.kids[0], env), term_to_type(t.kids[1], env));
    case TermKind::ArrT:
      return TypeExpr::mk_arrow(term_to_type(t.kids[0], env), term_to_type(t.kids[1], env));
    case TermKind::App: {
      TypeExpr head = term_to_type(t.kids[0], env);
      for (std::size_t i = 1; i < t.kids.size(); ++i)
        head.args.push_back(term_to_type(t.kids[i], env));
      return head;
    }
    default:
      throw std::logic_error("term_to_type: not a type term");
  }
}

int index_of_value(const std::vector<ValuePtr>& vs, const Value& v) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (value_equal(*vs[i], v)) return static_cast<int>(i);
  return -1;
}

}  // namespace

Table Interp::full_table(const TypeExpr& carrier) {
  Table t;
  t.carrier = carrier;
  t.bits.assign(enumerate(carrier).size(), 1);
  return t;
}

std::vector<Table> Interp::all_tables(const TypeExpr& carrier) {
  const auto& vs = enumerate(carrier);
  if (vs.size() > 16)
    throw_diag(DiagCode::CapExceeded, "predicate table space over " + type_key(carrier) +
                                          " exceeds the enumeration cap");
  std::vector<Table> out;
  const std::size_t n = vs.size();
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    Table t;
    t.carrier = carrier;
    t.bits.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.bits[i] = (mask >> i) & 1u;
    out.push_back(std::move(t));
  }
  return out;
}

PredFn Interp::table_fn(const Table& t) {
  PredFn p;
  p.carrier = t.carrier;
  auto values = enumerate(t.carrier);
  auto bits = t.bits;
  p.fn = [values, bits](const ValuePtr& v) {
    int i = index_of_value(values, *v);
    if (i < 0) throw std::logic_error("predicate applied outside its carrier");
    return bits[static_cast<std::size_t>(i)] != 0;
  };
  return p;
}

bool Interp::preds_equal(const PredFn& a, const PredFn& b) {
  if (!type_equal(a.carrier, b.carrier)) return false;
  for (const auto& v : enumerate(a.carrier))
    if (a.fn(v) != b.fn(v)) return false;
  return true;
}

bool Interp::eval_lifting(const TypeExpr& instance, const std::vector<Table>& preds,
                          const ValuePtr& v) {
  std::vector<PredFn> fns;
  fns.reserve(preds.size());
  for (const auto& t : preds) fns.push_back(table_fn(t));
  return eval_lifting_fn(instance, fns, v);
}

bool Interp::eval_lifting_fn(const TypeExpr& instance, const std::vector<PredFn>& preds,
                             const ValuePtr& v) {
  if (instance.kind != TypeKind::Data)
    throw std::logic_error("eval_lifting: instance must be a data type");
  if (instance.name == "Equal") {
    if (!type_equal(instance.args[0], instance.args[1])) return false;
    return preds_equal(preds[0], preds[1]);
  }
  const DataDecl* d = mod_->lookup(instance.name);
  const LiftingDef* l = reg_->find(instance.name);
  if (!d || !l) throw_diag(DiagCode::UnresolvedName, "no lifting for " + instance.name);
  if (v->kind != Value::Kind::Ctor) throw std::logic_error("eval_lifting: not a data value");
  const ConstructorDecl* c = nullptr;
  const LiftClause* cl = nullptr;
  for (std::size_t i = 0; i < d->ctors.size(); ++i)
    if (d->ctors[i].name == v->ctor) {
      c = &d->ctors[i];
      cl = &l->clauses[i];
    }
  if (!c || !cl) throw std::logic_error("eval_lifting: unknown constructor " + v->ctor);

  // Clause telescope: distinct ret vars, index preds, binders, args.
  Frame env;
  {
    std::vector<bool> seen(c->vars.size(), false);
    for (const auto& r : c->ret_indices) {
      if (r.kind == TypeKind::Var && !seen[static_cast<std::size_t>(r.var)]) {
        seen[static_cast<std::size_t>(r.var)] = true;
        Frame::Entry e;
        e.kind = Frame::Entry::Kind::Type;
        e.type = v->var_insts[static_cast<std::size_t>(r.var)];
        env.entries.push_back(std::move(e));
      }
    }
    for (std::size_t k = 0; k < c->ret_indices.size(); ++k) {
      Frame::Entry e;
      e.kind = Frame::Entry::Kind::Pred;
      e.pred = preds[k];
      env.entries.push_back(std::move(e));
    }
    for (std::size_t vv = 0; vv < c->vars.size(); ++vv) {
      bool is_index = false;
      for (const auto& r : c->ret_indices)
        if (r.kind == TypeKind::Var && static_cast<std::size_t>(r.var) == vv) is_index = true;
      if (is_index) continue;
      Frame::Entry e;
      e.kind = Frame::Entry::Kind::Type;
      e.type = v->var_insts[vv];
      env.entries.push_back(std::move(e));
    }
    for (const auto& kid : v->kids) {
      Frame::Entry e;
      e.kind = Frame::Entry::Kind::Value;
      e.value = kid;
      env.entries.push_back(std::move(e));
    }
  }
  return eval_prop(cl->body, env);
}

PredFn Interp::eval_pred(const TypeTerm& t, Frame& env) {
  switch (t.kind) {
    case TermKind::Var: {
      const auto& e = env.entries[env.entries.size() - 1 - static_cast<std::size_t>(t.var)];
      if (e.kind != Frame::Entry::Kind::Pred)
        throw std::logic_error("eval_pred: not a predicate variable");
      return e.pred;
    }
    case TermKind::KTop: {
      PredFn p;
      p.carrier = term_to_type(t.kids[0], env);
      p.fn = [](const ValuePtr&) { return true; };
      return p;
    }
    case TermKind::App: {
      const TypeTerm& head = t.kids[0];
      if (head.kind != TermKind::LiftRef)
        throw std::logic_error("eval_pred: unexpected predicate application");
      const std::string name = head.name;
      int arity;
      if (name == "Equal" || name == "Pair" || name == "Sum" || name == "Arr") arity = 2;
      else if (name == "Unit") arity = 0;
      else if (name == "KTop") arity = 1;
      else {
        const LiftingDef* l = reg_->find(name);
        if (!l) throw_diag(DiagCode::UnresolvedName, "no lifting for " + name);
        arity = l->arity;
      }
      std::vector<TypeExpr> types;
      std::vector<PredFn> sub;
      for (int i = 0; i < arity; ++i)
        types.push_back(term_to_type(t.kids[1 + static_cast<std::size_t>(i)], env));
      for (int i = 0; i < arity; ++i)
        sub.push_back(eval_pred(t.kids[1 + static_cast<std::size_t>(arity + i)], env));
      PredFn p;
      if (name == "Pair") p.carrier = TypeExpr::mk_product(types[0], types[1]);
      else if (name == "Sum") p.carrier = TypeExpr::mk_sum(types[0], types[1]);
      else if (name == "Arr") p.carrier = TypeExpr::mk_arrow(types[0], types[1]);
      else if (name == "Equal") p.carrier = TypeExpr::mk_data("Equal", {types[0], types[1]});
      else if (name == "KTop") p.carrier = types[0];
      else if (name == "Unit") p.carrier = TypeExpr::mk_unit();
      else p.carrier = TypeExpr::mk_data(name, types);
      Interp* self = this;
      p.fn = [self, name, types, sub](const ValuePtr& v) {
        return self->eval_builtin_or_data(name, types, sub, v);
      };
      return p;
    }
    default:
      throw std::logic_error("eval_pred: not a predicate term");
  }
}

bool Interp::eval_builtin_or_data(const std::string& name, const std::vector<TypeExpr>& types,
                                  const std::vector<PredFn>& preds, const ValuePtr& v) {
  if (name == "Equal") {
    if (!type_equal(types[0], types[1])) return false;
    return preds_equal(preds[0], preds[1]);
  }
  if (name == "Pair") return preds[0].fn(v->kids[0]) && preds[1].fn(v->kids[1]);
  if (name == "Sum") {
    if (v->kind == Value::Kind::Inl) return preds[0].fn(v->kids[0]);
    return preds[1].fn(v->kids[0]);
  }
  if (name == "Arr") {
    const auto& dom = enumerate(types[0]);
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (!preds[0].fn(dom[i])) continue;
      if (!preds[1].fn(v->kids[i])) return false;
    }
    return true;
  }
  if (name == "Unit" || name == "KTop") return true;
  return eval_lifting_fn(TypeExpr::mk_data(name, types), preds, v);
}

bool Interp::eval_prop(const TypeTerm& t, Frame& env) {
  switch (t.kind) {
    case TermKind::Top:
      return true;
    case TermKind::Prod:
      return eval_prop(t.kids[0], env) && eval_prop(t.kids[1], env);
    case TermKind::ArrT:
      return !eval_prop(t.kids[0], env) || eval_prop(t.kids[1], env);
    case TermKind::Pi: {
      TypeExpr dom = term_to_type(t.kids[0], env);
      for (const auto& v : enumerate(dom)) {
        Frame::Entry e;
        e.kind = Frame::Entry::Kind::Value;
        e.value = v;
        env.entries.push_back(std::move(e));
        bool ok = eval_prop(t.kids[1], env);
        env.entries.pop_back();
        if (!ok) return false;
      }
      return true;
    }
    case TermKind::Sig: {
      if (!(t.kids[0].kind == TermKind::ArrT && t.kids[0].kids[1].kind == TermKind::SetSort))
        throw std::logic_error("eval_prop: existential over a non-predicate domain");
      TypeExpr carrier = term_to_type(t.kids[0].kids[0], env);
      for (auto& tb : all_tables(carrier)) {
        Frame::Entry e;
        e.kind = Frame::Entry::Kind::Pred;
        e.pred = table_fn(tb);
        env.entries.push_back(std::move(e));
        bool ok = eval_prop(t.kids[1], env);
        env.entries.pop_back();
        if (ok) return true;
      }
      return false;
    }
    case TermKind::App: {
      const TypeTerm& head = t.kids[0];
      if (head.kind == TermKind::Var) {
        const auto& e = env.entries[env.entries.size() - 1 - static_cast<std::size_t>(head.var)];
        if (e.kind == Frame::Entry::Kind::Pred) {
          ValuePtr v = eval_value(t.kids[1], env);
          return e.pred.fn(v);
        }
        throw std::logic_error("eval_prop: applied non-predicate variable");
      }
      if (head.kind == TermKind::KTop) return true;
      if (head.kind == TermKind::EqualT)
        return eval_prop(t.kids[1], env) == eval_prop(t.kids[2], env);
      if (head.kind == TermKind::LiftRef) {
        // Fully applied lifting: all but the last argument form the predicate.
        TypeTerm partial = t;
        partial.kids.pop_back();
        PredFn p = eval_pred(partial.kids.size() == 1 ? partial.kids[0] : partial, env);
        ValuePtr v = eval_value(t.kids.back(), env);
        return p.fn(v);
      }
      throw std::logic_error("eval_prop: unexpected application head");
    }
    default:
      throw std::logic_error("eval_prop: unhandled term");
  }
}

ValuePtr Interp::eval_value(const TypeTerm& t, Frame& env) {
  switch (t.kind) {
    case TermKind::Var: {
      const auto& e = env.entries[env.entries.size() - 1 - static_cast<std::size_t>(t.var)];
      if (e.kind != Frame::Entry::Kind::Value)
        throw std::logic_error("eval_value: not a value variable");
      return e.value;
    }
    case TermKind::App: {
      ValuePtr f = eval_value(t.kids[0], env);
      if (f->kind != Value::Kind::Fun) throw std::logic_error("eval_value: not a function");
      ValuePtr a = eval_value(t.kids[1], env);
      int i = index_of_value(enumerate(f->var_insts[0]), *a);
      if (i < 0) throw std::logic_error("eval_value: argument outside the function's domain");
      return f->kids[static_cast<std::size_t>(i)];
    }
    default:
      throw std::logic_error("eval_value: unhandled term");
  }
}

// ---- leaf oracle: decl-direct semantics, independent of LiftingDef ----

PredFn Interp::sem_pred(const TypeExpr& t, const std::vector<TypeExpr>& inst_of_var,
                        const std::vector<PredFn>& pred_of_var) {
  PredFn p;
  p.carrier = subst_vars(t, inst_of_var);
  Interp* self = this;
  p.fn = [self, t, inst_of_var, pred_of_var](const ValuePtr& v) {
    return self->sem_arg(t, inst_of_var, pred_of_var, v);
  };
  return p;
}

bool Interp::sem_arg(const TypeExpr& t, const std::vector<TypeExpr>& inst_of_var,
                     const std::vector<PredFn>& pred_of_var, const ValuePtr& v) {
  switch (t.kind) {
    case TypeKind::Var:
      return pred_of_var[static_cast<std::size_t>(t.var)].fn(v);
    case TypeKind::Unit:
      return true;
    case TypeKind::Product:
      return sem_arg(t.args[0], inst_of_var, pred_of_var, v->kids[0]) &&
             sem_arg(t.args[1], inst_of_var, pred_of_var, v->kids[1]);
    case TypeKind::Sum:
      if (v->kind == Value::Kind::Inl)
        return sem_arg(t.args[0], inst_of_var, pred_of_var, v->kids[0]);
      return sem_arg(t.args[1], inst_of_var, pred_of_var, v->kids[0]);
    case TypeKind::Arrow: {
      TypeExpr dom = subst_vars(t.args[0], inst_of_var);
      const auto& ds = enumerate(dom);
      for (std::size_t i = 0; i < ds.size(); ++i) {
        if (!sem_arg(t.args[0], inst_of_var, pred_of_var, ds[i])) continue;
        if (!sem_arg(t.args[1], inst_of_var, pred_of_var, v->kids[i])) return false;
      }
      return true;
    }
    case TypeKind::Data: {
      if (t.name == "Bool" || t.name == "String" || model_.carriers.count(t.name)) return true;
      if (t.name == "Equal") {
        PredFn l = sem_pred(t.args[0], inst_of_var, pred_of_var);
        PredFn r = sem_pred(t.args[1], inst_of_var, pred_of_var);
        return preds_equal(l, r);
      }
      const DataDecl* d = mod_->lookup(t.name);
      if (!d) throw_diag(DiagCode::UnresolvedName, "unknown type " + t.name);
      std::vector<TypeExpr> inst;
      std::vector<PredFn> preds;
      for (const auto& a : t.args) {
        inst.push_back(subst_vars(a, inst_of_var));
        preds.push_back(sem_pred(a, inst_of_var, pred_of_var));
      }
      return leaf_oracle_fn(TypeExpr::mk_data(t.name, inst), preds, v);
    }
  }
  return true;
}

bool Interp::leaf_oracle(const TypeExpr& instance, const std::vector<Table>& preds,
                         const ValuePtr& v) {
  std::vector<PredFn> fns;
  fns.reserve(preds.size());
  for (const auto& t : preds) fns.push_back(table_fn(t));
  return leaf_oracle_fn(instance, fns, v);
}

bool Interp::leaf_oracle_fn(const TypeExpr& instance, const std::vector<PredFn>& preds,
                            const ValuePtr& v) {
  if (instance.name == "Equal") {
    if (!type_equal(instance.args[0], instance.args[1])) return false;
    return preds_equal(preds[0], preds[1]);
  }
  const DataDecl* d = mod_->lookup(instance.name);
  if (!d) throw_diag(DiagCode::UnresolvedName, "unknown type " + instance.name);
  const ConstructorDecl* c = nullptr;
  for (const auto& cc : d->ctors)
    if (cc.name == v->ctor) c = &cc;
  if (!c) throw std::logic_error("leaf_oracle: unknown constructor");

  // Predicates per telescope variable: return-index vars take the given
  // predicates (repeats must agree extensionally); remaining binders are
  // searched exhaustively over all tables.
  std::vector<PredFn> pred_of(c->vars.size());
  std::vector<bool> fixed(c->vars.size(), false);
  for (std::size_t k = 0; k < c->ret_indices.size(); ++k) {
    if (c->ret_indices[k].kind != TypeKind::Var) continue;
    std::size_t var = static_cast<std::size_t>(c->ret_indices[k].var);
    if (fixed[var]) {
      if (!preds_equal(pred_of[var], preds[k])) return false;
      continue;
    }
    pred_of[var] = preds[k];
    fixed[var] = true;
  }
  std::vector<std::size_t> free;
  for (std::size_t vv = 0; vv < c->vars.size(); ++vv)
    if (!fixed[vv]) free.push_back(vv);

  std::function<bool(std::size_t)> search = [&](std::size_t fi) -> bool {
    if (fi == free.size()) {
      for (const auto& q : c->constraints) {
        const PredFn& lhs = pred_of[static_cast<std::size_t>(
            c->ret_indices[static_cast<std::size_t>(q.index_pos)].var)];
        PredFn rhs = sem_pred(q.rhs, v->var_insts, pred_of);
        if (!preds_equal(lhs, rhs)) return false;
      }
      for (std::size_t i = 0; i < c->args.size(); ++i) {
        if (c->is_constraint_arg(i)) continue;
        if (!sem_arg(c->args[i], v->var_insts, pred_of, v->kids[i])) return false;
      }
      return true;
    }
    std::size_t var = free[fi];
    for (auto& tb : all_tables(v->var_insts[var])) {
      pred_of[var] = table_fn(tb);
      if (search(fi + 1)) return true;
    }
    return false;
  };
  return search(0);
}

// ---- differential sweeps ----

namespace {

struct FlatTask {
  std::size_t case_idx;
  std::size_t value_idx;
  std::size_t table_idx;
};

std::vector<std::vector<Table>> table_assignments(Interp& in, const DataDecl& d,
                                                  const TypeExpr& instance) {
  std::vector<std::vector<Table>> per_index;
  for (int k = 0; k < d.arity; ++k)
    per_index.push_back(in.all_tables(instance.args[static_cast<std::size_t>(k)]));
  std::vector<std::vector<Table>> out;
  std::vector<std::size_t> pick(per_index.size(), 0);
  while (true) {
    std::vector<Table> one;
    for (std::size_t i = 0; i < per_index.size(); ++i) one.push_back(per_index[i][pick[i]]);
    out.push_back(std::move(one));
    std::size_t k = 0;
    while (k < pick.size()) {
      if (++pick[k] < per_index[k].size()) break;
      pick[k] = 0;
      ++k;
    }
    if (k == pick.size() || per_index.empty()) break;
  }
  return out;
}

SweepReport run_sweep_impl(const Module& mod, const LiftRegistry& reg, const FinModel& model,
                           const std::vector<SweepCase>& cases, bool parallel, bool ktop_only) {
  // Pre-plan the task list with one shared interpreter (deterministic order).
  Interp planner(mod, reg, model);
  struct CasePlan {
    const DataDecl* decl;
    TypeExpr instance;
    std::vector<ValuePtr> values;
    std::vector<std::vector<Table>> tables;
  };
  std::vector<CasePlan> plans;
  std::vector<FlatTask> tasks;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    CasePlan p;
    p.decl = mod.lookup(cases[ci].decl);
    if (!p.decl) throw_diag(DiagCode::UnresolvedName, "unknown declaration " + cases[ci].decl);
    p.instance = cases[ci].instance;
    p.values = planner.enumerate(p.instance);
    if (ktop_only) {
      std::vector<Table> full;
      for (int k = 0; k < p.decl->arity; ++k)
        full.push_back(planner.full_table(p.instance.args[static_cast<std::size_t>(k)]));
      p.tables.push_back(std::move(full));
    } else {
      p.tables = table_assignments(planner, *p.decl, p.instance);
    }
    for (std::size_t vi = 0; vi < p.values.size(); ++vi)
      for (std::size_t ti = 0; ti < p.tables.size(); ++ti)
        tasks.push_back(FlatTask{ci, vi, ti});
    plans.push_back(std::move(p));
  }

  std::vector<char> eval_bits(tasks.size()), oracle_bits(tasks.size()), errors(tasks.size(), 0);

  auto run_task = [&](Interp& in, std::size_t i) {
    const FlatTask& t = tasks[i];
    const CasePlan& p = plans[t.case_idx];
    try {
      bool e = in.eval_lifting(p.instance, p.tables[t.table_idx], p.values[t.value_idx]);
      bool o = ktop_only ? true
                         : in.leaf_oracle(p.instance, p.tables[t.table_idx], p.values[t.value_idx]);
      eval_bits[i] = e ? 1 : 0;
      oracle_bits[i] = o ? 1 : 0;
    } catch (const std::exception&) {
      errors[i] = 1;
    }
  };

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel
    {
      Interp local(mod, reg, model);
#pragma omp for schedule(dynamic, 64)
      for (long i = 0; i < static_cast<long>(tasks.size()); ++i)
        run_task(local, static_cast<std::size_t>(i));
    }
#else
    Interp local(mod, reg, model);
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(local, i);
#endif
  } else {
    Interp local(mod, reg, model);
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(local, i);
  }

  SweepReport report;
  report.checked = tasks.size();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i] && eval_bits[i] == oracle_bits[i]) continue;
    const FlatTask& t = tasks[i];
    const CasePlan& p = plans[t.case_idx];
    Mismatch m;
    m.decl = p.decl->name;
    m.instance = type_key(p.instance);
    m.value = show_value(*p.values[t.value_idx]);
    m.table_index = t.table_idx;
    m.eval_result = eval_bits[i];
    m.oracle_result = oracle_bits[i];
    report.mismatches.push_back(std::move(m));
  }
  return report;
}

}  // namespace

SweepReport run_sweep_serial(const Module& mod, const LiftRegistry& reg, const FinModel& model,
                             const std::vector<SweepCase>& cases) {
  return run_sweep_impl(mod, reg, model, cases, false, false);
}

SweepReport run_sweep_parallel(const Module& mod, const LiftRegistry& reg, const FinModel& model,
                               const std::vector<SweepCase>& cases) {
  return run_sweep_impl(mod, reg, model, cases, true, false);
}

SweepReport run_ktop_sweep(const Module& mod, const LiftRegistry& reg, const FinModel& model,
                           const std::vector<SweepCase>& cases) {
  return run_sweep_impl(mod, reg, model, cases, true, true);
}

namespace {

// Instances derived from the constructors themselves: each return pattern or
// constraint polynomial instantiated at the model variable A. Arrow-shaped
// indices are skipped (their predicate-table spaces explode).
void ctor_cases(const DataDecl& d, std::vector<SweepCase>& out) {
  auto seen = [&](const TypeExpr& t) {
    for (const auto& c : out)
      if (type_equal(c.instance, t)) return true;
    return false;
  };
  for (const auto& c : d.ctors) {
    std::vector<TypeExpr> env(c.vars.size(), TypeExpr::mk_data("A"));
    std::vector<TypeExpr> inst;
    bool ok = true;
    for (std::size_t k = 0; k < c.ret_indices.size(); ++k) {
      TypeExpr pattern = c.ret_indices[k];
      if (pattern.kind == TypeKind::Var) {
        for (const auto& q : c.constraints)
          if (static_cast<std::size_t>(q.index_pos) == k) pattern = q.rhs;
      }
      if (occurs_data(pattern, d.name)) ok = false;
      struct {
        bool has_arrow(const TypeExpr& t) {
          if (t.kind == TypeKind::Arrow) return true;
          for (const auto& a : t.args)
            if (has_arrow(a)) return true;
          return false;
        }
      } probe;
      if (probe.has_arrow(pattern)) ok = false;
      inst.push_back(subst_vars(pattern, env));
    }
    if (!ok) continue;
    TypeExpr t = TypeExpr::mk_data(d.name, inst);
    if (!seen(t)) out.push_back(SweepCase{d.name, t});
  }
}

}  // namespace

std::vector<SweepCase> default_cases(const DataDecl& d) {
  auto var = [](const char* n) { return TypeExpr::mk_data(n); };
  std::vector<SweepCase> out;
  if (d.name == "Equal") {
    out.push_back({d.name, TypeExpr::mk_data("Equal", {var("A"), var("A")})});
    out.push_back({d.name, TypeExpr::mk_data("Equal", {var("A"), var("B")})});
    return out;
  }
  if (d.name == "Seq") {
    out.push_back({d.name, TypeExpr::mk_data("Seq", {var("A")})});
    out.push_back({d.name, TypeExpr::mk_data(
                               "Seq", {TypeExpr::mk_product(var("A"), var("A"))})});
    return out;
  }
  if (d.name == "LType" || d.name == "LTerm") {
    out.push_back({d.name, TypeExpr::mk_data(d.name, {var("Bool")})});
    out.push_back({d.name, TypeExpr::mk_data(
                               d.name, {TypeExpr::mk_arrow(var("Bool"), var("Bool"))})});
    out.push_back({d.name, TypeExpr::mk_data(
                               d.name, {TypeExpr::mk_data("List", {var("Bool")})})});
    return out;
  }
  std::vector<TypeExpr> args;
  const char* names[] = {"A", "B", "C"};
  for (int i = 0; i < d.arity; ++i) args.push_back(var(names[i % 3]));
  out.push_back({d.name, TypeExpr::mk_data(d.name, args)});
  ctor_cases(d, out);
  return out;
}

}  // namespace interp
}  // namespace deepind
