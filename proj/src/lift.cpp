#include "deepind/lift.hpp"

#include <algorithm>

#include "derive_common.hpp"

namespace deepind {

using namespace derive;

namespace {

// forall (A1..An : Set) -> (A1 -> Set) -> .. -> G A1..An -> Set
TypeTerm lifting_signature(const std::string& name, int arity, SymGen& syms) {
  std::vector<int> var_syms;
  std::vector<std::string> names;
  std::set<std::string> avoid;
  for (int i = 0; i < arity; ++i) {
    names.push_back(canonical_type_var(i, avoid));
    avoid.insert(names.back());
    var_syms.push_back(syms.fresh());
  }
  std::vector<TypeTerm> inst;
  for (int i = 0; i < arity; ++i) inst.push_back(t_var(var_syms[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(i)]));
  TypeTerm target = t_app(name == "Equal" ? t_equal() : t_data(name), inst);
  TypeTerm core = t_arr(target, t_set());
  for (int i = arity - 1; i >= 0; --i)
    core = t_arr(t_arr(t_var(var_syms[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(i)]), t_set()), core);
  for (int i = arity - 1; i >= 0; --i)
    core = t_pi(names[static_cast<std::size_t>(i)], var_syms[static_cast<std::size_t>(i)], t_set(), core);
  return freeze(core);
}

std::vector<int> clause_telescope_syms(const CtorScope& s) {
  // Order: index vars, index predicates, binders, constructor arguments.
  std::vector<int> out;
  for (int i : s.index_vars) out.push_back(s.vars[static_cast<std::size_t>(i)].sym);
  for (const auto& p : s.index_preds) out.push_back(p.sym);
  for (int i : s.binder_vars) out.push_back(s.vars[static_cast<std::size_t>(i)].sym);
  for (const auto& a : s.args) out.push_back(a.sym);
  return out;
}

}  // namespace

LiftingDef builtin_lifting(const std::string& name) {
  SymGen syms;
  if (name == "Equal") {
    LiftingDef l;
    l.name = "Equal";
    l.arity = 2;
    l.signature = lifting_signature("Equal", 2, syms);
    LiftClause c;
    c.ctor = "refl";
    c.index_pats = {"A", "A"};
    c.pred_pats = {"Q", "Q'"};
    int a = syms.fresh(), q = syms.fresh(), q2 = syms.fresh(), x = syms.fresh();
    TypeTerm body = t_pi("a", x, t_var(a, "A"),
                         t_app(t_equal(), {t_app(t_var(q, "Q"), {t_var(x, "a")}),
                                           t_app(t_var(q2, "Q'"), {t_var(x, "a")})}));
    c.body = freeze(body, {a, q, q2});
    l.clauses.push_back(std::move(c));
    return l;
  }
  if (name == "Pair" || name == "Sum") {
    LiftingDef l;
    l.name = name;
    l.arity = 2;
    int a = syms.fresh(), b = syms.fresh(), qa = syms.fresh(), qb = syms.fresh();
    TypeTerm carrier = name == "Pair"
                           ? t_prod(t_var(a, "A"), t_var(b, "B"))
                           : TypeTerm{TermKind::SumT, -1, "", {t_var(a, "A"), t_var(b, "B")}};
    TypeTerm core = t_arr(carrier, t_set());
    core = t_arr(t_arr(t_var(b, "B"), t_set()), core);
    core = t_arr(t_arr(t_var(a, "A"), t_set()), core);
    core = t_pi("B", b, t_set(), core);
    core = t_pi("A", a, t_set(), core);
    l.signature = freeze(core);
    if (name == "Pair") {
      LiftClause c;
      c.ctor = "(,)";
      c.index_pats = {"A", "B"};
      c.pred_pats = {"Q_A", "Q_B"};
      c.ctor_args = {"a", "b"};
      int va = syms.fresh(), vb = syms.fresh();
      TypeTerm body = t_prod(t_app(t_var(qa, "Q_A"), {t_var(va, "a")}),
                             t_app(t_var(qb, "Q_B"), {t_var(vb, "b")}));
      c.body = freeze(body, {a, b, qa, qb, va, vb});
      l.clauses.push_back(std::move(c));
    } else {
      LiftClause cl;
      cl.ctor = "inl";
      cl.index_pats = {"A", "B"};
      cl.pred_pats = {"Q_A", "Q_B"};
      cl.ctor_args = {"a"};
      int va = syms.fresh();
      cl.body = freeze(t_app(t_var(qa, "Q_A"), {t_var(va, "a")}), {a, b, qa, qb, va});
      l.clauses.push_back(std::move(cl));
      LiftClause cr;
      cr.ctor = "inr";
      cr.index_pats = {"A", "B"};
      cr.pred_pats = {"Q_A", "Q_B"};
      cr.ctor_args = {"b"};
      int vb = syms.fresh();
      cr.body = freeze(t_app(t_var(qb, "Q_B"), {t_var(vb, "b")}), {a, b, qa, qb, vb});
      l.clauses.push_back(std::move(cr));
    }
    return l;
  }
  if (name == "Arrow" || name == "Arr") {
    LiftingDef l;
    l.name = "Arr";
    l.arity = 2;
    int a = syms.fresh(), b = syms.fresh(), qa = syms.fresh(), qb = syms.fresh();
    TypeTerm core = t_arr(t_arr(t_var(a, "A"), t_var(b, "B")), t_set());
    core = t_arr(t_arr(t_var(b, "B"), t_set()), core);
    core = t_arr(t_arr(t_var(a, "A"), t_set()), core);
    core = t_pi("B", b, t_set(), core);
    core = t_pi("A", a, t_set(), core);
    l.signature = freeze(core);
    LiftClause c;
    c.ctor = "";
    c.index_pats = {"A", "B"};
    c.pred_pats = {"Q_A", "Q_B"};
    c.ctor_args = {"f"};
    int f = syms.fresh(), x = syms.fresh();
    TypeTerm body =
        t_pi("a", x, t_var(a, "A"),
             t_arr(t_app(t_var(qa, "Q_A"), {t_var(x, "a")}),
                   t_app(t_var(qb, "Q_B"), {t_app(t_var(f, "f"), {t_var(x, "a")})})));
    c.body = freeze(body, {a, b, qa, qb, f});
    l.clauses.push_back(std::move(c));
    return l;
  }
  if (name == "Unit") {
    LiftingDef l;
    l.name = "Unit";
    l.arity = 0;
    l.signature = freeze(t_arr(t_data("Unit"), t_set()));
    LiftClause c;
    c.ctor = "tt";
    c.body = t_top();
    l.clauses.push_back(std::move(c));
    return l;
  }
  if (name == "KTop") {
    LiftingDef l;
    l.name = "KTop";
    l.arity = 1;
    int a = syms.fresh();
    l.signature = freeze(t_pi("A", a, t_set(), t_arr(t_var(a, "A"), t_set())));
    LiftClause c;
    c.ctor = "";
    c.index_pats = {"A"};
    c.ctor_args = {"a"};
    c.body = t_top();
    l.clauses.push_back(std::move(c));
    return l;
  }
  throw_diag(DiagCode::UnknownBuiltin, "no builtin lifting for " + name);
}

TypeTerm lift_type_expr(const TypeExpr& t, const std::string& self, const TypeTerm& self_pred,
                        const std::vector<TypeTerm>& telescope_types,
                        const std::vector<TypeTerm>& telescope_preds) {
  SelfPred sp{self_pred, true, true};
  return lift_term(t, self, sp, telescope_types, telescope_preds);
}

TypeTerm derive_shape_lifting(const ShapeF& s, const std::string& self, const TypeTerm& self_pred,
                              const std::vector<TypeTerm>& telescope_types,
                              const std::vector<TypeTerm>& telescope_preds) {
  SelfPred sp{self_pred, true, true};
  switch (s.kind) {
    case ShapeF::Kind::Const:
      return lift_term(s.type, self, sp, telescope_types, telescope_preds);
    case ShapeF::Kind::Rec: {
      std::vector<TypeTerm> args;
      for (const auto& a : s.rec_args) args.push_back(type_term(a, telescope_types));
      for (const auto& a : s.rec_args)
        args.push_back(lift_term(a, self, sp, telescope_types, telescope_preds));
      return t_app(self_pred, std::move(args));
    }
    case ShapeF::Kind::Product:
    case ShapeF::Kind::Sum:
    case ShapeF::Kind::Arrow:
    case ShapeF::Kind::Nested:
      // These four reconstruct the same term the compositional recursion
      // yields; shapes carry no extra information for them.
      break;
  }
  // Rebuild from the underlying type expression when available.
  return lift_term(s.type, self, sp, telescope_types, telescope_preds);
}

LiftingDef derive_data_lifting(const DataDecl& d, const Module& env) {
  if (d.classification == DeclClass::TrulyNestedGadt)
    throw_diag(DiagCode::TrulyNestedGadt,
               "cannot derive a predicate lifting for truly nested GADT " + d.name, d.span);
  if (d.name == "Equal") return builtin_lifting("Equal");

  SymGen syms;
  LiftingDef l;
  l.name = d.name;
  l.arity = d.arity;
  l.signature = lifting_signature(d.name, d.arity, syms);
  const bool allow_nest = d.classification == DeclClass::TrulyNestedType;
  const std::set<std::string> avoid = module_name_avoid(env);

  for (const auto& c : d.ctors) {
    // Post-encoding normal form: every return index is a plain variable.
    for (const auto& r : c.ret_indices)
      if (r.kind != TypeKind::Var)
        throw_diag(DiagCode::GrammarViolation,
                   "constructor " + c.name + " of " + d.name +
                       " has a structured return index; apply the Henry Ford encoding first",
                   c.span);
    // Grammar validation for every non-constraint argument.
    for (std::size_t i = 0; i < c.args.size(); ++i)
      if (!c.is_constraint_arg(i)) (void)shape_of(c.args[i], d.name, env, allow_nest);

    CtorScope s = make_ctor_scope(d, c, syms, avoid);
    LiftClause cl;
    cl.ctor = c.name;
    for (std::size_t k = 0; k < c.ret_indices.size(); ++k)
      cl.index_pats.push_back(s.vars[static_cast<std::size_t>(s.ret_var[k])].name);
    for (const auto& p : s.index_preds) cl.pred_pats.push_back(p.name);
    for (int b : s.binder_vars) cl.ctor_args.push_back(s.vars[static_cast<std::size_t>(b)].name);
    for (const auto& a : s.args) cl.ctor_args.push_back(a.name);

    // Variable environments for the body.
    std::vector<TypeTerm> type_of(c.vars.size()), pred_of(c.vars.size());
    for (std::size_t v = 0; v < c.vars.size(); ++v)
      type_of[v] = s.var_term(s.canonical_of[v]);
    for (std::size_t k = 0; k < c.ret_indices.size(); ++k)
      pred_of[static_cast<std::size_t>(c.ret_indices[k].var)] =
          t_var(s.index_preds[k].sym, s.index_preds[k].name);
    for (std::size_t bi = 0; bi < s.binder_vars.size(); ++bi) {
      // find the original telescope var whose canonical slot is binder_vars[bi]
      for (std::size_t v = 0; v < c.vars.size(); ++v)
        if (s.canonical_of[v] == s.binder_vars[bi])
          pred_of[v] = t_var(s.binder_preds[bi].sym, s.binder_preds[bi].name);
    }

    SelfPred sp{t_lift(d.name), true, true};
    std::vector<TypeTerm> conjuncts;
    std::vector<int> pi_syms;
    for (const auto& q : c.constraints) {
      TypeTerm lhs_t = s.var_term(s.ret_var[static_cast<std::size_t>(q.index_pos)]);
      TypeTerm lhs_q = t_var(s.index_preds[static_cast<std::size_t>(q.index_pos)].sym,
                             s.index_preds[static_cast<std::size_t>(q.index_pos)].name);
      conjuncts.push_back(t_app(t_lift("Equal"),
                                {lhs_t, type_term(q.rhs, type_of),
                                 lhs_q, lift_term(q.rhs, d.name, sp, type_of, pred_of),
                                 s.arg_term(q.arg)}));
    }
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      if (c.is_constraint_arg(i)) continue;
      conjuncts.push_back(conjunct_term(c.args[i], d.name, sp, type_of, pred_of, s.arg_term(i),
                                        syms, &pi_syms));
    }
    TypeTerm body = fold_prod(std::move(conjuncts));
    for (std::size_t bi = s.binder_preds.size(); bi-- > 0;) {
      int bvar = s.binder_vars[bi];
      body = t_sig(s.binder_preds[bi].name, s.binder_preds[bi].sym,
                   t_arr(s.var_term(bvar), t_set()), std::move(body));
    }
    cl.body = freeze(body, clause_telescope_syms(s));
    l.clauses.push_back(std::move(cl));
  }
  return l;
}

LiftRegistry::LiftRegistry(const Module& mod) : mod_(&mod) {
  for (const char* b : {"Equal", "Pair", "Sum", "Arr", "Unit", "KTop"})
    by_name_.emplace(b, builtin_lifting(b));
  if (!mod.lookup("List")) {
    // Prelude List is always reachable even without a user declaration.
  }
  auto add = [&](const DataDecl& d) {
    if (d.classification == DeclClass::TrulyNestedGadt) return;
    if (by_name_.count(d.name)) return;
    try {
      by_name_.emplace(d.name, derive_data_lifting(d, *mod_));
    } catch (const diag_error&) {
      // Unencoded or otherwise underivable declarations have no lifting;
      // lookups against them fail where they are actually needed.
    }
  };
  for (const auto& d : mod.decls) add(d);
  add(Module::prelude_list());
}

const LiftingDef* LiftRegistry::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &it->second;
}


std::string lift_map_name(const std::string& data_name) { return "lift" + data_name + "Map"; }

namespace {

// Environment for building witness-embedded terms and morphisms inside one
// lift-map clause: all variables are referenced by display name.
struct MapEnv {
  std::string self;
  std::vector<std::string> var_names;   // per ctor telescope var
  std::vector<TypeTerm> type_of;        // named-var type terms
  std::vector<TypeTerm> src_pred_of;    // lifting predicates at Q
  std::vector<TypeTerm> tgt_pred_of;    // lifting predicates at Q'
  std::vector<std::string> morph_of;    // morphism names per var ("" = identity)
  int gensym = 0;
};

WitnessTerm identity_morph(MapEnv& env) {
  WitnessTerm lam;
  lam.kind = WitKind::Lam;
  std::string x = "x" + std::to_string(env.gensym), u = "u" + std::to_string(env.gensym);
  ++env.gensym;
  lam.kids = {w_var(x), w_var(u), w_var(u)};
  return lam;
}

WitnessTerm instance_morph(const TypeExpr& t, MapEnv& env);

// liftHMap applied through morphisms only: [types, src preds, tgt preds, morphs].
std::vector<WitnessTerm> map_prefix(const std::vector<TypeExpr>& args, MapEnv& env) {
  std::vector<WitnessTerm> out;
  SelfPred src{t_lift(env.self), true, true};
  for (const auto& a : args) out.push_back(w_type(type_term(a, env.type_of)));
  for (const auto& a : args)
    out.push_back(w_type(lift_term(a, env.self, src, env.type_of, env.src_pred_of)));
  for (const auto& a : args)
    out.push_back(w_type(lift_term(a, env.self, src, env.type_of, env.tgt_pred_of)));
  for (const auto& a : args) out.push_back(instance_morph(a, env));
  return out;
}

WitnessTerm instance_morph(const TypeExpr& t, MapEnv& env) {
  switch (t.kind) {
    case TypeKind::Var: {
      const std::string& m = env.morph_of[static_cast<std::size_t>(t.var)];
      if (m.empty()) return identity_morph(env);
      return w_var(m);
    }
    case TypeKind::Product:
    case TypeKind::Sum: {
      std::string x1 = "x" + std::to_string(env.gensym), u1 = "u" + std::to_string(env.gensym);
      ++env.gensym;
      std::string x2 = "x" + std::to_string(env.gensym), u2 = "u" + std::to_string(env.gensym);
      ++env.gensym;
      WitnessTerm lm = instance_morph(t.args[0], env);
      WitnessTerm rm = instance_morph(t.args[1], env);
      WitnessTerm lam;
      lam.kind = WitKind::Lam;
      if (t.kind == TypeKind::Product) {
        lam.kids = {w_tuple({w_var(x1), w_var(x2)}), w_tuple({w_var(u1), w_var(u2)}),
                    w_tuple({w_app(lm, {w_var(x1), w_var(u1)}),
                             w_app(rm, {w_var(x2), w_var(u2)})})};
        return lam;
      }
      WitnessTerm cas;
      cas.kind = WitKind::CaseW;
      cas.kids = {w_var(x1),
                  w_app(w_ctor("inl"), {w_var(x2)}), w_app(lm, {w_var(x2), w_var(u1)}),
                  w_app(w_ctor("inr"), {w_var(x2)}), w_app(rm, {w_var(x2), w_var(u1)})};
      lam.kids = {w_var(x1), w_var(u1), cas};
      return lam;
    }
    case TypeKind::Arrow: {
      std::string f = "f" + std::to_string(env.gensym), u = "u" + std::to_string(env.gensym),
                  z = "z" + std::to_string(env.gensym), v = "v" + std::to_string(env.gensym);
      ++env.gensym;
      WitnessTerm cm = instance_morph(t.args[1], env);
      WitnessTerm lam;
      lam.kind = WitKind::Lam;
      lam.kids = {w_var(f), w_var(u), w_var(z), w_var(v),
                  w_app(cm, {w_app(w_var(f), {w_var(z)}),
                             w_app(w_var(u), {w_var(z), w_var(v)})})};
      return lam;
    }
    case TypeKind::Data: {
      if (t.name == env.self) {
        // Recursive map at a (variable-only) instance of the type itself.
        WitnessTerm self;
        self.kind = WitKind::SelfCall;
        self.name = lift_map_name(env.self);
        self.kids = map_prefix(t.args, env);
        return self;
      }
      if (t.args.empty()) return identity_morph(env);
      WitnessTerm call;
      call.kind = WitKind::MapCall;
      call.name = lift_map_name(t.name);
      MapEnv sub = env;
      sub.self = t.name;  // prefix liftings below use the head's own lift
      call.kids = map_prefix(t.args, sub);
      env.gensym = sub.gensym;
      return call;
    }
    case TypeKind::Unit:
      break;
  }
  return identity_morph(env);
}

}  // namespace

WitnessDef derive_lift_map(const DataDecl& h, const Module& env) {
  if (h.classification == DeclClass::Gadt || h.classification == DeclClass::TrulyNestedGadt)
    throw_diag(DiagCode::UnsupportedMap,
               h.name + " is a GADT; its lifting admits no map function", h.span);
  if (h.classification == DeclClass::TrulyNestedType)
    throw_diag(DiagCode::UnsupportedMap,
               h.name + " is truly nested; its map needs the functorial semantics", h.span);

  SymGen syms;
  WitnessDef w;
  w.name = lift_map_name(h.name);
  std::set<std::string> avoid = module_name_avoid(env);

  std::vector<std::string> carriers, qs, q2s, ms;
  for (int i = 0; i < h.arity; ++i) {
    std::string n = canonical_type_var(i, avoid);
    avoid.insert(n);
    carriers.push_back(n);
  }
  for (int i = 0; i < h.arity; ++i) {
    std::string suffix = h.arity == 1 ? "" : "_" + carriers[static_cast<std::size_t>(i)];
    qs.push_back("Q" + suffix);
    q2s.push_back("Q" + suffix + "'");
    ms.push_back("m" + suffix);
  }
  for (const auto& n : carriers) w.params.push_back(n);
  for (const auto& n : qs) w.params.push_back(n);
  for (const auto& n : q2s) w.params.push_back(n);
  for (const auto& n : ms) w.params.push_back(n);

  // forall (A.. : Set) (Q.. Q'.. : A -> Set) -> PredMap A Q Q' .. ->
  //   PredMap (H A..) (H^ A.. Q..) (H^ A.. Q'..)
  {
    std::vector<int> asy, qsy, q2sy;
    std::vector<TypeTerm> av, qv, q2v;
    for (int i = 0; i < h.arity; ++i) asy.push_back(syms.fresh());
    for (int i = 0; i < h.arity; ++i) {
      qsy.push_back(syms.fresh());
      q2sy.push_back(syms.fresh());
    }
    for (int i = 0; i < h.arity; ++i) {
      av.push_back(t_var(asy[static_cast<std::size_t>(i)], carriers[static_cast<std::size_t>(i)]));
      qv.push_back(t_var(qsy[static_cast<std::size_t>(i)], qs[static_cast<std::size_t>(i)]));
      q2v.push_back(t_var(q2sy[static_cast<std::size_t>(i)], q2s[static_cast<std::size_t>(i)]));
    }
    std::vector<TypeTerm> h1 = av, h2 = av;
    for (auto& q : qv) h1.push_back(q);
    for (auto& q : q2v) h2.push_back(q);
    TypeTerm core = t_predmap(t_app(t_data(h.name), av), t_app(t_lift(h.name), h1),
                              t_app(t_lift(h.name), h2));
    for (int i = h.arity - 1; i >= 0; --i)
      core = t_arr(t_predmap(av[static_cast<std::size_t>(i)], qv[static_cast<std::size_t>(i)],
                             q2v[static_cast<std::size_t>(i)]),
                   core);
    for (int i = h.arity - 1; i >= 0; --i) {
      core = t_pi(q2s[static_cast<std::size_t>(i)], q2sy[static_cast<std::size_t>(i)],
                  t_arr(av[static_cast<std::size_t>(i)], t_set()), core);
      core = t_pi(qs[static_cast<std::size_t>(i)], qsy[static_cast<std::size_t>(i)],
                  t_arr(av[static_cast<std::size_t>(i)], t_set()), core);
    }
    for (int i = h.arity - 1; i >= 0; --i)
      core = t_pi(carriers[static_cast<std::size_t>(i)], asy[static_cast<std::size_t>(i)],
                  t_set(), core);
    w.signature = freeze(core);
  }

  // Clause scopes share the parameter carriers: the index variables are
  // canonically named first, coinciding with the parameter names.
  std::set<std::string> clause_avoid = module_name_avoid(env);
  for (const auto& n : qs) clause_avoid.insert(n);
  for (const auto& n : q2s) clause_avoid.insert(n);
  for (const auto& n : ms) clause_avoid.insert(n);

  for (const auto& c : h.ctors) {
    CtorScope s = make_ctor_scope(h, c, syms, clause_avoid);
    WitnessClause cl;
    cl.ctor = c.name;
    for (int b : s.binder_vars) cl.ctor_args.push_back(s.vars[static_cast<std::size_t>(b)].name);
    for (const auto& a : s.args) cl.ctor_args.push_back(a.name);

    MapEnv me;
    me.self = h.name;
    me.var_names.resize(c.vars.size());
    me.type_of.resize(c.vars.size());
    me.src_pred_of.resize(c.vars.size());
    me.tgt_pred_of.resize(c.vars.size());
    me.morph_of.assign(c.vars.size(), "");
    // Index vars display as the shared parameter names; binders keep
    // clause-local names with pass-through predicates.
    std::set<std::string> taken(w.params.begin(), w.params.end());
    std::vector<std::string> binder_pred_names;
    for (std::size_t v = 0; v < c.vars.size(); ++v) {
      int canon = s.canonical_of[v];
      int ret_pos = -1;
      for (std::size_t k = 0; k < c.ret_indices.size(); ++k)
        if (c.ret_indices[k].kind == TypeKind::Var &&
            static_cast<std::size_t>(c.ret_indices[k].var) == v)
          ret_pos = static_cast<int>(k);
      if (ret_pos >= 0) {
        me.var_names[v] = carriers[static_cast<std::size_t>(ret_pos)];
        me.src_pred_of[v] = t_namedvar(qs[static_cast<std::size_t>(ret_pos)]);
        me.tgt_pred_of[v] = t_namedvar(q2s[static_cast<std::size_t>(ret_pos)]);
        me.morph_of[v] = ms[static_cast<std::size_t>(ret_pos)];
      } else {
        me.var_names[v] = s.vars[static_cast<std::size_t>(canon)].name;
        std::string qn = "Q_" + me.var_names[v];
        while (taken.count(qn)) qn += "'";
        taken.insert(qn);
        binder_pred_names.push_back(qn);
        me.src_pred_of[v] = t_namedvar(qn);
        me.tgt_pred_of[v] = t_namedvar(qn);  // pass-through: same witness predicate
      }
      me.type_of[v] = t_namedvar(me.var_names[v]);
    }
    for (const auto& a : s.args) taken.insert(a.name);

    std::vector<std::string> ev = binder_pred_names;
    std::vector<WitnessTerm> parts;
    for (const auto& qn : binder_pred_names) parts.push_back(w_var(qn));
    SelfPred probe{t_lift(h.name), true, true};
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      const TypeExpr& t = c.args[i];
      if (is_literal_ktop(lift_term(t, h.name, probe, me.type_of, me.src_pred_of)))
        continue;  // conjunct absent from the lifting
      std::string en = lift_name_for(s.args[i].name, taken);
      ev.push_back(en);
      if (t.kind == TypeKind::Data && t.name == h.name) {
        WitnessTerm self;
        self.kind = WitKind::SelfCall;
        self.name = w.name;
        self.kids = map_prefix(t.args, me);
        self.kids.push_back(w_var(s.args[i].name));
        self.kids.push_back(w_var(en));
        self.self_scrutinee = s.args[i].name;
        parts.push_back(std::move(self));
      } else if (t.kind == TypeKind::Data && !t.args.empty() && occurs_data(t, h.name)) {
        WitnessTerm call;
        call.kind = WitKind::MapCall;
        call.name = lift_map_name(t.name);
        MapEnv sub = me;
        sub.self = t.name;
        call.kids = map_prefix(t.args, sub);
        me.gensym = sub.gensym;
        call.kids.push_back(w_var(s.args[i].name));
        call.kids.push_back(w_var(en));
        parts.push_back(std::move(call));
      } else {
        WitnessTerm m = instance_morph(t, me);
        parts.push_back(w_app(m, {w_var(s.args[i].name), w_var(en)}));
      }
    }
    cl.evidence = ev;
    if (ev.empty()) {
      cl.evidence_tt = true;
      cl.body = w_ctor("tt");
    } else if (ev.size() == 1) {
      cl.evidence_tuple = false;
      cl.body = std::move(parts[0]);
    } else {
      cl.evidence_tuple = true;
      cl.body = w_tuple(std::move(parts));
    }
    w.clauses.push_back(std::move(cl));
  }
  return w;
}

}  // namespace deepind
