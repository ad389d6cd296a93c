#include "deepind/induct.hpp"

#include <algorithm>
#include <functional>

#include "derive_common.hpp"

namespace deepind {

using namespace derive;

namespace {

std::string conclusion_value_name(const DataDecl& d, const std::vector<std::string>& index_names,
                                  std::set<std::string> taken) {
  TypeExpr inst = TypeExpr::mk_data(d.name, {});
  for (std::size_t i = 0; i < index_names.size(); ++i)
    inst.args.push_back(TypeExpr::mk_var(static_cast<int>(i)));
  ArgNamer namer(std::move(taken));
  return namer.name_for(inst, index_names);
}

// forall (A.. : Set) -> (A -> Set).. -> G A.. -> Set (with_preds)
// or the same without the predicate spaces.
TypeTerm p_signature_poly(const DataDecl& d, bool with_preds, SymGen& syms) {
  std::vector<int> sy;
  std::vector<std::string> names;
  std::set<std::string> avoid;
  for (int i = 0; i < d.arity; ++i) {
    names.push_back(canonical_type_var(i, avoid));
    avoid.insert(names.back());
    sy.push_back(syms.fresh());
  }
  std::vector<TypeTerm> inst;
  for (int i = 0; i < d.arity; ++i)
    inst.push_back(t_var(sy[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(i)]));
  TypeTerm head = d.name == "Equal" ? t_equal() : t_data(d.name);
  TypeTerm core = t_arr(t_app(head, inst), t_set());
  if (with_preds)
    for (int i = d.arity - 1; i >= 0; --i)
      core = t_arr(t_arr(t_var(sy[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(i)]),
                         t_set()),
                   core);
  for (int i = d.arity - 1; i >= 0; --i)
    core = t_pi(names[static_cast<std::size_t>(i)], sy[static_cast<std::size_t>(i)], t_set(), core);
  return core;  // closed; caller freezes
}

// Shared hypothesis-body builder. For ADTs the declared index variables and
// custom predicates live in the enclosing rule scope; for polymorphic rules
// the hypothesis quantifies everything itself.
struct HypCtx {
  bool mono = false;            // ADT style
  bool deep = true;             // deep vs structural
  TypeTerm p;                   // the rule predicate (Var term)
  std::vector<TypeTerm> outer_types;  // mono: per declared index var
  std::vector<TypeTerm> outer_preds;  // mono+deep: per declared index var
};

SelfPred hyp_self_pred(const HypCtx& ctx) {
  SelfPred sp;
  sp.head = ctx.p;
  sp.with_types = !ctx.mono;
  sp.with_lifts = !ctx.mono && ctx.deep;
  return sp;
}

TypeTerm build_hyp_body(const DataDecl& d, const ConstructorDecl& c, const CtorScope& s,
                        const HypCtx& ctx, SymGen& syms) {
  // Variable environments.
  std::vector<TypeTerm> type_of(c.vars.size()), pred_of(c.vars.size());
  for (std::size_t v = 0; v < c.vars.size(); ++v) type_of[v] = s.var_term(s.canonical_of[v]);
  std::vector<bool> is_index(c.vars.size(), false);
  std::vector<TypeTerm> pred_at_pos(c.ret_indices.size());
  for (std::size_t k = 0; k < c.ret_indices.size(); ++k) {
    if (c.ret_indices[k].kind != TypeKind::Var) continue;
    std::size_t v = static_cast<std::size_t>(c.ret_indices[k].var);
    bool first = !is_index[v];
    is_index[v] = true;
    if (ctx.mono) {
      type_of[v] = ctx.outer_types[k];
      pred_at_pos[k] = ctx.deep ? ctx.outer_preds[k] : t_ktop(ctx.outer_types[k]);
    } else {
      pred_at_pos[k] = ctx.deep ? t_var(s.index_preds[k].sym, s.index_preds[k].name)
                                : t_ktop(type_of[v]);
    }
    if (first) pred_of[v] = pred_at_pos[k];
  }
  for (std::size_t bi = 0; bi < s.binder_vars.size(); ++bi) {
    for (std::size_t v = 0; v < c.vars.size(); ++v)
      if (s.canonical_of[v] == s.binder_vars[bi] && !is_index[v])
        pred_of[v] = ctx.deep ? t_var(s.binder_preds[bi].sym, s.binder_preds[bi].name)
                              : t_ktop(type_of[v]);
  }

  SelfPred sp = hyp_self_pred(ctx);
  const int p_sym = ctx.p.var;

  // Direct mode (the builtin Equal): the return instance stays structured, so
  // the hypothesis takes the whole self-lifting of the scrutinee as premise.
  bool direct = false;
  {
    std::set<int> seen;
    for (const auto& r : c.ret_indices)
      if (r.kind == TypeKind::Var && !seen.insert(r.var).second) direct = true;
  }

  // Premises: one per constraint, then one per non-erased domain argument.
  std::vector<TypeTerm> premises;
  std::vector<int> pi_syms;
  if (direct) {
    std::vector<TypeTerm> ctor_args0;
    for (int b : s.binder_vars) ctor_args0.push_back(s.var_term(b));
    for (std::size_t i = 0; i < c.args.size(); ++i) ctor_args0.push_back(s.arg_term(i));
    std::vector<TypeTerm> gapp;
    for (const auto& r : c.ret_indices) gapp.push_back(type_term(r, type_of));
    for (std::size_t k = 0; k < c.ret_indices.size(); ++k) gapp.push_back(pred_at_pos[k]);
    gapp.push_back(t_app(t_ctor(c.name), std::move(ctor_args0)));
    premises.push_back(t_app(t_lift(d.name), std::move(gapp)));
  }
  for (const auto& q : c.constraints) {
    TypeTerm lhs_t = type_of[static_cast<std::size_t>(
        c.ret_indices[static_cast<std::size_t>(q.index_pos)].var)];
    TypeTerm lhs_q = pred_at_pos[static_cast<std::size_t>(q.index_pos)];
    premises.push_back(t_app(t_lift("Equal"),
                             {lhs_t, type_term(q.rhs, type_of), lhs_q,
                              lift_term(q.rhs, d.name, sp, type_of, pred_of), s.arg_term(q.arg)}));
  }
  for (std::size_t i : s.hyp_arg_order) {
    if (c.is_constraint_arg(i)) continue;
    premises.push_back(
        conjunct_term(c.args[i], d.name, sp, type_of, pred_of, s.arg_term(i), syms, &pi_syms));
  }
  if (!ctx.deep) {
    // Structural rules erase premises that do not mention the rule predicate.
    std::vector<TypeTerm> kept;
    for (auto& p : premises)
      if (mentions_var_sym(p, p_sym)) kept.push_back(std::move(p));
    premises = std::move(kept);
  } else {
    std::vector<TypeTerm> kept;
    for (auto& p : premises)
      if (p.kind != TermKind::Top) kept.push_back(std::move(p));
    premises = std::move(kept);
  }

  // Conclusion: P at the return indices (and their predicates), applied to
  // the constructor value.
  std::vector<TypeTerm> ctor_args;
  for (int b : s.binder_vars) ctor_args.push_back(s.var_term(b));
  for (std::size_t i = 0; i < c.args.size(); ++i) ctor_args.push_back(s.arg_term(i));
  TypeTerm value = t_app(t_ctor(c.name), std::move(ctor_args));
  std::vector<TypeTerm> papp;
  if (!ctx.mono) {
    for (const auto& r : c.ret_indices) papp.push_back(type_term(r, type_of));
    if (ctx.deep)
      for (std::size_t k = 0; k < c.ret_indices.size(); ++k) papp.push_back(pred_at_pos[k]);
  }
  papp.push_back(std::move(value));
  TypeTerm body = t_app(ctx.p, std::move(papp));
  for (std::size_t i = premises.size(); i-- > 0;) body = t_arr(premises[i], std::move(body));

  // Telescope: values (with synthesized evidence last), under predicates,
  // under binder variables, under (non-mono) index variables.
  for (std::size_t i = s.hyp_arg_order.size(); i-- > 0;) {
    std::size_t ai = s.hyp_arg_order[i];
    body = t_pi(s.args[ai].name, s.args[ai].sym, type_term(c.args[ai], type_of), std::move(body));
  }
  if (ctx.deep) {
    for (std::size_t bi = s.binder_preds.size(); bi-- > 0;)
      body = t_pi(s.binder_preds[bi].name, s.binder_preds[bi].sym,
                  t_arr(s.var_term(s.binder_vars[bi]), t_set()), std::move(body));
    if (!ctx.mono) {
      for (std::size_t k = c.ret_indices.size(); k-- > 0;) {
        std::size_t v = static_cast<std::size_t>(c.ret_indices[k].var);
        body = t_pi(s.index_preds[k].name, s.index_preds[k].sym,
                    t_arr(type_of[v], t_set()), std::move(body));
      }
    }
  }
  for (std::size_t bi = s.binder_vars.size(); bi-- > 0;)
    body = t_pi(s.vars[static_cast<std::size_t>(s.binder_vars[bi])].name,
                s.vars[static_cast<std::size_t>(s.binder_vars[bi])].sym, t_set(), std::move(body));
  if (!ctx.mono) {
    for (std::size_t ii = s.index_vars.size(); ii-- > 0;) {
      int canon = s.index_vars[ii];
      body = t_pi(s.vars[static_cast<std::size_t>(canon)].name,
                  s.vars[static_cast<std::size_t>(canon)].sym, t_set(), std::move(body));
    }
  }
  return body;
}

void reject_truly_nested_gadt(const DataDecl& d) {
  if (d.classification != DeclClass::TrulyNestedGadt) return;
  Span where = d.span;
  for (const auto& c : d.ctors) {
    for (const auto& a : c.args) {
      struct {
        bool found = false;
        void walk(const TypeExpr& t, const std::string& g) {
          if (t.kind == TypeKind::Data && t.name == g)
            for (const auto& x : t.args)
              if (occurs_data(x, g)) found = true;
          for (const auto& x : t.args) walk(x, g);
        }
      } nest;
      nest.walk(a, d.name);
      if (nest.found) {
        where = c.span;
        break;
      }
    }
  }
  throw_diag(
      DiagCode::TrulyNestedGadt,
      "cannot derive induction for truly nested GADT " + d.name + ": " + d.name +
          "^Map is not definable",
      where,
      "the deep rule's soundness witness needs the map function " + d.name +
          "^Map for the derived lifting, and no such map exists: given evidence that a\n"
          "predicate Q is extensionally equal to Pair^ B B Q_B Q_B and a predicate morphism\n"
          "from Q to Q', there need not exist any predicate Q'_B such that Q' is equal to\n"
          "Pair^ B B Q'_B Q'_B, so the equality evidence cannot be transported");
}

void require_derivable(const DataDecl& d) {
  reject_truly_nested_gadt(d);
  if (d.arity < 1)
    throw_diag(DiagCode::GrammarViolation,
               d.name + " has no Set parameters; nothing to derive", d.span);
  for (const auto& c : d.ctors)
    for (const auto& r : c.ret_indices)
      if (r.kind != TypeKind::Var && d.name != "Equal")
        throw_diag(DiagCode::GrammarViolation,
                   "constructor " + c.name + " of " + d.name +
                       " has a structured return index; apply the Henry Ford encoding first",
                   c.span);
}

// Grammar validation (and NESTED_G / H_IS_GADT surfacing) for every argument.
void validate_shapes(const DataDecl& d, const Module& env) {
  const bool allow_nest = d.classification == DeclClass::TrulyNestedType;
  for (const auto& c : d.ctors)
    for (std::size_t i = 0; i < c.args.size(); ++i)
      if (!c.is_constraint_arg(i)) (void)shape_of(c.args[i], d.name, env, allow_nest);
}

}  // namespace

std::vector<std::pair<std::string, TypeTerm>> derive_hypotheses(const DataDecl& d,
                                                                const Module& env) {
  require_derivable(d);
  validate_shapes(d, env);
  const bool mono = d.classification == DeclClass::Adt;
  const std::set<std::string> avoid = module_name_avoid(env);

  std::vector<std::pair<std::string, TypeTerm>> out;
  for (const auto& c : d.ctors) {
    SymGen syms;
    CtorScope s = make_ctor_scope(d, c, syms, avoid);
    HypCtx ctx;
    ctx.mono = mono;
    ctx.deep = true;
    int p_sym = syms.fresh();
    ctx.p = t_var(p_sym, "P");

    TypeTerm psig;
    std::vector<int> outer_syms;
    if (mono) {
      // Standalone form: lambda-abstract the declared indices, P and the
      // custom predicates so the hypothesis is closed.
      std::vector<std::string> names;
      std::set<std::string> used = avoid;
      for (int i = 0; i < d.arity; ++i) {
        names.push_back(canonical_type_var(i, used));
        used.insert(names.back());
        outer_syms.push_back(syms.fresh());
        ctx.outer_types.push_back(t_var(outer_syms.back(), names.back()));
      }
      std::vector<int> pred_syms;
      for (int i = 0; i < d.arity; ++i) {
        pred_syms.push_back(syms.fresh());
        ctx.outer_preds.push_back(
            t_var(pred_syms.back(), d.arity == 1 ? "Q" : "Q_" + names[static_cast<std::size_t>(i)]));
      }
      TypeTerm body = build_hyp_body(d, c, s, ctx, syms);
      for (std::size_t i = ctx.outer_preds.size(); i-- > 0;)
        body = t_lam(ctx.outer_preds[i].name, pred_syms[i],
                     t_arr(ctx.outer_types[i], t_set()), std::move(body));
      TypeTerm inst = t_app(t_data(d.name), ctx.outer_types);
      body = t_lam("P", p_sym, t_arr(std::move(inst), t_set()), std::move(body));
      for (std::size_t i = ctx.outer_types.size(); i-- > 0;)
        body = t_lam(ctx.outer_types[i].name, outer_syms[i], t_set(), std::move(body));
      out.emplace_back(hyp_name(c.name), freeze(body));
    } else {
      psig = p_signature_poly(d, true, syms);
      TypeTerm body = build_hyp_body(d, c, s, ctx, syms);
      body = t_lam("P", p_sym, std::move(psig), std::move(body));
      out.emplace_back(hyp_name(c.name), freeze(body));
    }
  }
  return out;
}

RuleDef derive_deep_rule(const DataDecl& d, const Module& env) {
  require_derivable(d);
  validate_shapes(d, env);
  const bool mono = d.classification == DeclClass::Adt;
  const bool named_hyps = d.classification == DeclClass::Gadt;
  const std::set<std::string> avoid = module_name_avoid(env);

  RuleDef r;
  r.name = witness_name(d.name);
  r.kind = RuleKind::Deep;
  r.monomorphic = mono;
  r.hypotheses = derive_hypotheses(d, env);

  SymGen syms;
  int p_sym = syms.fresh();
  HypCtx ctx;
  ctx.mono = mono;
  ctx.deep = true;
  ctx.p = t_var(p_sym, "P");

  // Conclusion telescope.
  std::vector<int> idx_syms, pred_syms;
  std::vector<std::string> idx_names, pred_names;
  {
    std::set<std::string> used = avoid;
    for (int i = 0; i < d.arity; ++i) {
      idx_names.push_back(canonical_type_var(i, used));
      used.insert(idx_names.back());
      idx_syms.push_back(syms.fresh());
    }
    for (int i = 0; i < d.arity; ++i) {
      pred_names.push_back(d.arity == 1 ? "Q_" + idx_names[0]
                                        : "Q_" + idx_names[static_cast<std::size_t>(i)]);
      pred_syms.push_back(syms.fresh());
    }
  }
  std::vector<TypeTerm> idx_terms, pred_terms;
  for (int i = 0; i < d.arity; ++i) {
    idx_terms.push_back(t_var(idx_syms[static_cast<std::size_t>(i)],
                              idx_names[static_cast<std::size_t>(i)]));
    pred_terms.push_back(t_var(pred_syms[static_cast<std::size_t>(i)],
                               pred_names[static_cast<std::size_t>(i)]));
  }
  std::set<std::string> taken = avoid;
  for (const auto& n : idx_names) taken.insert(n);
  for (const auto& n : pred_names) taken.insert(n);
  taken.insert("P");
  std::string y_name = conclusion_value_name(d, idx_names, taken);
  int y_sym = syms.fresh();
  TypeTerm target_head = d.name == "Equal" ? t_equal() : t_data(d.name);
  TypeTerm y_type = t_app(target_head, idx_terms);
  std::vector<TypeTerm> gapp = idx_terms;
  for (auto& q : pred_terms) gapp.push_back(q);
  gapp.push_back(t_var(y_sym, y_name));
  TypeTerm lift_premise = t_app(t_lift(d.name), gapp);
  std::vector<TypeTerm> papp;
  if (!mono) {
    for (auto& a : idx_terms) papp.push_back(a);
    for (auto& q : pred_terms) papp.push_back(q);
  }
  papp.push_back(t_var(y_sym, y_name));
  TypeTerm conclusion = t_arr(std::move(lift_premise), t_app(ctx.p, std::move(papp)));
  conclusion = t_pi(y_name, y_sym, std::move(y_type), std::move(conclusion));
  if (!mono) {
    for (int i = d.arity - 1; i >= 0; --i)
      conclusion = t_pi(pred_names[static_cast<std::size_t>(i)],
                        pred_syms[static_cast<std::size_t>(i)],
                        t_arr(idx_terms[static_cast<std::size_t>(i)], t_set()),
                        std::move(conclusion));
    for (int i = d.arity - 1; i >= 0; --i)
      conclusion = t_pi(idx_names[static_cast<std::size_t>(i)],
                        idx_syms[static_cast<std::size_t>(i)], t_set(), std::move(conclusion));
  }

  TypeTerm stmt = std::move(conclusion);
  if (named_hyps) {
    for (std::size_t i = d.ctors.size(); i-- > 0;)
      stmt = t_arr(t_app(t_hyp(hyp_name(d.ctors[i].name)), {ctx.p}), std::move(stmt));
  } else {
    // Inline hypothesis bodies sharing this scope.
    ctx.outer_types = idx_terms;
    ctx.outer_preds = pred_terms;
    for (std::size_t i = d.ctors.size(); i-- > 0;) {
      CtorScope s = make_ctor_scope(d, d.ctors[i], syms, avoid);
      stmt = t_arr(build_hyp_body(d, d.ctors[i], s, ctx, syms), std::move(stmt));
    }
  }
  if (!mono) {
    stmt = t_pi("P", p_sym, p_signature_poly(d, true, syms), std::move(stmt));
  } else {
    for (int i = d.arity - 1; i >= 0; --i)
      stmt = t_pi(pred_names[static_cast<std::size_t>(i)], pred_syms[static_cast<std::size_t>(i)],
                  t_arr(idx_terms[static_cast<std::size_t>(i)], t_set()), std::move(stmt));
    stmt = t_pi("P", p_sym, t_arr(t_app(t_data(d.name), idx_terms), t_set()), std::move(stmt));
    for (int i = d.arity - 1; i >= 0; --i)
      stmt = t_pi(idx_names[static_cast<std::size_t>(i)], idx_syms[static_cast<std::size_t>(i)],
                  t_set(), std::move(stmt));
  }
  r.statement = freeze(stmt);
  return r;
}

RuleDef derive_structural_rule(const DataDecl& d, const Module& env) {
  require_derivable(d);
  validate_shapes(d, env);
  const bool mono = d.classification == DeclClass::Adt;
  const std::set<std::string> avoid = module_name_avoid(env);

  RuleDef r;
  r.name = structural_name(d.name);
  r.kind = RuleKind::Structural;
  r.monomorphic = mono;

  SymGen syms;
  int p_sym = syms.fresh();
  HypCtx ctx;
  ctx.mono = mono;
  ctx.deep = false;
  ctx.p = t_var(p_sym, "P");

  std::vector<int> idx_syms;
  std::vector<std::string> idx_names;
  {
    std::set<std::string> used = avoid;
    for (int i = 0; i < d.arity; ++i) {
      idx_names.push_back(canonical_type_var(i, used));
      used.insert(idx_names.back());
      idx_syms.push_back(syms.fresh());
    }
  }
  std::vector<TypeTerm> idx_terms;
  for (int i = 0; i < d.arity; ++i)
    idx_terms.push_back(t_var(idx_syms[static_cast<std::size_t>(i)],
                              idx_names[static_cast<std::size_t>(i)]));
  std::set<std::string> taken = avoid;
  for (const auto& n : idx_names) taken.insert(n);
  taken.insert("P");
  std::string y_name = conclusion_value_name(d, idx_names, taken);
  int y_sym = syms.fresh();
  TypeTerm target_head = d.name == "Equal" ? t_equal() : t_data(d.name);
  std::vector<TypeTerm> papp;
  if (!mono)
    for (auto& a : idx_terms) papp.push_back(a);
  papp.push_back(t_var(y_sym, y_name));
  TypeTerm conclusion = t_app(ctx.p, std::move(papp));
  conclusion = t_pi(y_name, y_sym, t_app(target_head, idx_terms), std::move(conclusion));
  if (!mono)
    for (int i = d.arity - 1; i >= 0; --i)
      conclusion = t_pi(idx_names[static_cast<std::size_t>(i)],
                        idx_syms[static_cast<std::size_t>(i)], t_set(), std::move(conclusion));

  TypeTerm stmt = std::move(conclusion);
  ctx.outer_types = idx_terms;
  std::vector<std::pair<std::string, TypeTerm>> hyps;
  {
    // Collect structural hypotheses (for the record) and inline them.
    std::vector<TypeTerm> bodies;
    for (const auto& c : d.ctors) {
      CtorScope s = make_ctor_scope(d, c, syms, avoid);
      bodies.push_back(build_hyp_body(d, c, s, ctx, syms));
    }
    for (std::size_t i = bodies.size(); i-- > 0;) {
      hyps.emplace_back(hyp_name(d.ctors[i].name), TypeTerm{});
      stmt = t_arr(bodies[i], std::move(stmt));
    }
    std::reverse(hyps.begin(), hyps.end());
    // Standalone copies for the hypotheses list.
    for (std::size_t i = 0; i < d.ctors.size(); ++i) {
      SymGen hs;
      int hp = hs.fresh();
      HypCtx hc;
      hc.mono = mono;
      hc.deep = false;
      hc.p = t_var(hp, "P");
      CtorScope s2 = make_ctor_scope(d, d.ctors[i], hs, avoid);
      if (mono) {
        std::vector<int> osy;
        std::set<std::string> used = avoid;
        for (int k = 0; k < d.arity; ++k) {
          std::string n = canonical_type_var(k, used);
          used.insert(n);
          osy.push_back(hs.fresh());
          hc.outer_types.push_back(t_var(osy.back(), n));
        }
        TypeTerm body = build_hyp_body(d, d.ctors[i], s2, hc, hs);
        body = t_lam("P", hp, t_arr(t_app(t_data(d.name), hc.outer_types), t_set()),
                     std::move(body));
        for (std::size_t k = hc.outer_types.size(); k-- > 0;)
          body = t_lam(hc.outer_types[k].name, osy[k], t_set(), std::move(body));
        hyps[i].second = freeze(body);
      } else {
        TypeTerm body = build_hyp_body(d, d.ctors[i], s2, hc, hs);
        body = t_lam("P", hp, p_signature_poly(d, false, hs), std::move(body));
        hyps[i].second = freeze(body);
      }
    }
  }
  if (!mono) {
    stmt = t_pi("P", p_sym, p_signature_poly(d, false, syms), std::move(stmt));
  } else {
    stmt = t_pi("P", p_sym, t_arr(t_app(t_data(d.name), idx_terms), t_set()), std::move(stmt));
    for (int i = d.arity - 1; i >= 0; --i)
      stmt = t_pi(idx_names[static_cast<std::size_t>(i)], idx_syms[static_cast<std::size_t>(i)],
                  t_set(), std::move(stmt));
  }
  r.statement = freeze(stmt);
  r.hypotheses = std::move(hyps);
  return r;
}

namespace {

// Morphism synthesis for the soundness witness: maps lifting evidence at G^
// to evidence at P, per domain-argument shape.
struct WitnessCtx {
  const DataDecl* d = nullptr;
  const Module* env = nullptr;
  std::string self_name;  // dIndG
  std::vector<std::string> prefix;  // args the recursive call always takes
  bool mono = false;
  // Named-var environments over the clause telescope.
  std::vector<TypeTerm> type_of;
  std::vector<TypeTerm> pred_of;  // deep predicates (Q_A / Q_B named vars)
  int gensym = 0;
};

SelfPred p_style(const WitnessCtx& ctx) {
  SelfPred sp;
  sp.head = t_namedvar("P");
  sp.with_types = !ctx.mono;
  sp.with_lifts = !ctx.mono;
  return sp;
}

SelfPred g_style(const WitnessCtx& ctx) {
  return SelfPred{t_lift(ctx.d->name), true, true};
}

const TypeExpr& shape_expr(const ShapeF& s) { return s.type; }

std::vector<WitnessTerm> self_prefix(const WitnessCtx& ctx) {
  std::vector<WitnessTerm> out;
  for (const auto& p : ctx.prefix) out.push_back(w_var(p));
  return out;
}

// Partial recursive call: dIndG P cc.. <instance types> <instance liftings>,
// a PredMap from the G^-lifting to the P-lifting at that instance.
WitnessTerm partial_self(const WitnessCtx& ctx, const std::vector<TypeExpr>& inst) {
  WitnessTerm self;
  self.kind = WitKind::SelfCall;
  self.name = ctx.self_name;
  self.kids = self_prefix(ctx);
  if (!ctx.mono) {
    for (const auto& a : inst) self.kids.push_back(w_type(type_term(a, ctx.type_of)));
    SelfPred sp = p_style(ctx);
    for (const auto& a : inst)
      self.kids.push_back(
          w_type(lift_term(a, ctx.d->name, sp, ctx.type_of, ctx.pred_of)));
  }
  return self;
}

WitnessTerm shape_morph(const WitnessCtx& ctx, const ShapeF& sh, WitnessCtx& mctx);

WitnessTerm identity_morph_w(WitnessCtx& ctx) {
  WitnessTerm lam;
  lam.kind = WitKind::Lam;
  std::string x = "x" + std::to_string(ctx.gensym), u = "u" + std::to_string(ctx.gensym);
  ++ctx.gensym;
  lam.kids = {w_var(x), w_var(u), w_var(u)};
  return lam;
}

WitnessTerm shape_morph(const WitnessCtx& ctx0, const ShapeF& sh, WitnessCtx& ctx) {
  switch (sh.kind) {
    case ShapeF::Kind::Rec:
      return partial_self(ctx0, sh.rec_args);
    case ShapeF::Kind::Const:
      return identity_morph_w(ctx);
    case ShapeF::Kind::Nested: {
      WitnessTerm call;
      call.kind = WitKind::MapCall;
      call.name = lift_map_name(sh.nested_head);
      // liftHMap <types> <src liftings> <tgt liftings> <morphisms>
      SelfPred gsp = g_style(ctx0);
      SelfPred psp = p_style(ctx0);
      // The child type expressions live in sh.children as shapes; rebuild the
      // type arguments from the shapes' underlying exprs.
      for (const auto& ch : sh.children)
        call.kids.push_back(w_type(type_term(shape_expr(ch), ctx0.type_of)));
      for (const auto& ch : sh.children)
        call.kids.push_back(w_type(
            lift_term(shape_expr(ch), ctx0.d->name, gsp, ctx0.type_of, ctx0.pred_of)));
      for (const auto& ch : sh.children)
        call.kids.push_back(w_type(
            lift_term(shape_expr(ch), ctx0.d->name, psp, ctx0.type_of, ctx0.pred_of)));
      for (const auto& ch : sh.children) call.kids.push_back(shape_morph(ctx0, ch, ctx));
      return call;
    }
    case ShapeF::Kind::Product:
    case ShapeF::Kind::Sum: {
      std::string x1 = "x" + std::to_string(ctx.gensym), u1 = "u" + std::to_string(ctx.gensym);
      ++ctx.gensym;
      std::string x2 = "x" + std::to_string(ctx.gensym), u2 = "u" + std::to_string(ctx.gensym);
      ++ctx.gensym;
      WitnessTerm lm = shape_morph(ctx0, sh.children[0], ctx);
      WitnessTerm rm = shape_morph(ctx0, sh.children[1], ctx);
      WitnessTerm lam;
      lam.kind = WitKind::Lam;
      if (sh.kind == ShapeF::Kind::Product) {
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
    case ShapeF::Kind::Arrow: {
      std::string f = "f" + std::to_string(ctx.gensym), u = "u" + std::to_string(ctx.gensym),
                  z = "z" + std::to_string(ctx.gensym), v = "v" + std::to_string(ctx.gensym);
      ++ctx.gensym;
      WitnessTerm cm = shape_morph(ctx0, sh.children[0], ctx);
      WitnessTerm lam;
      lam.kind = WitKind::Lam;
      lam.kids = {w_var(f), w_var(u), w_var(z), w_var(v),
                  w_app(cm, {w_app(w_var(f), {w_var(z)}),
                             w_app(w_var(u), {w_var(z), w_var(v)})})};
      return lam;
    }
  }
  return identity_morph_w(ctx);
}

}  // namespace

WitnessDef synth_witness(const DataDecl& d, const Module& env) {
  reject_truly_nested_gadt(d);
  if (d.classification == DeclClass::TrulyNestedType)
    throw_diag(DiagCode::TrulyNestedType,
               "the soundness witness for truly nested type " + d.name +
                   " needs the functorial framework; only the rule statement is derived",
               d.span);
  require_derivable(d);
  validate_shapes(d, env);
  const bool mono = d.classification == DeclClass::Adt;
  const std::set<std::string> avoid = module_name_avoid(env);

  RuleDef rule = derive_deep_rule(d, env);
  WitnessDef w;
  w.name = witness_name(d.name);
  w.signature = rule.statement;

  std::vector<std::string> idx_param_names, pred_param_names;
  {
    std::set<std::string> used = avoid;
    for (int i = 0; i < d.arity; ++i) {
      idx_param_names.push_back(canonical_type_var(i, used));
      used.insert(idx_param_names.back());
    }
    for (int i = 0; i < d.arity; ++i)
      pred_param_names.push_back(d.arity == 1 ? "Q" : "Q_" + idx_param_names[static_cast<std::size_t>(i)]);
  }
  if (mono) {
    for (const auto& n : idx_param_names) w.params.push_back(n);
    w.params.push_back("P");
    for (const auto& n : pred_param_names) w.params.push_back(n);
  } else {
    w.params.push_back("P");
  }
  for (const auto& c : d.ctors) w.params.push_back(hyp_param_name(c.name));

  const LiftingDef lifting = derive_data_lifting(d, env);

  for (std::size_t ci = 0; ci < d.ctors.size(); ++ci) {
    const ConstructorDecl& c = d.ctors[ci];
    SymGen syms;
    CtorScope s = make_ctor_scope(d, c, syms, avoid);
    WitnessClause cl;
    cl.ctor = c.name;
    if (!mono) {
      for (std::size_t k = 0; k < c.ret_indices.size(); ++k)
        cl.index_pats.push_back(
            s.vars[static_cast<std::size_t>(s.ret_var[k])].name);
      for (const auto& p : s.index_preds) cl.pred_pats.push_back(p.name);
    }
    for (int b : s.binder_vars) cl.ctor_args.push_back(s.vars[static_cast<std::size_t>(b)].name);
    for (const auto& a : s.args) cl.ctor_args.push_back(a.name);

    WitnessCtx ctx;
    ctx.d = &d;
    ctx.env = &env;
    ctx.self_name = w.name;
    ctx.prefix = w.params;
    ctx.mono = mono;
    ctx.type_of.resize(c.vars.size());
    ctx.pred_of.resize(c.vars.size());
    std::vector<bool> is_index(c.vars.size(), false);
    std::vector<int> ret_pos_of(c.vars.size(), -1);
    for (std::size_t k = 0; k < c.ret_indices.size(); ++k) {
      std::size_t v = static_cast<std::size_t>(c.ret_indices[k].var);
      is_index[v] = true;
      if (ret_pos_of[v] < 0) ret_pos_of[v] = static_cast<int>(k);
    }
    for (std::size_t v = 0; v < c.vars.size(); ++v) {
      int canon = s.canonical_of[v];
      std::string vn = s.vars[static_cast<std::size_t>(canon)].name;
      if (mono && is_index[v])
        vn = idx_param_names[static_cast<std::size_t>(ret_pos_of[v])];  // shared outer instance
      ctx.type_of[v] = t_namedvar(vn);
    }
    for (std::size_t k = 0; k < c.ret_indices.size(); ++k) {
      std::size_t v = static_cast<std::size_t>(c.ret_indices[k].var);
      ctx.pred_of[v] = mono ? t_namedvar(pred_param_names[k])
                            : t_namedvar(s.index_preds[k].name);
    }
    for (std::size_t bi = 0; bi < s.binder_vars.size(); ++bi)
      for (std::size_t v = 0; v < c.vars.size(); ++v)
        if (s.canonical_of[v] == s.binder_vars[bi] && !is_index[v])
          ctx.pred_of[v] = t_namedvar(s.binder_preds[bi].name);

    // Evidence pattern mirrors the lifting clause: existential predicates,
    // then one name per surviving conjunct.
    std::set<std::string> taken(avoid.begin(), avoid.end());
    for (const auto& p : w.params) taken.insert(p);
    for (const auto& a : cl.ctor_args) taken.insert(a);
    for (const auto& p : cl.index_pats) taken.insert(p);
    for (const auto& p : cl.pred_pats) taken.insert(p);
    std::vector<std::string> ev;
    for (const auto& bp : s.binder_preds) {
      ev.push_back(bp.name);
      taken.insert(bp.name);
    }
    bool direct = false;
    {
      std::set<int> seen;
      for (const auto& r : c.ret_indices)
        if (r.kind == TypeKind::Var && !seen.insert(r.var).second) direct = true;
    }
    std::vector<std::string> constraint_ev;
    if (direct) {
      constraint_ev.push_back("liftE");
      ev.push_back("liftE");
      taken.insert("liftE");
    }
    for (std::size_t qi = 0; qi < c.constraints.size(); ++qi) {
      std::string n = qi == 0 ? "liftE" : "liftE" + std::string(qi, '\'');
      while (taken.count(n)) n += "'";
      taken.insert(n);
      constraint_ev.push_back(n);
      ev.push_back(n);
    }
    SelfPred gsp = g_style(ctx);
    std::vector<std::string> arg_ev(c.args.size());
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      if (c.is_constraint_arg(i)) continue;
      if (is_literal_ktop(lift_term(c.args[i], d.name, gsp, ctx.type_of, ctx.pred_of)))
        continue;  // erased conjunct
      arg_ev[i] = lift_name_for(s.args[i].name, taken);
      ev.push_back(arg_ev[i]);
    }
    cl.evidence = ev;
    cl.evidence_tuple = ev.size() > 1;
    cl.evidence_tt = ev.empty();

    // Body: the hypothesis applied through the telescope, with premise
    // evidence routed through the synthesized morphisms.
    std::vector<WitnessTerm> hargs;
    if (!mono) {
      for (std::size_t k = 0; k < c.ret_indices.size(); ++k) {
        bool dup = false;
        for (std::size_t k2 = 0; k2 < k; ++k2)
          if (s.ret_var[k2] == s.ret_var[k]) dup = true;
        if (!dup) hargs.push_back(w_var(s.vars[static_cast<std::size_t>(s.ret_var[k])].name));
      }
    }
    for (int b : s.binder_vars)
      hargs.push_back(w_var(s.vars[static_cast<std::size_t>(b)].name));
    if (!mono)
      for (const auto& p : s.index_preds) hargs.push_back(w_var(p.name));
    for (const auto& bp : s.binder_preds) hargs.push_back(w_var(bp.name));
    for (std::size_t i : s.hyp_arg_order) hargs.push_back(w_var(s.args[i].name));
    for (const auto& n : constraint_ev) hargs.push_back(w_var(n));

    for (std::size_t i : s.hyp_arg_order) {
      if (c.is_constraint_arg(i)) continue;
      if (arg_ev[i].empty()) continue;
      ShapeF sh = shape_of(c.args[i], d.name, env, false);
      std::string pn = "p_" + suffix_of(s.args[i].name);
      while (taken.count(pn)) pn += "'";
      switch (sh.kind) {
        case ShapeF::Kind::Const:
          hargs.push_back(w_var(arg_ev[i]));
          break;
        case ShapeF::Kind::Rec: {
          WitnessTerm call = partial_self(ctx, sh.rec_args);
          call.kids.push_back(w_var(s.args[i].name));
          call.kids.push_back(w_var(arg_ev[i]));
          call.self_scrutinee = s.args[i].name;
          SelfPred psp = p_style(ctx);
          std::vector<TypeTerm> ann_args;
          if (!mono) {
            for (const auto& a : sh.rec_args) ann_args.push_back(type_term(a, ctx.type_of));
            for (const auto& a : sh.rec_args)
              ann_args.push_back(lift_term(a, d.name, psp, ctx.type_of, ctx.pred_of));
          }
          ann_args.push_back(t_namedvar(s.args[i].name));
          taken.insert(pn);
          cl.wheres.push_back(WhereBinding{pn, std::move(call),
                                           t_app(t_namedvar("P"), std::move(ann_args))});
          hargs.push_back(w_var(pn));
          break;
        }
        case ShapeF::Kind::Nested: {
          // Morphisms per child, then the lift map applied to the argument.
          WitnessCtx mctx = ctx;
          WitnessTerm call;
          call.kind = WitKind::MapCall;
          call.name = lift_map_name(sh.nested_head);
          SelfPred psp = p_style(ctx);
          const TypeExpr& t = c.args[i];
          for (const auto& a : t.args) call.kids.push_back(w_type(type_term(a, ctx.type_of)));
          for (const auto& a : t.args)
            call.kids.push_back(w_type(lift_term(a, d.name, gsp, ctx.type_of, ctx.pred_of)));
          for (const auto& a : t.args)
            call.kids.push_back(w_type(lift_term(a, d.name, psp, ctx.type_of, ctx.pred_of)));
          for (std::size_t chi = 0; chi < sh.children.size(); ++chi) {
            WitnessTerm m = shape_morph(ctx, sh.children[chi], mctx);
            if (m.kind == WitKind::SelfCall) {
              std::string mn = "m_" + suffix_of(s.args[i].name);
              while (taken.count(mn)) mn += "'";
              taken.insert(mn);
              // PredMap annotation for the partial recursive call.
              const TypeExpr& chexpr = t.args[chi];
              TypeTerm ann = t_predmap(
                  type_term(chexpr, ctx.type_of),
                  lift_term(chexpr, d.name, gsp, ctx.type_of, ctx.pred_of),
                  lift_term(chexpr, d.name, psp, ctx.type_of, ctx.pred_of));
              cl.wheres.push_back(WhereBinding{mn, std::move(m), std::move(ann)});
              call.kids.push_back(w_var(mn));
            } else {
              call.kids.push_back(std::move(m));
            }
          }
          call.kids.push_back(w_var(s.args[i].name));
          call.kids.push_back(w_var(arg_ev[i]));
          std::vector<TypeTerm> ann_args;
          ann_args.push_back(lift_term(t, d.name, psp, ctx.type_of, ctx.pred_of));
          taken.insert(pn);
          cl.wheres.push_back(WhereBinding{
              pn, std::move(call), t_app(std::move(ann_args[0]), {t_namedvar(s.args[i].name)})});
          hargs.push_back(w_var(pn));
          break;
        }
        default: {
          WitnessCtx mctx = ctx;
          WitnessTerm m = shape_morph(ctx, sh, mctx);
          WitnessTerm applied = w_app(std::move(m), {w_var(s.args[i].name), w_var(arg_ev[i])});
          taken.insert(pn);
          cl.wheres.push_back(WhereBinding{pn, std::move(applied), {}});
          hargs.push_back(w_var(pn));
          break;
        }
      }
    }
    cl.body = w_hyp(hyp_param_name(c.name), std::move(hargs));
    w.clauses.push_back(std::move(cl));
  }
  return w;
}


namespace {

std::string constraint_head_name(const TypeExpr& k) {
  switch (k.kind) {
    case TypeKind::Product: return "Pair";
    case TypeKind::Sum: return "Sum";
    case TypeKind::Arrow: return "Arr";
    case TypeKind::Unit: return "Unit";
    case TypeKind::Data: return k.name;
    case TypeKind::Var: return "";
  }
  return "";
}

struct KtCtx {
  const DataDecl* d = nullptr;
  const Module* env = nullptr;
  const ConstructorDecl* ctor = nullptr;
  std::string self_kt;             // "Seq^KT"
  std::vector<TypeTerm> type_of;   // named vars per telescope var
  std::vector<TypeTerm> ktop_of;   // KTop(type) per telescope var
  KtBundle* bundle = nullptr;
  std::set<std::string>* postulate_names = nullptr;
  int gensym = 0;
};

std::string kt_name(const std::string& data) { return data + "^KT"; }

void add_postulate(KtCtx& ctx, const std::string& display_name, TypeTerm sig) {
  if (ctx.postulate_names->count(display_name)) return;
  ctx.postulate_names->insert(display_name);
  ctx.bundle->postulates.push_back(PostulateSig{display_name, std::move(sig)});
}

// Postulated isomorphism Equal^<Head>KT for one constraint: the lifting of
// K_top along an equality evidence whose right side is the polynomial K.
void postulate_for(KtCtx& ctx, const TypeExpr& k_rhs, const TypeExpr& lhs_ty) {
  const ConstructorDecl& c = *ctx.ctor;
  std::string head = constraint_head_name(k_rhs);
  if (head.empty()) return;
  std::string name = "Equal^" + head + "KT";
  if (ctx.postulate_names->count(name)) return;
  // forall (vars : Set) (e : Equal LHS K) -> Equal^ LHS K KTop K^[KTop] e
  SymGen syms;
  std::set<int> used_vars;
  struct {
    void walk(const TypeExpr& t, std::set<int>& out) {
      if (t.kind == TypeKind::Var) out.insert(t.var);
      for (const auto& a : t.args) walk(a, out);
    }
  } vars;
  vars.walk(k_rhs, used_vars);
  vars.walk(lhs_ty, used_vars);
  std::map<int, int> symof;
  std::map<int, std::string> nameof;
  std::set<std::string> avoid;
  int i = 0;
  for (int v : used_vars) {
    symof[v] = syms.fresh();
    nameof[v] = canonical_type_var(i++, avoid);
    avoid.insert(nameof[v]);
  }
  std::vector<TypeTerm> type_env(c.vars.size(), t_top());
  std::vector<TypeTerm> ktop_env(c.vars.size(), t_top());
  for (int v : used_vars) {
    type_env[static_cast<std::size_t>(v)] = t_var(symof[v], nameof[v]);
    ktop_env[static_cast<std::size_t>(v)] = t_ktop(t_var(symof[v], nameof[v]));
  }
  SelfPred sp{t_lift(ctx.d->name), true, true};
  TypeTerm lhs_term = type_term(lhs_ty, type_env);
  TypeTerm k_term = type_term(k_rhs, type_env);
  TypeTerm k_lift = lift_term(k_rhs, ctx.d->name, sp, type_env, ktop_env);
  int esym = syms.fresh();
  TypeTerm body = t_app(t_lift("Equal"), {lhs_term, k_term, t_ktop(lhs_term), k_lift,
                                          t_var(esym, "e")});
  body = t_pi("e", esym, t_app(t_equal(), {lhs_term, k_term}), std::move(body));
  for (auto it = symof.rbegin(); it != symof.rend(); ++it)
    body = t_pi(nameof[it->first], it->second, t_set(), std::move(body));
  add_postulate(ctx, name, freeze(body));
}

WitnessTerm kt_of_type(KtCtx& ctx, const TypeExpr& t, const WitnessTerm& value);

// K_top witness for one surviving conjunct of the lifting clause.
WitnessTerm kt_of_type(KtCtx& ctx, const TypeExpr& t, const WitnessTerm& value) {
  switch (t.kind) {
    case TypeKind::Var:
    case TypeKind::Unit:
      return w_ctor("tt");
    case TypeKind::Data: {
      if (t.name == ctx.d->name) {
        // Recursive position: plain call when the instance lifting is K_top,
        // otherwise bridge through G^EqualMap with the head postulate.
        SelfPred sp{t_lift(ctx.d->name), true, true};
        bool trivial = true;
        for (const auto& a : t.args)
          if (!is_literal_ktop(lift_term(a, ctx.d->name, sp, ctx.type_of, ctx.ktop_of)))
            trivial = false;
        WitnessTerm self;
        self.kind = WitKind::SelfCall;
        self.name = ctx.self_kt;
        for (const auto& a : t.args) self.kids.push_back(w_type(type_term(a, ctx.type_of)));
        self.kids.push_back(value);
        if (value.kind == WitKind::Var) self.self_scrutinee = value.name;
        if (trivial) return self;
        ctx.bundle->needs_equal_map = true;
        const TypeExpr& inst = t.args[0];
        // Instance lifting at K_top (e.g. Arr^ B A KTop KTop).
        TypeTerm inst_lift = lift_term(inst, ctx.d->name, sp, ctx.type_of, ctx.ktop_of);
        std::string head = constraint_head_name(inst);
        if (!head.empty()) postulate_for(ctx, inst, inst);
        WitnessTerm bridge;
        bridge.kind = WitKind::EqMapRef;
        bridge.name = ctx.d->name;
        bridge.kids.push_back(w_type(t_ktop(type_term(inst, ctx.type_of))));
        bridge.kids.push_back(w_type(inst_lift));
        WitnessTerm post;
        post.kind = WitKind::PostRef;
        post.name = "Equal^" + head + "KT";
        bridge.kids.push_back(post);
        bridge.kids.push_back(value);
        bridge.kids.push_back(self);
        return bridge;
      }
      if (t.args.empty()) return w_ctor("tt");
      if (occurs_data(t, ctx.d->name)) {
        // Nested position: map the element KT proofs over the base KT proof.
        WitnessTerm call;
        call.kind = WitKind::MapCall;
        call.name = lift_map_name(t.name);
        SelfPred sp{t_lift(ctx.d->name), true, true};
        for (const auto& a : t.args) call.kids.push_back(w_type(type_term(a, ctx.type_of)));
        for (const auto& a : t.args)
          call.kids.push_back(w_type(t_ktop(type_term(a, ctx.type_of))));
        for (const auto& a : t.args)
          call.kids.push_back(
              w_type(lift_term(a, ctx.d->name, sp, ctx.type_of, ctx.ktop_of)));
        for (const auto& a : t.args) {
          // morphism: \x tt -> <child KT>
          std::string x = "t" + std::to_string(ctx.gensym++);
          WitnessTerm lam;
          lam.kind = WitKind::Lam;
          lam.kids = {w_var(x), w_ctor("tt"), kt_of_type(ctx, a, w_var(x))};
          call.kids.push_back(lam);
        }
        call.kids.push_back(value);
        WitnessTerm base;
        base.kind = WitKind::LiftKt;
        base.name = t.name;
        for (const auto& a : t.args) base.kids.push_back(w_type(type_term(a, ctx.type_of)));
        base.kids.push_back(value);
        call.kids.push_back(base);
        return call;
      }
      // Foreign constant position: delegate to the analogous ^KT function.
      WitnessTerm callk;
      callk.kind = WitKind::LiftKt;
      callk.name = t.name;
      for (const auto& a : t.args) callk.kids.push_back(w_type(type_term(a, ctx.type_of)));
      callk.kids.push_back(value);
      return callk;
    }
    case TypeKind::Product:
    case TypeKind::Sum:
    case TypeKind::Arrow: {
      // Structural carriers: reference the analogous builtin ^KT helper.
      WitnessTerm callk;
      callk.kind = WitKind::LiftKt;
      callk.name = t.kind == TypeKind::Product ? "Pair" : t.kind == TypeKind::Sum ? "Sum" : "Arr";
      callk.kids.push_back(w_type(type_term(t.args[0], ctx.type_of)));
      callk.kids.push_back(w_type(type_term(t.args[1], ctx.type_of)));
      callk.kids.push_back(value);
      return callk;
    }
  }
  return w_ctor("tt");
}

}  // namespace

KtBundle derive_kt_witness(const DataDecl& d, const Module& env) {
  reject_truly_nested_gadt(d);
  require_derivable(d);
  validate_shapes(d, env);
  const std::set<std::string> avoid = module_name_avoid(env);

  KtBundle bundle;
  std::set<std::string> postulate_names;
  WitnessDef w;
  w.name = kt_name(d.name);
  bundle.equal_map_name = d.name;

  // Signature: forall (A.. : Set) (y : G A..) -> G^ A.. KTop.. y
  {
    SymGen syms;
    std::vector<int> sy;
    std::vector<std::string> names;
    std::set<std::string> used = avoid;
    for (int i = 0; i < d.arity; ++i) {
      names.push_back(canonical_type_var(i, used));
      used.insert(names.back());
      sy.push_back(syms.fresh());
    }
    std::vector<TypeTerm> idx;
    for (int i = 0; i < d.arity; ++i)
      idx.push_back(t_var(sy[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(i)]));
    std::string yn = conclusion_value_name(d, names, used);
    int ysym = syms.fresh();
    TypeTerm head = d.name == "Equal" ? t_equal() : t_data(d.name);
    std::vector<TypeTerm> gapp = idx;
    for (const auto& a : idx) gapp.push_back(t_ktop(a));
    gapp.push_back(t_var(ysym, yn));
    TypeTerm core = t_app(t_lift(d.name), std::move(gapp));
    core = t_pi(yn, ysym, t_app(head, idx), std::move(core));
    for (int i = d.arity - 1; i >= 0; --i)
      core = t_pi(names[static_cast<std::size_t>(i)], sy[static_cast<std::size_t>(i)], t_set(),
                  std::move(core));
    w.signature = freeze(core);
  }

  // G^EqualMap skeleton signature (emitted only when a recursive position
  // sits at a structured instance).
  {
    SymGen syms;
    int a = syms.fresh(), q = syms.fresh(), q2 = syms.fresh();
    TypeTerm core = t_predmap(
        t_app(d.name == "Equal" ? t_equal() : t_data(d.name), {t_var(a, "A")}),
        t_app(t_lift(d.name), {t_var(a, "A"), t_var(q, "Q")}),
        t_app(t_lift(d.name), {t_var(a, "A"), t_var(q2, "Q'")}));
    core = t_arr(t_app(t_lift("Equal"), {t_var(a, "A"), t_var(a, "A"), t_var(q, "Q"),
                                         t_var(q2, "Q'"), t_ctor("refl")}),
                 std::move(core));
    core = t_pi("Q'", q2, t_arr(t_var(a, "A"), t_set()), std::move(core));
    core = t_pi("Q", q, t_arr(t_var(a, "A"), t_set()), std::move(core));
    core = t_pi("A", a, t_set(), std::move(core));
    bundle.equal_map_signature = freeze(core);
  }

  for (const auto& c : d.ctors) {
    SymGen syms;
    CtorScope s = make_ctor_scope(d, c, syms, avoid);
    WitnessClause cl;
    cl.ctor = c.name;
    for (std::size_t k = 0; k < c.ret_indices.size(); ++k)
      cl.index_pats.push_back(s.vars[static_cast<std::size_t>(s.ret_var[k])].name);
    for (int b : s.binder_vars) cl.ctor_args.push_back(s.vars[static_cast<std::size_t>(b)].name);
    for (const auto& a : s.args) cl.ctor_args.push_back(a.name);

    KtCtx ctx;
    ctx.d = &d;
    ctx.env = &env;
    ctx.ctor = &c;
    ctx.self_kt = w.name;
    ctx.bundle = &bundle;
    ctx.postulate_names = &postulate_names;
    ctx.type_of.resize(c.vars.size());
    ctx.ktop_of.resize(c.vars.size());
    for (std::size_t v = 0; v < c.vars.size(); ++v) {
      int canon = s.canonical_of[v];
      ctx.type_of[v] = t_namedvar(s.vars[static_cast<std::size_t>(canon)].name);
      ctx.ktop_of[v] = t_ktop(ctx.type_of[v]);
    }

    bool direct = false;
    {
      std::set<int> seen;
      for (const auto& r : c.ret_indices)
        if (r.kind == TypeKind::Var && !seen.insert(r.var).second) direct = true;
    }

    std::vector<WitnessTerm> parts;
    for (std::size_t bi = 0; bi < s.binder_preds.size(); ++bi) {
      WitnessTerm kt;
      kt.kind = WitKind::KTopW;
      parts.push_back(kt);
    }
    SelfPred sp{t_lift(d.name), true, true};
    if (direct) {
      // Equal's single clause: \a -> refl, no postulates.
      WitnessTerm lam;
      lam.kind = WitKind::Lam;
      lam.kids = {w_var("a"), w_ctor("refl")};
      parts.push_back(lam);
    }
    for (const auto& q : c.constraints) {
      TypeTerm k_lift = lift_term(q.rhs, d.name, sp, ctx.type_of, ctx.ktop_of);
      if (is_literal_ktop(k_lift)) {
        WitnessTerm lam;
        lam.kind = WitKind::Lam;
        lam.kids = {w_var("a"), w_ctor("refl")};
        parts.push_back(lam);
      } else {
        postulate_for(ctx, q.rhs, c.ret_indices[static_cast<std::size_t>(q.index_pos)]);
        WitnessTerm post;
        post.kind = WitKind::PostRef;
        post.name = "Equal^" + constraint_head_name(q.rhs) + "KT";
        parts.push_back(post);
      }
    }
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      if (c.is_constraint_arg(i)) continue;
      if (is_literal_ktop(lift_term(c.args[i], d.name, sp, ctx.type_of, ctx.ktop_of)) &&
          !(c.args[i].kind == TypeKind::Var))
        continue;  // erased conjunct
      parts.push_back(kt_of_type(ctx, c.args[i], w_var(s.args[i].name)));
    }
    if (parts.empty()) {
      cl.body = w_ctor("tt");
    } else if (parts.size() == 1) {
      cl.body = std::move(parts[0]);
    } else {
      cl.body = w_tuple(std::move(parts));
    }
    w.clauses.push_back(std::move(cl));
  }
  bundle.witness = std::move(w);
  return bundle;
}

WitnessCheck check_witness(const WitnessDef& w, const DataDecl& d) {
  WitnessCheck out;
  // Clause coverage: one clause per constructor, in order.
  out.clause_coverage = w.clauses.size() == d.ctors.size();
  for (std::size_t i = 0; i < w.clauses.size() && i < d.ctors.size(); ++i)
    if (w.clauses[i].ctor != d.ctors[i].name) out.clause_coverage = false;
  if (!out.clause_coverage) out.violations.push_back("clause coverage mismatch");

  out.well_scoped = true;
  out.structural_descent = true;
  for (const auto& cl : w.clauses) {
    std::set<std::string> scope(w.params.begin(), w.params.end());
    for (const auto& n : cl.index_pats) scope.insert(n);
    for (const auto& n : cl.pred_pats) scope.insert(n);
    for (const auto& n : cl.ctor_args) scope.insert(n);
    for (const auto& n : cl.evidence) scope.insert(n);
    for (const auto& wb : cl.wheres) scope.insert(wb.name);
    std::set<std::string> pattern_vars(cl.ctor_args.begin(), cl.ctor_args.end());

    std::function<void(const WitnessTerm&, std::set<std::string>)> walk =
        [&](const WitnessTerm& t, std::set<std::string> local) {
          switch (t.kind) {
            case WitKind::Var:
              if (!scope.count(t.name) && !local.count(t.name)) {
                out.well_scoped = false;
                out.violations.push_back("unbound " + t.name + " in clause " + cl.ctor);
              }
              return;
            case WitKind::Lam: {
              std::set<std::string> inner = local;
              std::function<void(const WitnessTerm&)> bindpat = [&](const WitnessTerm& p) {
                if (p.kind == WitKind::Var) inner.insert(p.name);
                for (const auto& k : p.kids) bindpat(k);
              };
              for (std::size_t i = 0; i + 1 < t.kids.size(); ++i) bindpat(t.kids[i]);
              walk(t.kids.back(), inner);
              return;
            }
            case WitKind::CaseW: {
              walk(t.kids[0], local);
              for (std::size_t i = 1; i + 1 < t.kids.size(); i += 2) {
                std::set<std::string> inner = local;
                std::function<void(const WitnessTerm&)> bindpat = [&](const WitnessTerm& p) {
                  if (p.kind == WitKind::Var) inner.insert(p.name);
                  for (const auto& k : p.kids) bindpat(k);
                };
                bindpat(t.kids[i]);
                walk(t.kids[i + 1], inner);
              }
              return;
            }
            case WitKind::SelfCall: {
              // A fully applied recursive call must consume a strict pattern
              // subterm; partial applications are guarded by map functors.
              if (!t.self_scrutinee.empty() && !pattern_vars.count(t.self_scrutinee)) {
                out.structural_descent = false;
                out.violations.push_back("self call in clause " + cl.ctor +
                                         " does not consume a pattern subterm");
              }
              for (const auto& k : t.kids) walk(k, local);
              return;
            }
            default:
              for (const auto& k : t.kids) walk(k, local);
              return;
          }
        };
    for (const auto& wb : cl.wheres) walk(wb.value, {});
    walk(cl.body, {});
  }
  return out;
}

}  // namespace deepind
