#include "derive_common.hpp"

#include <algorithm>
#include <cctype>

namespace deepind {
namespace derive {

std::string lower_initial(const std::string& s) {
  if (s.empty()) return "x";
  std::string out = s;
  out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  return out;
}

std::string canonical_type_var(int i, const std::set<std::string>& avoid) {
  for (int round = 0;; ++round) {
    int n = i + round;
    std::string cand(1, static_cast<char>('A' + n % 26));
    if (n / 26 > 0) cand += std::to_string(n / 26);
    if (!avoid.count(cand)) return cand;
  }
}

namespace {

void collect_vars(const TypeExpr& t, std::vector<int>& order, std::set<int>& seen) {
  if (t.kind == TypeKind::Var) {
    if (!seen.count(t.var)) {
      seen.insert(t.var);
      order.push_back(t.var);
    }
    return;
  }
  for (const auto& a : t.args) collect_vars(a, order, seen);
}

}  // namespace

std::string ArgNamer::unique(std::string base) {
  std::string cand = base;
  while (taken_.count(cand)) cand += "'";
  taken_.insert(cand);
  return cand;
}

std::string ArgNamer::name_for(const TypeExpr& t, const std::vector<std::string>& var_names) {
  switch (t.kind) {
    case TypeKind::Var:
      return unique(lower_initial(var_names[static_cast<std::size_t>(t.var)]));
    case TypeKind::Unit:
      return unique("u");
    case TypeKind::Product:
    case TypeKind::Sum:
      return unique("x");
    case TypeKind::Arrow:
      return unique("f");
    case TypeKind::Data: {
      if (t.name == "Equal") {
        std::string n = "e";
        for (int i = 0; i < equal_count_; ++i) n += "'";
        ++equal_count_;
        taken_.insert(n);
        return n;
      }
      std::string base = lower_initial(t.name.substr(0, 1));
      std::vector<int> order;
      std::set<int> seen;
      for (const auto& a : t.args) collect_vars(a, order, seen);
      if (!order.empty()) {
        base += "_";
        for (int v : order) base += var_names[static_cast<std::size_t>(v)];
      }
      return unique(base);
    }
  }
  return unique("x");
}

std::string suffix_of(const std::string& arg_name) {
  auto pos = arg_name.find('_');
  if (pos != std::string::npos && pos + 1 < arg_name.size()) return arg_name.substr(pos + 1);
  std::string s = arg_name;
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string lift_name_for(const std::string& arg_name, std::set<std::string>& taken) {
  std::string base = "lift" + suffix_of(arg_name);
  std::string cand = base;
  while (taken.count(cand)) cand += "'";
  taken.insert(cand);
  return cand;
}

TypeTerm CtorScope::var_term(int canonical) const {
  return t_var(vars[static_cast<std::size_t>(canonical)].sym,
               vars[static_cast<std::size_t>(canonical)].name);
}

TypeTerm CtorScope::arg_term(std::size_t i) const { return t_var(args[i].sym, args[i].name); }

CtorScope make_ctor_scope(const DataDecl& d, const ConstructorDecl& c, SymGen& syms,
                          const std::set<std::string>& avoid) {
  CtorScope s;
  s.ctor = &c;
  s.arity = d.arity;
  const int nvars = static_cast<int>(c.vars.size());
  s.canonical_of.assign(static_cast<std::size_t>(nvars), -1);

  // Return-index vars first (in return order, deduplicated), then the rest.
  std::vector<int> order;
  std::set<int> seen;
  s.ret_var.assign(c.ret_indices.size(), -1);
  for (const auto& r : c.ret_indices) {
    if (r.kind == TypeKind::Var && !seen.count(r.var)) {
      seen.insert(r.var);
      order.push_back(r.var);
    }
  }
  const std::size_t index_count = order.size();
  for (int v = 0; v < nvars; ++v)
    if (!seen.count(v)) {
      seen.insert(v);
      order.push_back(v);
    }

  std::set<std::string> taken = avoid;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::string n = canonical_type_var(static_cast<int>(i), taken);
    taken.insert(n);
    s.canonical_of[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    s.vars.push_back(Bind{syms.fresh(), n});
    if (i < index_count) s.index_vars.push_back(static_cast<int>(i));
    else s.binder_vars.push_back(static_cast<int>(i));
  }
  for (std::size_t k = 0; k < c.ret_indices.size(); ++k)
    if (c.ret_indices[k].kind == TypeKind::Var)
      s.ret_var[k] = s.canonical_of[static_cast<std::size_t>(c.ret_indices[k].var)];

  // Index predicates: one per return position. Q_<carrier> unless carriers
  // repeat, then Q, Q', Q''.
  bool repeated = false;
  {
    std::set<int> carriers;
    for (std::size_t k = 0; k < c.ret_indices.size(); ++k) {
      int v = s.ret_var[k];
      if (v >= 0 && !carriers.insert(v).second) repeated = true;
    }
  }
  for (std::size_t k = 0; k < c.ret_indices.size(); ++k) {
    std::string n;
    if (repeated) {
      n = "Q" + std::string(k, '\'');
    } else if (s.ret_var[k] >= 0) {
      n = "Q_" + s.vars[static_cast<std::size_t>(s.ret_var[k])].name;
    } else {
      n = "Q" + std::to_string(k);
    }
    while (taken.count(n)) n += "'";
    taken.insert(n);
    s.index_preds.push_back(Bind{syms.fresh(), n});
  }
  for (int b : s.binder_vars) {
    std::string n = "Q_" + s.vars[static_cast<std::size_t>(b)].name;
    while (taken.count(n)) n += "'";
    taken.insert(n);
    s.binder_preds.push_back(Bind{syms.fresh(), n});
  }

  // Argument names.
  std::vector<std::string> var_names(static_cast<std::size_t>(nvars));
  for (int v = 0; v < nvars; ++v)
    var_names[static_cast<std::size_t>(v)] =
        s.vars[static_cast<std::size_t>(s.canonical_of[static_cast<std::size_t>(v)])].name;
  ArgNamer namer(taken);
  for (const auto& a : c.args) s.args.push_back(Bind{syms.fresh(), namer.name_for(a, var_names)});

  for (std::size_t i = 0; i < c.args.size(); ++i) {
    bool synth = false;
    for (const auto& q : c.constraints)
      if (q.arg == i && q.synthesized) synth = true;
    if (!synth) s.hyp_arg_order.push_back(i);
  }
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    for (const auto& q : c.constraints)
      if (q.arg == i && q.synthesized) s.hyp_arg_order.push_back(i);
  }
  return s;
}

TypeTerm type_term(const TypeExpr& t, const std::vector<TypeTerm>& type_of_var) {
  switch (t.kind) {
    case TypeKind::Var:
      return type_of_var[static_cast<std::size_t>(t.var)];
    case TypeKind::Unit:
      return TypeTerm{TermKind::DataRef, -1, "Unit", {}};
    case TypeKind::Product:
      return t_prod(type_term(t.args[0], type_of_var), type_term(t.args[1], type_of_var));
    case TypeKind::Sum: {
      TypeTerm s;
      s.kind = TermKind::SumT;
      s.kids = {type_term(t.args[0], type_of_var), type_term(t.args[1], type_of_var)};
      return s;
    }
    case TypeKind::Arrow:
      return t_arr(type_term(t.args[0], type_of_var), type_term(t.args[1], type_of_var));
    case TypeKind::Data: {
      if (t.name == "Equal") {
        return t_app(t_equal(), {type_term(t.args[0], type_of_var),
                                 type_term(t.args[1], type_of_var)});
      }
      std::vector<TypeTerm> args;
      for (const auto& a : t.args) args.push_back(type_term(a, type_of_var));
      return t_app(t_data(t.name), std::move(args));
    }
  }
  return t_top();
}

bool is_literal_ktop(const TypeTerm& t) { return t.kind == TermKind::KTop; }

bool mentions_var_sym(const TypeTerm& t, int sym) {
  if (t.kind == TermKind::Var && t.var == sym) return true;
  for (const auto& k : t.kids)
    if (mentions_var_sym(k, sym)) return true;
  return false;
}

TypeTerm lift_term(const TypeExpr& t, const std::string& self, const SelfPred& sp,
                   const std::vector<TypeTerm>& type_of_var,
                   const std::vector<TypeTerm>& pred_of_var) {
  switch (t.kind) {
    case TypeKind::Var:
      return pred_of_var[static_cast<std::size_t>(t.var)];
    case TypeKind::Unit:
      return t_ktop(TypeTerm{TermKind::DataRef, -1, "Unit", {}});
    case TypeKind::Product:
    case TypeKind::Sum:
    case TypeKind::Arrow: {
      const char* lift = t.kind == TypeKind::Product ? "Pair"
                         : t.kind == TypeKind::Sum   ? "Sum"
                                                     : "Arr";
      return t_app(t_lift(lift), {type_term(t.args[0], type_of_var),
                                  type_term(t.args[1], type_of_var),
                                  lift_term(t.args[0], self, sp, type_of_var, pred_of_var),
                                  lift_term(t.args[1], self, sp, type_of_var, pred_of_var)});
    }
    case TypeKind::Data: {
      std::vector<TypeTerm> types, lifts;
      for (const auto& a : t.args) {
        types.push_back(type_term(a, type_of_var));
        lifts.push_back(lift_term(a, self, sp, type_of_var, pred_of_var));
      }
      if (t.name == self) {
        std::vector<TypeTerm> app_args;
        if (sp.with_types)
          for (auto& x : types) app_args.push_back(x);
        if (sp.with_lifts)
          for (auto& x : lifts) app_args.push_back(x);
        return t_app(sp.head, std::move(app_args));
      }
      if (t.name == "Equal") {
        return t_app(t_lift("Equal"), {types[0], types[1], lifts[0], lifts[1]});
      }
      if (t.args.empty()) {
        // Closed heads (Bool, String, user nullary types) lift to the
        // constantly-top predicate on that carrier.
        return t_ktop(TypeTerm{TermKind::DataRef, -1, t.name, {}});
      }
      std::vector<TypeTerm> app_args;
      for (auto& x : types) app_args.push_back(x);
      for (auto& x : lifts) app_args.push_back(x);
      return t_app(t_lift(t.name), std::move(app_args));
    }
  }
  return t_top();
}

TypeTerm conjunct_term(const TypeExpr& t, const std::string& self, const SelfPred& sp,
                       const std::vector<TypeTerm>& type_of_var,
                       const std::vector<TypeTerm>& pred_of_var, const TypeTerm& value,
                       SymGen& syms, std::vector<int>* pi_syms) {
  if (t.kind == TypeKind::Arrow && occurs_data(t.args[1], self) &&
      !occurs_data(t.args[0], self)) {
    int z = syms.fresh();
    if (pi_syms) pi_syms->push_back(z);
    TypeTerm dom_lift = lift_term(t.args[0], self, sp, type_of_var, pred_of_var);
    TypeTerm inner = conjunct_term(t.args[1], self, sp, type_of_var, pred_of_var,
                                   t_app(value, {t_var(z, "z")}), syms, pi_syms);
    TypeTerm body = is_literal_ktop(dom_lift)
                        ? inner
                        : t_arr(t_app(dom_lift, {t_var(z, "z")}), inner);
    return t_pi("z", z, type_term(t.args[0], type_of_var), body);
  }
  TypeTerm pred = lift_term(t, self, sp, type_of_var, pred_of_var);
  if (is_literal_ktop(pred)) return t_top();
  return t_app(pred, {value});
}

TypeTerm fold_prod(std::vector<TypeTerm> conjuncts) {
  std::vector<TypeTerm> keep;
  for (auto& c : conjuncts)
    if (c.kind != TermKind::Top) keep.push_back(std::move(c));
  if (keep.empty()) return t_top();
  TypeTerm out = keep.back();
  for (std::size_t i = keep.size() - 1; i-- > 0;) out = t_prod(keep[i], std::move(out));
  return out;
}

std::string hyp_name(const std::string& ctor) {
  std::string n = ctor;
  if (!n.empty()) n[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(n[0])));
  return "dInd" + n;
}
std::string hyp_param_name(const std::string& ctor) { return "c" + ctor; }
std::string witness_name(const std::string& data) { return "dInd" + data; }
std::string structural_name(const std::string& data) { return "ind" + data; }

std::set<std::string> module_name_avoid(const Module& env) {
  std::set<std::string> avoid = {"Equal", "List", "Bool", "String", "Unit", "Set", "Top", "KTop"};
  for (const auto& d : env.decls) avoid.insert(d.name);
  return avoid;
}

}  // namespace derive
}  // namespace deepind
