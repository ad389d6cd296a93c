#include "deepind/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace deepind {

TypeTerm t_pi(std::string hint, int sym, TypeTerm domain, TypeTerm body) {
  TypeTerm t;
  t.kind = TermKind::Pi;
  t.name = std::move(hint);
  t.var = sym;
  t.kids = {std::move(domain), std::move(body)};
  return t;
}
TypeTerm t_sig(std::string hint, int sym, TypeTerm domain, TypeTerm body) {
  TypeTerm t = t_pi(std::move(hint), sym, std::move(domain), std::move(body));
  t.kind = TermKind::Sig;
  return t;
}
TypeTerm t_lam(std::string hint, int sym, TypeTerm domain, TypeTerm body) {
  TypeTerm t = t_pi(std::move(hint), sym, std::move(domain), std::move(body));
  t.kind = TermKind::Lam;
  return t;
}
TypeTerm t_arr(TypeTerm l, TypeTerm r) {
  TypeTerm t;
  t.kind = TermKind::ArrT;
  t.kids = {std::move(l), std::move(r)};
  return t;
}
TypeTerm t_prod(TypeTerm l, TypeTerm r) {
  TypeTerm t;
  t.kind = TermKind::Prod;
  t.kids = {std::move(l), std::move(r)};
  return t;
}
TypeTerm t_app(TypeTerm head, std::vector<TypeTerm> args) {
  if (args.empty()) return head;
  TypeTerm t;
  t.kind = TermKind::App;
  if (head.kind == TermKind::App) {
    t.kids = std::move(head.kids);
  } else {
    t.kids.push_back(std::move(head));
  }
  for (auto& a : args) t.kids.push_back(std::move(a));
  return t;
}
TypeTerm t_var(int sym, std::string hint) {
  TypeTerm t;
  t.kind = TermKind::Var;
  t.var = sym;
  t.name = std::move(hint);
  return t;
}
TypeTerm t_namedvar(std::string name) {
  TypeTerm t;
  t.kind = TermKind::Var;
  t.var = kNamedVar;
  t.name = std::move(name);
  return t;
}
TypeTerm t_set() { return TypeTerm{TermKind::SetSort, -1, "", {}}; }
TypeTerm t_data(std::string name) { return TypeTerm{TermKind::DataRef, -1, std::move(name), {}}; }
TypeTerm t_ctor(std::string name) { return TypeTerm{TermKind::CtorRef, -1, std::move(name), {}}; }
TypeTerm t_lift(std::string name) { return TypeTerm{TermKind::LiftRef, -1, std::move(name), {}}; }
TypeTerm t_hyp(std::string name) { return TypeTerm{TermKind::HypRef, -1, std::move(name), {}}; }
TypeTerm t_top() { return TypeTerm{TermKind::Top, -1, "", {}}; }
TypeTerm t_ktop(TypeTerm carrier) {
  TypeTerm t;
  t.kind = TermKind::KTop;
  t.kids = {std::move(carrier)};
  return t;
}
TypeTerm t_equal() { return TypeTerm{TermKind::EqualT, -1, "", {}}; }
TypeTerm t_predmap(TypeTerm carrier, TypeTerm src, TypeTerm tgt) {
  TypeTerm t;
  t.kind = TermKind::PredMapT;
  t.kids = {std::move(carrier), std::move(src), std::move(tgt)};
  return t;
}

namespace {

bool is_binder(TermKind k) {
  return k == TermKind::Pi || k == TermKind::Sig || k == TermKind::Lam;
}

TypeTerm freeze_rec(const TypeTerm& t, std::vector<int>& env) {
  TypeTerm out = t;
  if (t.kind == TermKind::Var) {
    if (t.var == kNamedVar) return out;
    for (std::size_t i = env.size(); i-- > 0;) {
      if (env[i] == t.var) {
        out.var = static_cast<int>(env.size() - 1 - i);
        return out;
      }
    }
    throw std::logic_error("freeze: unbound symbol " + std::to_string(t.var) +
                           (t.name.empty() ? "" : " (" + t.name + ")"));
  }
  if (is_binder(t.kind)) {
    out.kids[0] = freeze_rec(t.kids[0], env);
    env.push_back(t.var);
    out.kids[1] = freeze_rec(t.kids[1], env);
    env.pop_back();
    out.var = -1;
    return out;
  }
  for (std::size_t i = 0; i < t.kids.size(); ++i) out.kids[i] = freeze_rec(t.kids[i], env);
  return out;
}

}  // namespace

TypeTerm freeze(const TypeTerm& t, const std::vector<int>& params) {
  std::vector<int> env = params;
  return freeze_rec(t, env);
}

bool alpha_eq(const TypeTerm& a, const TypeTerm& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TermKind::Var:
      if (a.var == kNamedVar || b.var == kNamedVar) return a.var == b.var && a.name == b.name;
      return a.var == b.var;
    case TermKind::DataRef:
    case TermKind::CtorRef:
    case TermKind::LiftRef:
    case TermKind::HypRef:
      if (a.name != b.name) return false;
      break;
    default:
      break;
  }
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!alpha_eq(a.kids[i], b.kids[i])) return false;
  return true;
}

TypeTerm shift(const TypeTerm& t, int by, int cutoff) {
  TypeTerm out = t;
  if (t.kind == TermKind::Var) {
    if (t.var != kNamedVar && t.var >= cutoff) out.var = t.var + by;
    return out;
  }
  if (is_binder(t.kind)) {
    out.kids[0] = shift(t.kids[0], by, cutoff);
    out.kids[1] = shift(t.kids[1], by, cutoff + 1);
    return out;
  }
  for (std::size_t i = 0; i < t.kids.size(); ++i) out.kids[i] = shift(t.kids[i], by, cutoff);
  return out;
}

TypeTerm subst(const TypeTerm& t, int which, const TypeTerm& replacement) {
  if (t.kind == TermKind::Var) {
    TypeTerm out = t;
    if (t.var == kNamedVar) return out;
    if (t.var == which) return shift(replacement, which, 0);
    if (t.var > which) out.var = t.var - 1;
    return out;
  }
  TypeTerm out = t;
  if (is_binder(t.kind)) {
    out.kids[0] = subst(t.kids[0], which, replacement);
    out.kids[1] = subst(t.kids[1], which + 1, replacement);
    return out;
  }
  for (std::size_t i = 0; i < t.kids.size(); ++i) out.kids[i] = subst(t.kids[i], which, replacement);
  return out;
}

bool well_scoped(const TypeTerm& t, int depth) {
  if (t.kind == TermKind::Var) return t.var == kNamedVar || (t.var >= 0 && t.var < depth);
  if (is_binder(t.kind))
    return well_scoped(t.kids[0], depth) && well_scoped(t.kids[1], depth + 1);
  for (const auto& k : t.kids)
    if (!well_scoped(k, depth)) return false;
  return true;
}

WitnessTerm w_var(std::string n) { return WitnessTerm{WitKind::Var, std::move(n), {}, {}, {}}; }
WitnessTerm w_app(WitnessTerm head, std::vector<WitnessTerm> args) {
  if (args.empty()) return head;
  // Identity morphism applied to (value, evidence) collapses to the evidence.
  if (head.kind == WitKind::Lam && head.kids.size() == 3 && args.size() == 2 &&
      head.kids[0].kind == WitKind::Var && head.kids[1].kind == WitKind::Var &&
      head.kids[2].kind == WitKind::Var && head.kids[2].name == head.kids[1].name)
    return args[1];
  WitnessTerm t;
  t.kind = WitKind::App;
  if (head.kind == WitKind::App) {
    t.kids = std::move(head.kids);
  } else {
    t.kids.push_back(std::move(head));
  }
  for (auto& a : args) t.kids.push_back(std::move(a));
  return t;
}
WitnessTerm w_self(std::string n, std::vector<WitnessTerm> args) {
  WitnessTerm t;
  t.kind = WitKind::SelfCall;
  t.name = std::move(n);
  t.kids = std::move(args);
  return t;
}
WitnessTerm w_hyp(std::string n, std::vector<WitnessTerm> args) {
  WitnessTerm t;
  t.kind = WitKind::HypCall;
  t.name = std::move(n);
  t.kids = std::move(args);
  return t;
}
WitnessTerm w_ctor(std::string n) { return WitnessTerm{WitKind::CtorW, std::move(n), {}, {}, {}}; }
WitnessTerm w_tuple(std::vector<WitnessTerm> parts) {
  WitnessTerm t;
  t.kind = WitKind::Tuple;
  t.kids = std::move(parts);
  return t;
}
WitnessTerm w_type(TypeTerm ty) {
  WitnessTerm t;
  t.kind = WitKind::TypeArg;
  t.type_arg = std::move(ty);
  return t;
}

}  // namespace deepind
