#include "support/kt_simplify.hpp"

#include <map>
#include <stdexcept>

namespace deepind {
namespace testsupport {

namespace {

bool mentions_decl(const TypeTerm& t, const std::string& decl) {
  if (t.kind == TermKind::DataRef && t.name == decl) return true;
  if (t.kind == TermKind::EqualT && decl == "Equal") return true;
  for (const auto& k : t.kids)
    if (mentions_decl(k, decl)) return true;
  return false;
}

bool mentions_index(const TypeTerm& t, int idx) {
  if (t.kind == TermKind::Var) return t.var == idx;
  bool binder = t.kind == TermKind::Pi || t.kind == TermKind::Sig || t.kind == TermKind::Lam;
  for (std::size_t i = 0; i < t.kids.size(); ++i)
    if (mentions_index(t.kids[i], idx + (binder && i == 1 ? 1 : 0))) return true;
  return false;
}

bool is_pred_space(const TypeTerm& t) {
  return t.kind == TermKind::ArrT && t.kids[1].kind == TermKind::SetSort;
}

// Inline App(HypRef(n), [arg]) by beta-reducing the hypothesis lambda.
TypeTerm inline_hyps(const TypeTerm& t, const std::map<std::string, TypeTerm>& hyps) {
  if (t.kind == TermKind::App && t.kids[0].kind == TermKind::HypRef) {
    auto it = hyps.find(t.kids[0].name);
    if (it == hyps.end()) throw std::runtime_error("unknown hypothesis " + t.kids[0].name);
    const TypeTerm& lam = it->second;
    if (lam.kind != TermKind::Lam || t.kids.size() != 2)
      throw std::runtime_error("hypothesis is not a unary lambda");
    return subst(lam.kids[1], 0, t.kids[1]);
  }
  TypeTerm out = t;
  for (auto& k : out.kids) k = inline_hyps(k, hyps);
  return out;
}

struct Simplifier {
  std::string decl;
  int p_arity = 0;       // leading Set parameters of P's signature
  int p_pred_count = 0;  // predicate spaces removed from P's signature

  TypeTerm strip_pred_spaces(const TypeTerm& t) {
    if (t.kind == TermKind::Pi) {
      TypeTerm out = t;
      out.kids[1] = strip_pred_spaces(t.kids[1]);
      ++p_arity;
      return out;
    }
    if (t.kind == TermKind::ArrT && is_pred_space(t.kids[0])) {
      ++p_pred_count;
      return strip_pred_spaces(t.kids[1]);
    }
    return t;
  }

  // p_index: de Bruijn index of the rule predicate from the current position,
  // or -1 before its binder has been passed.
  TypeTerm spine(const TypeTerm& t, int p_index) {
    switch (t.kind) {
      case TermKind::Pi: {
        const TypeTerm& dom = t.kids[0];
        if (p_index == -1 && dom.kind != TermKind::SetSort && mentions_decl(dom, decl)) {
          // The rule predicate's own binder.
          TypeTerm out = t;
          p_arity = 0;
          p_pred_count = 0;
          out.kids[0] = strip_pred_spaces(dom);
          out.kids[1] = spine(t.kids[1], 0);
          return out;
        }
        if (is_pred_space(dom) && !mentions_decl(dom, decl)) {
          // Custom predicate: substitute the constantly-top predicate.
          TypeTerm body = subst(t.kids[1], 0, t_ktop(dom.kids[0]));
          return spine(body, p_index);
        }
        TypeTerm out = t;
        out.kids[0] = rewrite_papps(dom, p_index);
        out.kids[1] = spine(t.kids[1], p_index < 0 ? p_index : p_index + 1);
        return out;
      }
      case TermKind::ArrT: {
        TypeTerm premise = spine(t.kids[0], p_index);
        if (!mentions_index(premise, p_index)) return spine(t.kids[1], p_index);
        return t_arr(std::move(premise), spine(t.kids[1], p_index));
      }
      default:
        return rewrite_papps(t, p_index);
    }
  }

  // Drops the predicate-position arguments of every application of the rule
  // predicate; leaves everything else intact.
  TypeTerm rewrite_papps(const TypeTerm& t, int p_index) {
    bool binder = t.kind == TermKind::Pi || t.kind == TermKind::Sig || t.kind == TermKind::Lam;
    if (t.kind == TermKind::App && t.kids[0].kind == TermKind::Var &&
        t.kids[0].var == p_index && p_pred_count > 0) {
      TypeTerm out = t;
      std::vector<TypeTerm> kids;
      kids.push_back(t.kids[0]);
      const std::size_t args = t.kids.size() - 1;
      if (args == static_cast<std::size_t>(p_arity + p_pred_count) + 1) {
        for (std::size_t i = 1; i <= static_cast<std::size_t>(p_arity); ++i)
          kids.push_back(rewrite_papps(t.kids[i], p_index));
        kids.push_back(rewrite_papps(t.kids.back(), p_index));
      } else if (args == static_cast<std::size_t>(p_arity + p_pred_count)) {
        // Partial application (a propagated predicate): keep the types only.
        for (std::size_t i = 1; i <= static_cast<std::size_t>(p_arity); ++i)
          kids.push_back(rewrite_papps(t.kids[i], p_index));
      } else {
        throw std::runtime_error("unexpected arity of a rule-predicate application");
      }
      out.kids = std::move(kids);
      if (out.kids.size() == 1) return out.kids[0];
      return out;
    }
    TypeTerm out = t;
    for (std::size_t i = 0; i < t.kids.size(); ++i) {
      int pi = p_index;
      if (pi >= 0 && binder && i == 1) ++pi;
      out.kids[i] = rewrite_papps(t.kids[i], pi);
    }
    return out;
  }
};

}  // namespace

TypeTerm kt_specialize(const RuleDef& deep, const std::string& decl_name) {
  std::map<std::string, TypeTerm> hyps(deep.hypotheses.begin(), deep.hypotheses.end());
  TypeTerm inlined = inline_hyps(deep.statement, hyps);
  Simplifier s;
  s.decl = decl_name;
  if (deep.monomorphic) {
    // P takes no predicate parameters; only the outer custom predicates and
    // premise erasure apply.
    s.p_arity = 0;
    s.p_pred_count = 0;
  }
  return s.spine(inlined, -1);
}

}  // namespace testsupport
}  // namespace deepind
