#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deepind/core.hpp"

namespace deepind {

// Dependent-type term language housing liftings, induction hypotheses and
// rule statements. Binders are de Bruijn once frozen; during construction a
// term may reference symbolic variables (see SymBuilder in term.cpp users).
enum class TermKind {
  Pi,        // kids = {domain, body}; forall
  Sig,       // kids = {domain, body}; exists
  Lam,       // kids = {domain, body}; hypothesis lambda over P
  Prod,      // kids = {l, r}
  ArrT,      // kids = {l, r}; non-dependent arrow / implication
  App,       // kids = {head, arg...}
  Var,       // var = de Bruijn index (frozen) or symbol (unfrozen)
  SetSort,
  DataRef,   // name
  CtorRef,   // name
  LiftRef,   // name; prints name + "^"
  HypRef,    // name of an induction hypothesis (dIndConst, ...)
  PredMapT,  // kids = {carrier, src, tgt}
  Top,
  KTop,      // kids = {carrier}
  EqualT,    // the Equal head
  SumT,      // kids = {l, r}; sum type expressions embedded in terms
};

struct TypeTerm {
  TermKind kind = TermKind::Top;
  int var = -1;       // Var: index/symbol; Pi/Sig/Lam: bound symbol until frozen
  std::string name;   // refs: referenced name; binders: display hint
  std::vector<TypeTerm> kids;
};

// Variables inside witness-embedded terms are referenced by display name
// (var == kNamedVar); clause naming is deterministic so this is unambiguous.
constexpr int kNamedVar = -2;
TypeTerm t_namedvar(std::string name);

TypeTerm t_pi(std::string hint, int sym, TypeTerm domain, TypeTerm body);
TypeTerm t_sig(std::string hint, int sym, TypeTerm domain, TypeTerm body);
TypeTerm t_lam(std::string hint, int sym, TypeTerm domain, TypeTerm body);
TypeTerm t_arr(TypeTerm l, TypeTerm r);
TypeTerm t_prod(TypeTerm l, TypeTerm r);
TypeTerm t_app(TypeTerm head, std::vector<TypeTerm> args);
TypeTerm t_var(int sym, std::string hint = "");
TypeTerm t_set();
TypeTerm t_data(std::string name);
TypeTerm t_ctor(std::string name);
TypeTerm t_lift(std::string name);
TypeTerm t_hyp(std::string name);
TypeTerm t_top();
TypeTerm t_ktop(TypeTerm carrier);
TypeTerm t_equal();
TypeTerm t_predmap(TypeTerm carrier, TypeTerm src, TypeTerm tgt);

// Replaces symbolic variables with de Bruijn indices. `params` are enclosing
// telescope symbols, outermost first. Throws std::logic_error on a free symbol.
TypeTerm freeze(const TypeTerm& t, const std::vector<int>& params = {});

// De Bruijn equality; binder hints are ignored. Both terms must be frozen.
bool alpha_eq(const TypeTerm& a, const TypeTerm& b);

// Standard de Bruijn machinery on frozen terms.
TypeTerm shift(const TypeTerm& t, int by, int cutoff = 0);
TypeTerm subst(const TypeTerm& t, int which, const TypeTerm& replacement);
bool well_scoped(const TypeTerm& t, int depth = 0);

// Clause-based lambda term language for witnesses (dIndG, lift maps, KT
// skeletons). Pattern variables are referenced by name; naming is
// deterministic, so textual and structural comparisons agree.
enum class WitKind {
  App,       // kids = {head, arg...}
  Var,       // name
  SelfCall,  // name = the witness's own name; kids = args
  MapCall,   // name = a lift map (liftListMap, ...); kids = args
  HypCall,   // name = hypothesis parameter (cconst, ...)
  CtorW,     // name = constructor (refl, tt, ...)
  LiftKt,    // name = a ^KT function (Seq^KT prints from name "Seq")
  PostRef,   // name = a postulated lemma (Equal^ArrKT: stored without ^)
  EqMapRef,  // name = a ^EqualMap skeleton (stored as the data type name)
  KTopW,     // the constantly-top predicate as a value argument
  TypeArg,   // a type expression used as a value-level argument; kids empty, ty set
  Tuple,     // kids = components
  Lam,       // kids = {param..., body}; params are Var or Tuple patterns
  CaseW,     // kids = {scrutinee, pat0, body0, pat1, body1, ...}
};

struct WitnessTerm {
  WitKind kind = WitKind::Var;
  std::string name;
  std::vector<WitnessTerm> kids;
  std::optional<TypeTerm> type_arg;  // TypeArg payload
  // SelfCall only: the pattern variable consumed by a fully applied recursive
  // call (empty for partial applications passed as morphisms).
  std::string self_scrutinee;
};

WitnessTerm w_var(std::string n);
WitnessTerm w_app(WitnessTerm head, std::vector<WitnessTerm> args);
WitnessTerm w_self(std::string n, std::vector<WitnessTerm> args);
WitnessTerm w_hyp(std::string n, std::vector<WitnessTerm> args = {});
WitnessTerm w_ctor(std::string n);
WitnessTerm w_tuple(std::vector<WitnessTerm> parts);
WitnessTerm w_type(TypeTerm t);

struct WhereBinding {
  std::string name;
  WitnessTerm value;
  std::optional<TypeTerm> annotation;  // frozen over the clause telescope
};

struct WitnessClause {
  std::string ctor;
  std::vector<std::string> index_pats;  // instance patterns (may repeat: Equal's refl)
  std::vector<std::string> pred_pats;   // one per index; empty for ^KT witnesses
  std::vector<std::string> ctor_args;   // binders then constructor-order arguments
  std::vector<std::string> evidence;    // lifting-evidence tuple components
  bool evidence_tuple = false;          // single name vs (a, b, ...) pattern
  bool evidence_tt = false;             // the evidence pattern is the literal tt
  WitnessTerm body;
  std::vector<WhereBinding> wheres;
};

struct WitnessDef {
  std::string name;
  std::vector<std::string> params;  // leading parameters shared by all clauses
  TypeTerm signature;               // frozen; the type the witness inhabits
  std::vector<WitnessClause> clauses;
};

}  // namespace deepind
