#pragma once

// Internal helpers shared by the lifting and induction derivations: canonical
// clause telescopes, deterministic naming, and TypeExpr -> TypeTerm embedding.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "deepind/core.hpp"
#include "deepind/term.hpp"

namespace deepind {
namespace derive {

struct SymGen {
  int next = 0;
  int fresh() { return next++; }
};

// A named symbol introduced while building one clause/hypothesis.
struct Bind {
  int sym = -1;
  std::string name;
};

std::string lower_initial(const std::string& s);
std::string canonical_type_var(int i, const std::set<std::string>& avoid);

// Deterministic value-argument names: Equal evidence e, e', ..; variables
// lowercase; data refs initial + "_" + the variables appearing in the
// instance; closed heads just the initial; structural types x/f/u.
class ArgNamer {
 public:
  explicit ArgNamer(std::set<std::string> taken) : taken_(std::move(taken)) {}
  std::string name_for(const TypeExpr& t, const std::vector<std::string>& var_names);

 private:
  std::string unique(std::string base);
  std::set<std::string> taken_;
  int equal_count_ = 0;
};

// lift evidence name for a value argument: liftE for constraints, otherwise
// "lift" + the suffix of the argument's name (s_B -> liftB, a -> liftA).
std::string lift_name_for(const std::string& arg_name, std::set<std::string>& taken);
std::string suffix_of(const std::string& arg_name);

// Canonical per-constructor scope: renames the telescope (index variables
// first, then binders), allocates symbols, predicate binds and argument names.
struct CtorScope {
  const ConstructorDecl* ctor = nullptr;
  int arity = 0;

  // Telescope variables in canonical order: ret-index vars (ret order, deduped),
  // then the remaining vars in declared order. canonical_of[telescope var] =
  // position in `vars`.
  std::vector<Bind> vars;
  std::vector<int> canonical_of;   // indexed by original telescope position
  std::vector<int> index_vars;     // canonical positions of ret-index vars (ret order, deduped)
  std::vector<int> binder_vars;    // canonical positions of the rest

  std::vector<Bind> index_preds;   // one per return index position
  std::vector<Bind> binder_preds;  // one per binder var
  std::vector<Bind> args;          // one per constructor argument (ctor order)

  // Return index positions -> canonical var (for plain-var returns).
  std::vector<int> ret_var;        // -1 when the return index is structured (Equal's refl: repeated ok)

  // Value-telescope order for hypotheses: non-synthesized args in constructor
  // order, then synthesized constraint args.
  std::vector<std::size_t> hyp_arg_order;

  TypeTerm var_term(int canonical) const;
  TypeTerm arg_term(std::size_t i) const;
};

CtorScope make_ctor_scope(const DataDecl& d, const ConstructorDecl& c, SymGen& syms,
                          const std::set<std::string>& avoid);

// Predicate style for occurrences of the declared type: how P is applied.
struct SelfPred {
  TypeTerm head;            // LiftRef(G) or Var(P)
  bool with_types = true;   // apply instance types
  bool with_lifts = true;   // apply instance liftings
};

// TypeExpr -> TypeTerm under a variable environment.
TypeTerm type_term(const TypeExpr& t, const std::vector<TypeTerm>& type_of_var);

// The compositional lifting recursion (the six grammar clauses plus K^).
TypeTerm lift_term(const TypeExpr& t, const std::string& self, const SelfPred& sp,
                   const std::vector<TypeTerm>& type_of_var,
                   const std::vector<TypeTerm>& pred_of_var);

bool is_literal_ktop(const TypeTerm& t);
bool mentions_var_sym(const TypeTerm& t, int sym);

// Applied conjunct for one constructor argument: the arrow-with-self case
// expands to the Pi form, everything else applies the lifting to the value.
// `fresh` supplies symbols for the Pi binders. Returns Top when the predicate
// is the literal constantly-top lifting.
TypeTerm conjunct_term(const TypeExpr& t, const std::string& self, const SelfPred& sp,
                       const std::vector<TypeTerm>& type_of_var,
                       const std::vector<TypeTerm>& pred_of_var, const TypeTerm& value,
                       SymGen& syms, std::vector<int>* pi_syms);

TypeTerm fold_prod(std::vector<TypeTerm> conjuncts);

// Names every derived artifact agrees on.
std::string hyp_name(const std::string& ctor);       // dIndConst
std::string hyp_param_name(const std::string& ctor); // cconst
std::string witness_name(const std::string& data);   // dIndSeq
std::string structural_name(const std::string& data);// indSeq

std::set<std::string> module_name_avoid(const Module& env);

}  // namespace derive
}  // namespace deepind
