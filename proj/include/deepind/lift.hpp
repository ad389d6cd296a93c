#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "deepind/term.hpp"

namespace deepind {

struct LiftClause {
  std::string ctor;
  std::vector<std::string> index_pats;  // pattern instance names (Equal: repeated)
  std::vector<std::string> pred_pats;
  std::vector<std::string> ctor_args;   // binders then constructor-order args
  // Body telescope (for de Bruijn freezing, outermost first):
  //   distinct index vars, index predicates, constructor binders, constructor args.
  TypeTerm body;
};

struct LiftingDef {
  std::string name;   // the data type; prints with a ^ suffix
  int arity = 1;
  TypeTerm signature;  // frozen
  std::vector<LiftClause> clauses;
};

// Fixed liftings for Equal, Pair, Sum, Arrow, Unit and KTop.
// Throws UNKNOWN_BUILTIN otherwise.
LiftingDef builtin_lifting(const std::string& name);

// Read-only registry of liftings available while deriving a module: builtins,
// the prelude, and one derived lifting per declaration.
class LiftRegistry {
 public:
  explicit LiftRegistry(const Module& mod);
  const LiftingDef* find(const std::string& name) const;
  const Module& module() const { return *mod_; }

 private:
  const Module* mod_;
  std::map<std::string, LiftingDef> by_name_;
};

// Compositional predicate lifting of a type expression: Var -> predicate from
// qs, Product/Sum/Arrow -> builtin liftings, the declaring type -> self_pred
// applied at instance types and their liftings, a foreign data constructor ->
// its LiftRef, closed constants -> KTop. This one recursion implements the
// six grammar clauses as well as K^.
TypeTerm lift_type_expr(const TypeExpr& t, const std::string& self, const TypeTerm& self_pred,
                        const std::vector<TypeTerm>& telescope_types,
                        const std::vector<TypeTerm>& telescope_preds);

// Same, driven by a ShapeF (used where the grammar parse is already in hand).
TypeTerm derive_shape_lifting(const ShapeF& s, const std::string& self, const TypeTerm& self_pred,
                              const std::vector<TypeTerm>& telescope_types,
                              const std::vector<TypeTerm>& telescope_preds);

// Self-referential predicate lifting G^ for a declaration. Requires a
// Henry-Ford-encoded GADT, an ADT, a nested type or a truly nested type;
// throws TRULY_NESTED_GADT otherwise.
LiftingDef derive_data_lifting(const DataDecl& d, const Module& env);

// Functorial action H^Map of the lifting of an ADT or nested type: maps
// predicate morphisms to morphisms of lifted predicates (liftListMap and
// friends). Throws UNSUPPORTED_MAP for GADTs and truly nested types.
WitnessDef derive_lift_map(const DataDecl& h, const Module& env);

std::string lift_map_name(const std::string& data_name);

}  // namespace deepind
