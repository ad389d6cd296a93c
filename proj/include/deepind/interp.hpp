#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "deepind/lift.hpp"

namespace deepind {
namespace interp {

// Finite-set interpretation of declarations and predicates: the independent
// semantic oracle. Proof-irrelevant: liftings evaluate to booleans.
struct FinModel {
  std::map<std::string, int> carriers;  // type variable name -> atom count (<= cap)
  int depth = 3;                        // constructor nesting bound
  int function_cap = 256;               // largest enumerated arrow carrier
  int string_atoms = 2;                 // String stub size
};

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct Value {
  enum class Kind { Atom, Unit, Pair, Inl, Inr, Fun, Refl, Ctor } kind = Kind::Unit;
  std::string carrier;            // Atom: carrier name (a model variable or builtin)
  int atom = 0;                   // Atom index
  std::vector<ValuePtr> kids;     // Pair: 2; Inl/Inr: 1; Fun: table; Ctor: fields
  std::string data, ctor;         // Ctor
  // Ctor: instance chosen for each telescope var; Fun: {domain, codomain}.
  std::vector<TypeExpr> var_insts;
};

bool value_equal(const Value& a, const Value& b);
std::string show_value(const Value& v);

// Boolean predicate table over the canonical enumeration of a carrier type.
struct Table {
  TypeExpr carrier;
  std::vector<char> bits;
  bool all_true() const;
};

// Lazy predicate: evaluation is structural in the value, so self-referential
// liftings terminate without materializing tables over their own carrier.
struct PredFn {
  TypeExpr carrier;
  std::function<bool(const ValuePtr&)> fn;
};

class Interp {
 public:
  Interp(const Module& mod, const LiftRegistry& reg, FinModel model);

  // All inhabitants of t up to the model's depth bound, in canonical order.
  // Throws CAP_EXCEEDED when an arrow carrier exceeds the function-space cap.
  const std::vector<ValuePtr>& enumerate(const TypeExpr& t);
  std::vector<ValuePtr> enumerate_at_depth(const TypeExpr& t, int depth);

  // Evaluates the derived lifting of the value's data type. `preds` has one
  // table per index of the instance.
  bool eval_lifting(const TypeExpr& instance, const std::vector<Table>& preds,
                    const ValuePtr& v);
  bool eval_lifting_fn(const TypeExpr& instance, const std::vector<PredFn>& preds,
                       const ValuePtr& v);

  // Independent decision procedure computed straight from the declarations:
  // traverses the value, propagating predicate tables to every leaf, solving
  // equality constraints by exhaustive search over binder tables.
  bool leaf_oracle(const TypeExpr& instance, const std::vector<Table>& preds,
                   const ValuePtr& v);
  bool leaf_oracle_fn(const TypeExpr& instance, const std::vector<PredFn>& preds,
                      const ValuePtr& v);

  PredFn table_fn(const Table& t);

  std::vector<Table> all_tables(const TypeExpr& carrier);
  Table full_table(const TypeExpr& carrier);

  // Substitutes the model's variables by their names; instances passed to the
  // public API use TypeKind::Data with a variable's name for model carriers.
  const FinModel& model() const { return model_; }

  struct Frame;

 private:
  std::vector<ValuePtr> enum_ctor_values(const DataDecl& d, const std::vector<TypeExpr>& inst,
                                         int depth);
  bool eval_prop(const TypeTerm& t, Frame& env);
  PredFn eval_pred(const TypeTerm& t, Frame& env);
  ValuePtr eval_value(const TypeTerm& t, Frame& env);
  bool eval_builtin_or_data(const std::string& name, const std::vector<TypeExpr>& types,
                            const std::vector<PredFn>& preds, const ValuePtr& v);
  bool preds_equal(const PredFn& a, const PredFn& b);
  bool sem_arg(const TypeExpr& t, const std::vector<TypeExpr>& inst_of_var,
               const std::vector<PredFn>& pred_of_var, const ValuePtr& v);
  PredFn sem_pred(const TypeExpr& t, const std::vector<TypeExpr>& inst_of_var,
                  const std::vector<PredFn>& pred_of_var);

  const Module* mod_;
  const LiftRegistry* reg_;
  FinModel model_;
  std::map<std::string, std::vector<ValuePtr>> enum_cache_;
  std::vector<TypeExpr> binder_universe_;
};

// Differential sweep: eval_lifting vs leaf_oracle over every enumerated value
// and every predicate-table assignment. The parallel path is the OpenMP
// kernel; the serial path is the reference implementation kept for testing.
struct SweepCase {
  std::string decl;
  TypeExpr instance;
};

struct Mismatch {
  std::string decl;
  std::string instance;
  std::string value;
  std::size_t table_index = 0;
  bool eval_result = false;
  bool oracle_result = false;
};

struct SweepReport {
  std::uint64_t checked = 0;
  std::vector<Mismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

SweepReport run_sweep_serial(const Module& mod, const LiftRegistry& reg, const FinModel& model,
                             const std::vector<SweepCase>& cases);
SweepReport run_sweep_parallel(const Module& mod, const LiftRegistry& reg, const FinModel& model,
                               const std::vector<SweepCase>& cases);

// K-top inhabitation: eval_lifting at all-true tables for every value.
SweepReport run_ktop_sweep(const Module& mod, const LiftRegistry& reg, const FinModel& model,
                           const std::vector<SweepCase>& cases);

// Default sweep instances for a declaration, exercising the constraint-driven
// constructors where the corpus types have them.
std::vector<SweepCase> default_cases(const DataDecl& d);

}  // namespace interp
}  // namespace deepind
