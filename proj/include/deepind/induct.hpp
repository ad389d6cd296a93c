#pragma once

#include <string>
#include <utility>
#include <vector>

#include "deepind/lift.hpp"
#include "deepind/term.hpp"

namespace deepind {

enum class RuleKind { Deep, Structural };

struct RuleDef {
  std::string name;  // dIndG for deep rules, indG for structural ones
  RuleKind kind = RuleKind::Deep;
  TypeTerm statement;  // frozen; GADT deep statements reference hypotheses by name
  std::vector<std::pair<std::string, TypeTerm>> hypotheses;  // dIndC, frozen
  bool monomorphic = false;  // ADT-style statement (indices quantified outside P)
};

struct PostulateSig {
  std::string name;  // Equal^ArrKT etc. (stored with the printable name)
  TypeTerm signature;
};

struct KtBundle {
  WitnessDef witness;                  // G^KT
  std::vector<PostulateSig> postulates;
  bool needs_equal_map = false;        // a recursive position sits at a structured instance
  std::string equal_map_name;          // G (prints as G^EqualMap)
  TypeTerm equal_map_signature;        // frozen; emitted as a signature-only skeleton
};

// One induction hypothesis per constructor, in constructor order.
// Classification must be ADT, nested, truly nested, or (HF-encoded) GADT.
std::vector<std::pair<std::string, TypeTerm>> derive_hypotheses(const DataDecl& d,
                                                                const Module& env);

// Deep rule: forall P -> dIndC1 P -> ... -> conclusion telescope with the
// G^ premise. Throws TRULY_NESTED_GADT (with the obstruction explanation)
// for truly nested GADTs.
RuleDef derive_deep_rule(const DataDecl& d, const Module& env);

// Structural rule: the deep rule at constantly-top custom predicates, with
// always-inhabited premises erased and P's predicate parameters removed.
// Built directly from the declaration (the K-top simplification of the deep
// term lives in the test suite as the independent coherence check).
RuleDef derive_structural_rule(const DataDecl& d, const Module& env);

// Soundness witness dIndG. Classification must be ADT, nested or GADT;
// truly nested types get TRULY_NESTED_TYPE (statement only, no witness).
WitnessDef synth_witness(const DataDecl& d, const Module& env);

// G^KT skeleton: chooses K-top for every existential predicate, recurses at
// subterm positions, postulates one Equal^...KT lemma per non-trivial
// equality obligation.
KtBundle derive_kt_witness(const DataDecl& d, const Module& env);

// Structural soundness checks used by tests and the acceptance suite.
struct WitnessCheck {
  bool clause_coverage = false;
  bool well_scoped = false;
  bool structural_descent = false;
  std::vector<std::string> violations;
  bool ok() const { return clause_coverage && well_scoped && structural_descent; }
};

WitnessCheck check_witness(const WitnessDef& w, const DataDecl& d);

}  // namespace deepind
