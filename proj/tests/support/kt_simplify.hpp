#pragma once

// Independent constantly-top specialization of a deep induction rule, used to
// cross-check derive_structural_rule. Operates purely on the rule term:
// inlines named hypotheses, substitutes the constantly-top predicate for every
// custom predicate binder, drops the rule predicate's predicate parameters,
// and erases premises that no longer mention the rule predicate.

#include "deepind/induct.hpp"

namespace deepind {
namespace testsupport {

TypeTerm kt_specialize(const RuleDef& deep, const std::string& decl_name);

}  // namespace testsupport
}  // namespace deepind
