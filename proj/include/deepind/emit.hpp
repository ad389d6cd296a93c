#pragma once

#include <string>

#include "deepind/induct.hpp"
#include "deepind/lift.hpp"

namespace deepind {

struct EmitOptions {
  bool unicode = false;  // forall/exists/*/Top vs their glyphs
};

// Byte-deterministic renderings. Binder display names are assigned from the
// stored hints with collision resolution, so identical IR yields identical text.
std::string emit_text(const LiftingDef& l, const EmitOptions& o = {});
std::string emit_text(const RuleDef& r, const EmitOptions& o = {});
std::string emit_text(const WitnessDef& w, const EmitOptions& o = {});
std::string emit_text(const KtBundle& k, const EmitOptions& o = {});
std::string emit_term(const TypeTerm& t, const EmitOptions& o = {});

// Canonical JSON: sorted keys, de Bruijn indices, no floating point.
std::string emit_json(const LiftingDef& l);
std::string emit_json(const RuleDef& r);
std::string emit_json(const WitnessDef& w);
std::string emit_json(const KtBundle& k);

// Inverses for the JSON formats (round-trip is alpha-faithful).
LiftingDef parse_json_lifting(const std::string& s);
RuleDef parse_json_rule(const std::string& s);
WitnessDef parse_json_witness(const std::string& s);

}  // namespace deepind
