#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deepind/emit.hpp"
#include "deepind/induct.hpp"
#include "support/corpus.hpp"

using namespace deepind;
using namespace deepind::testsupport;

namespace {

struct All {
  LiftingDef lifting;
  RuleDef deep;
  RuleDef structural;
};

All derive_all(const std::string& file, const std::string& name) {
  Module env = encoded(load_corpus(file));
  const DataDecl* d = env.lookup(name);
  REQUIRE(d != nullptr);
  return All{derive_data_lifting(*d, env), derive_deep_rule(*d, env),
             derive_structural_rule(*d, env)};
}

}  // namespace

TEST_CASE("golden deep and structural rules") {
  struct Case {
    const char* file;
    const char* decl;
  };
  for (const Case& c : {Case{"equal.gdt", "Equal"}, Case{"seq.gdt", "Seq"},
                        Case{"lterm.gdt", "LType"}, Case{"lterm.gdt", "LTerm"},
                        Case{"list.gdt", "List"}, Case{"rose.gdt", "Rose"},
                        Case{"ptree.gdt", "PTree"}, Case{"bush.gdt", "Bush"}}) {
    CAPTURE(c.decl);
    All a = derive_all(c.file, c.decl);
    CHECK(emit_text(a.lifting) == slurp(golden_path(std::string(c.decl) + ".lifting.txt")));
    CHECK(emit_text(a.deep) == slurp(golden_path(std::string(c.decl) + ".deep.txt")));
    CHECK(emit_text(a.structural) ==
          slurp(golden_path(std::string(c.decl) + ".structural.txt")));
  }
}

TEST_CASE("golden witnesses and constantly-top skeletons") {
  struct Case {
    const char* file;
    const char* decl;
    bool witness;
    bool kt;
  };
  for (const Case& c :
       {Case{"equal.gdt", "Equal", true, true}, Case{"seq.gdt", "Seq", true, true},
        Case{"lterm.gdt", "LType", true, true}, Case{"lterm.gdt", "LTerm", true, true},
        Case{"list.gdt", "List", true, true}, Case{"rose.gdt", "Rose", true, false},
        Case{"ptree.gdt", "PTree", true, false}}) {
    CAPTURE(c.decl);
    Module env = encoded(load_corpus(c.file));
    const DataDecl* d = env.lookup(c.decl);
    if (c.witness) {
      WitnessDef w = synth_witness(*d, env);
      CHECK(emit_text(w) == slurp(golden_path(std::string(c.decl) + ".witness.txt")));
    }
    if (c.kt) {
      KtBundle kt = derive_kt_witness(*d, env);
      CHECK(emit_text(kt) == slurp(golden_path(std::string(c.decl) + ".kt.txt")));
    }
  }
}

TEST_CASE("identical IR emits identical bytes") {
  All a = derive_all("seq.gdt", "Seq");
  All b = derive_all("seq.gdt", "Seq");
  CHECK(emit_text(a.lifting) == emit_text(b.lifting));
  CHECK(emit_text(a.deep) == emit_text(b.deep));
  CHECK(emit_json(a.deep) == emit_json(b.deep));
}

TEST_CASE("unicode mode swaps the glyphs") {
  All a = derive_all("seq.gdt", "Seq");
  EmitOptions u{true};
  std::string text = emit_text(a.lifting, u);
  CHECK(text.find("∀") != std::string::npos);
  CHECK(text.find("∃[") != std::string::npos);
  CHECK(text.find("×") != std::string::npos);
  CHECK(text.find("forall") == std::string::npos);
}

TEST_CASE("JSON round trips are alpha-faithful on the corpus") {
  struct Case {
    const char* file;
    const char* decl;
  };
  for (const Case& c : {Case{"equal.gdt", "Equal"}, Case{"seq.gdt", "Seq"},
                        Case{"lterm.gdt", "LType"}, Case{"lterm.gdt", "LTerm"},
                        Case{"list.gdt", "List"}, Case{"rose.gdt", "Rose"},
                        Case{"ptree.gdt", "PTree"}, Case{"bush.gdt", "Bush"}}) {
    CAPTURE(c.decl);
    Module env = encoded(load_corpus(c.file));
    const DataDecl* d = env.lookup(c.decl);

    LiftingDef l = derive_data_lifting(*d, env);
    LiftingDef l2 = parse_json_lifting(emit_json(l));
    CHECK(alpha_eq(l.signature, l2.signature));
    REQUIRE(l.clauses.size() == l2.clauses.size());
    for (std::size_t i = 0; i < l.clauses.size(); ++i)
      CHECK(alpha_eq(l.clauses[i].body, l2.clauses[i].body));
    CHECK(emit_json(l2) == emit_json(l));  // canonical bytes

    RuleDef r = derive_deep_rule(*d, env);
    RuleDef r2 = parse_json_rule(emit_json(r));
    CHECK(alpha_eq(r.statement, r2.statement));
    CHECK(emit_json(r2) == emit_json(r));

    if (d->classification != DeclClass::TrulyNestedType) {
      WitnessDef w = synth_witness(*d, env);
      WitnessDef w2 = parse_json_witness(emit_json(w));
      CHECK(emit_json(w2) == emit_json(w));
      CHECK(emit_text(w2) == emit_text(w));
    }
  }
}

TEST_CASE("the KTop leaf serializes with its carrier") {
  TypeTerm kt = t_ktop(t_data("Bool"));
  std::string j = emit_json(LiftingDef{"X", 1, freeze(t_arr(kt, t_set())), {}});
  CHECK(j.find("\"node\": \"ktop\"") != std::string::npos);
  CHECK(j.find("\"carrier\"") != std::string::npos);
}
