#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deepind/emit.hpp"
#include "deepind/encode.hpp"
#include "deepind/induct.hpp"
#include "support/corpus.hpp"
#include "support/kt_simplify.hpp"

using namespace deepind;
using namespace deepind::testsupport;

namespace {

struct Derived {
  Module env;
  const DataDecl* decl;
};

Derived get(const std::string& file, const std::string& name) {
  Derived d{encoded(load_corpus(file)), nullptr};
  d.decl = d.env.lookup(name);
  REQUIRE(d.decl != nullptr);
  return d;
}

}  // namespace

TEST_CASE("hypothesis names and counts per constructor") {
  auto seq = get("seq.gdt", "Seq");
  auto hyps = derive_hypotheses(*seq.decl, seq.env);
  REQUIRE(hyps.size() == 2);
  CHECK(hyps[0].first == "dIndConst");
  CHECK(hyps[1].first == "dIndPair");
  for (const auto& [n, t] : hyps) CHECK(well_scoped(t));

  auto lterm = get("lterm.gdt", "LTerm");
  auto lh = derive_hypotheses(*lterm.decl, lterm.env);
  REQUIRE(lh.size() == 4);
  CHECK(lh[0].first == "dIndVar");
  CHECK(lh[1].first == "dIndAbs");
  CHECK(lh[2].first == "dIndApp");
  CHECK(lh[3].first == "dIndList");
}

TEST_CASE("rule statements are closed terms") {
  for (const char* f : {"equal.gdt", "seq.gdt", "lterm.gdt", "list.gdt", "rose.gdt",
                        "ptree.gdt", "bush.gdt"}) {
    CAPTURE(f);
    Module env = encoded(load_corpus(f));
    for (const auto& d : env.decls) {
      RuleDef deep = derive_deep_rule(d, env);
      RuleDef st = derive_structural_rule(d, env);
      CHECK(well_scoped(deep.statement));
      CHECK(well_scoped(st.statement));
      for (const auto& [n, t] : deep.hypotheses) CHECK(well_scoped(t));
    }
  }
}

TEST_CASE("the hypothesis list embedded in a named-hypothesis statement matches positionally") {
  auto seq = get("seq.gdt", "Seq");
  RuleDef deep = derive_deep_rule(*seq.decl, seq.env);
  // Statement shape: Pi(P) -> dIndConst P -> dIndPair P -> ...
  const TypeTerm* cur = &deep.statement;
  REQUIRE(cur->kind == TermKind::Pi);
  cur = &cur->kids[1];
  for (const auto& [name, hyp] : deep.hypotheses) {
    (void)hyp;
    REQUIRE(cur->kind == TermKind::ArrT);
    const TypeTerm& premise = cur->kids[0];
    REQUIRE(premise.kind == TermKind::App);
    CHECK(premise.kids[0].kind == TermKind::HypRef);
    CHECK(premise.kids[0].name == name);
    cur = &cur->kids[1];
  }
}

TEST_CASE("inline statements agree with the standalone hypotheses up to beta") {
  auto list = get("list.gdt", "List");
  RuleDef deep = derive_deep_rule(*list.decl, list.env);
  REQUIRE(deep.monomorphic);
  // Statement: Pi(A) Pi(P) Pi(Q) -> h_nil -> h_cons -> conclusion.
  const TypeTerm* cur = &deep.statement;
  std::vector<TypeTerm> binder_chain;
  for (int i = 0; i < 3; ++i) {
    REQUIRE(cur->kind == TermKind::Pi);
    cur = &cur->kids[1];
  }
  for (const auto& [name, hyp] : deep.hypotheses) {
    CAPTURE(name);
    REQUIRE(cur->kind == TermKind::ArrT);
    // Beta-reduce the standalone lambda at the statement's binders
    // (indices 2 = A, 1 = P, 0 = Q from this position).
    TypeTerm t = hyp;
    std::vector<int> args = {2, 1, 0};
    std::size_t i = 0;
    while (t.kind == TermKind::Lam) {
      REQUIRE(i < args.size());
      TypeTerm var{TermKind::Var, args[i], "", {}};
      t = subst(t.kids[1], 0, var);
      ++i;
    }
    CHECK(alpha_eq(t, cur->kids[0]));
    cur = &cur->kids[1];
  }
}

TEST_CASE("witness structural checks pass on the corpus") {
  struct Case {
    const char* file;
    const char* decl;
  };
  for (const Case& c : {Case{"equal.gdt", "Equal"}, Case{"seq.gdt", "Seq"},
                        Case{"lterm.gdt", "LType"}, Case{"lterm.gdt", "LTerm"},
                        Case{"list.gdt", "List"}, Case{"rose.gdt", "Rose"},
                        Case{"ptree.gdt", "PTree"}}) {
    CAPTURE(c.decl);
    auto d = get(c.file, c.decl);
    WitnessDef w = synth_witness(*d.decl, d.env);
    WitnessCheck chk = check_witness(w, *d.decl);
    for (const auto& v : chk.violations) {
      CAPTURE(v);
      CHECK(false);
    }
    CHECK(chk.ok());
    CHECK(well_scoped(w.signature));
  }
}

TEST_CASE("lift maps pass the witness checks") {
  for (const char* n : {"List", "Rose", "PTree"}) {
    CAPTURE(n);
    Module env = n == std::string("List")   ? load_corpus("list.gdt")
                 : n == std::string("Rose") ? load_corpus("rose.gdt")
                                            : load_corpus("ptree.gdt");
    const DataDecl* d = env.lookup(n);
    WitnessDef m = derive_lift_map(*d, env);
    WitnessCheck chk = check_witness(m, *d);
    CHECK(chk.ok());
  }
}

TEST_CASE("witnesses for truly nested types and GADTs are refused with the right codes") {
  auto bush = get("bush.gdt", "Bush");
  try {
    (void)synth_witness(*bush.decl, bush.env);
    CHECK(false);
  } catch (const diag_error& e) {
    CHECK(e.diagnostic.code == DiagCode::TrulyNestedType);
  }
  Module g = load_corpus("nested_gadt.gdt");
  for (auto fn : {&derive_deep_rule, &derive_structural_rule}) {
    try {
      (void)fn(g.decls[0], g);
      CHECK(false);
    } catch (const diag_error& e) {
      CHECK(e.diagnostic.code == DiagCode::TrulyNestedGadt);
      CHECK(e.diagnostic.message.find("G^Map") != std::string::npos);
      CHECK(e.diagnostic.explanation.find("Q'_B") != std::string::npos);
    }
  }
}

TEST_CASE("deep/structural coherence via the independent constantly-top pass") {
  struct Case {
    const char* file;
    const char* decl;
  };
  for (const Case& c : {Case{"equal.gdt", "Equal"}, Case{"seq.gdt", "Seq"},
                        Case{"lterm.gdt", "LType"}, Case{"lterm.gdt", "LTerm"},
                        Case{"list.gdt", "List"}, Case{"rose.gdt", "Rose"},
                        Case{"ptree.gdt", "PTree"}}) {
    CAPTURE(c.decl);
    auto d = get(c.file, c.decl);
    RuleDef deep = derive_deep_rule(*d.decl, d.env);
    RuleDef st = derive_structural_rule(*d.decl, d.env);
    TypeTerm specialized = kt_specialize(deep, c.decl);
    CHECK(alpha_eq(specialized, st.statement));
  }
}

TEST_CASE("constantly-top witnesses carry the expected postulates") {
  auto lterm = get("lterm.gdt", "LTerm");
  KtBundle kt = derive_kt_witness(*lterm.decl, lterm.env);
  REQUIRE(kt.postulates.size() == 2);
  CHECK(kt.postulates[0].name == "Equal^ArrKT");
  CHECK(kt.postulates[1].name == "Equal^ListKT");
  CHECK(kt.needs_equal_map);

  auto eq = get("equal.gdt", "Equal");
  KtBundle ekt = derive_kt_witness(*eq.decl, eq.env);
  CHECK(ekt.postulates.empty());
  CHECK_FALSE(ekt.needs_equal_map);

  auto seq = get("seq.gdt", "Seq");
  KtBundle skt = derive_kt_witness(*seq.decl, seq.env);
  REQUIRE(skt.postulates.size() == 1);
  CHECK(skt.postulates[0].name == "Equal^PairKT");
  // The pair clause recurses plainly at both subsequences.
  std::string text = emit_text(skt);
  CHECK(text.find("Seq^KT B s_B") != std::string::npos);
  CHECK(text.find("Seq^KT C s_C") != std::string::npos);
}

TEST_CASE("witnesses across 50 random grammar-conforming declarations") {
  std::mt19937 rng(424242);
  int derived = 0;
  for (int i = 0; i < 50; ++i) {
    Module m = random_gadt_module(rng);
    DataDecl d = m.decls[0];
    if (d.classification == DeclClass::TrulyNestedGadt ||
        d.classification == DeclClass::TrulyNestedType)
      continue;
    d = henry_ford(d);
    Module env = m;
    env.decls[0] = d;
    WitnessDef w = synth_witness(d, env);
    WitnessCheck chk = check_witness(w, d);
    for (const auto& v : chk.violations) {
      CAPTURE(i);
      CAPTURE(v);
      CHECK(false);
    }
    CHECK(chk.ok());
    RuleDef deep = derive_deep_rule(d, env);
    CHECK(well_scoped(deep.statement));
    ++derived;
  }
  CHECK(derived > 20);
}

TEST_CASE("derivations are independent of symbol generation order") {
  auto seq = get("seq.gdt", "Seq");
  RuleDef a = derive_deep_rule(*seq.decl, seq.env);
  RuleDef b = derive_deep_rule(*seq.decl, seq.env);
  CHECK(alpha_eq(a.statement, b.statement));
  for (std::size_t i = 0; i < a.hypotheses.size(); ++i)
    CHECK(alpha_eq(a.hypotheses[i].second, b.hypotheses[i].second));
}

TEST_CASE("arity-2 GADTs derive end to end") {
  Module env = encoded(load_corpus("tag.gdt"));
  const DataDecl* d = env.lookup("Tag");
  REQUIRE(d != nullptr);
  REQUIRE(d->arity == 2);
  RuleDef deep = derive_deep_rule(*d, env);
  RuleDef st = derive_structural_rule(*d, env);
  CHECK(well_scoped(deep.statement));
  CHECK(well_scoped(st.statement));
  CHECK(alpha_eq(testsupport::kt_specialize(deep, "Tag"), st.statement));
  WitnessDef w = synth_witness(*d, env);
  CHECK(check_witness(w, *d).ok());
  KtBundle kt = derive_kt_witness(*d, env);
  REQUIRE(kt.postulates.size() == 1);
  CHECK(kt.postulates[0].name == "Equal^PairKT");
}

TEST_CASE("structural grammar clauses derive and cohere") {
  Module env = encoded(load_corpus("shapes.gdt"));
  const DataDecl* d = env.lookup("W");
  REQUIRE(d != nullptr);
  RuleDef deep = derive_deep_rule(*d, env);
  RuleDef st = derive_structural_rule(*d, env);
  CHECK(alpha_eq(testsupport::kt_specialize(deep, "W"), st.statement));
  WitnessDef w = synth_witness(*d, env);
  CHECK(check_witness(w, *d).ok());
}

TEST_CASE("a declaration without constructors yields a conclusion-only rule") {
  auto pr = parse_module("data V : Set -> Set where\n");
  REQUIRE(pr.ok());
  Module env = lower_module(*pr.module);
  RuleDef deep = derive_deep_rule(env.decls[0], env);
  CHECK(deep.hypotheses.empty());
  CHECK(well_scoped(deep.statement));
  WitnessDef w = synth_witness(env.decls[0], env);
  CHECK(w.clauses.empty());
  CHECK(check_witness(w, env.decls[0]).ok());
}

TEST_CASE("declarations without Set parameters are rejected by derivation") {
  auto pr = parse_module("data K : Set where k : forall {A : Set}. K\n");
  REQUIRE(pr.ok());
  Module env = lower_module(*pr.module);
  try {
    (void)derive_deep_rule(env.decls[0], env);
    CHECK(false);
  } catch (const diag_error& e) {
    CHECK(e.diagnostic.code == DiagCode::GrammarViolation);
  }
}

TEST_CASE("arity-2 ADTs share the outer instance positionally") {
  auto pr = parse_module(
      "data P2 : Set -> Set -> Set where\n"
      "  mk : forall {A B : Set}. A -> B -> P2 A B\n"
      "  deep : forall {A B : Set}. List (P2 A B) -> P2 A B\n");
  REQUIRE(pr.ok());
  Module env = lower_module(*pr.module);
  const DataDecl* d = env.lookup("P2");
  REQUIRE(d->classification == DeclClass::Adt);
  WitnessDef w = synth_witness(*d, env);
  CHECK(check_witness(w, *d).ok());
  std::string text = emit_text(w);
  CHECK(text.find("P2 A B") != std::string::npos);
  CHECK(text.find("P2 A A") == std::string::npos);
  WitnessDef m = derive_lift_map(*d, env);
  CHECK(check_witness(m, *d).ok());
  CHECK(m.params == std::vector<std::string>{"A", "B", "Q_A", "Q_B", "Q_A'", "Q_B'", "m_A",
                                             "m_B"});
}
