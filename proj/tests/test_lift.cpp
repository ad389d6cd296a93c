#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "deepind/emit.hpp"
#include "deepind/lift.hpp"
#include "support/corpus.hpp"

using namespace deepind;
using namespace deepind::testsupport;

namespace {

void collect_lift_refs(const TypeTerm& t, std::set<std::string>& out) {
  if (t.kind == TermKind::LiftRef) out.insert(t.name);
  for (const auto& k : t.kids) collect_lift_refs(k, out);
}

}  // namespace

TEST_CASE("builtin liftings") {
  LiftingDef eq = builtin_lifting("Equal");
  CHECK(emit_text(eq) ==
        "Equal^ : forall (A B : Set) -> (A -> Set) -> (B -> Set) -> Equal A B -> Set\n"
        "Equal^ A A Q Q' refl = forall (a : A) -> Equal (Q a) (Q' a)\n");

  LiftingDef pair = builtin_lifting("Pair");
  CHECK(emit_text(pair) ==
        "Pair^ : forall (A B : Set) -> (A -> Set) -> (B -> Set) -> A * B -> Set\n"
        "Pair^ A B Q_A Q_B (a, b) = Q_A a * Q_B b\n");

  // The sum lifting is the evident case split.
  LiftingDef sum = builtin_lifting("Sum");
  CHECK(emit_text(sum) ==
        "Sum^ : forall (A B : Set) -> (A -> Set) -> (B -> Set) -> A + B -> Set\n"
        "Sum^ A B Q_A Q_B (inl a) = Q_A a\n"
        "Sum^ A B Q_A Q_B (inr b) = Q_B b\n");

  LiftingDef arr = builtin_lifting("Arr");
  CHECK(emit_text(arr) ==
        "Arr^ : forall (A B : Set) -> (A -> Set) -> (B -> Set) -> (A -> B) -> Set\n"
        "Arr^ A B Q_A Q_B f = forall (a : A) -> Q_A a -> Q_B (f a)\n");

  CHECK(builtin_lifting("Unit").clauses.size() == 1);
  CHECK(builtin_lifting("KTop").clauses[0].body.kind == TermKind::Top);
  CHECK_THROWS_AS((void)builtin_lifting("Rose"), diag_error);
}

TEST_CASE("shape liftings follow the six clauses") {
  Module env = encoded(load_corpus("lterm.gdt"));
  // Recursive position: P applied at the instance and its lifting.
  std::vector<TypeTerm> types = {t_namedvar("A"), t_namedvar("B")};
  std::vector<TypeTerm> preds = {t_namedvar("Q_A"), t_namedvar("Q_B")};
  TypeTerm p = t_namedvar("P");

  TypeExpr rec = TypeExpr::mk_data("LTerm", {TypeExpr::mk_var(1)});
  ShapeF s = shape_of(rec, "LTerm", env);
  TypeTerm got = derive_shape_lifting(s, "LTerm", p, types, preds);
  TypeTerm expect = t_app(t_namedvar("P"), {t_namedvar("B"), t_namedvar("Q_B")});
  CHECK(alpha_eq(got, expect));

  // Constant position: the binder's own predicate.
  TypeExpr cvar = TypeExpr::mk_var(0);
  got = derive_shape_lifting(shape_of(cvar, "LTerm", env), "LTerm", p, types, preds);
  CHECK(alpha_eq(got, t_namedvar("Q_A")));

  // Nested position: List^ (LTerm B) (P B Q_B).
  TypeExpr nested = TypeExpr::mk_data("List", {rec});
  got = derive_shape_lifting(shape_of(nested, "LTerm", env), "LTerm", p, types, preds);
  expect = t_app(t_lift("List"),
                 {t_app(t_data("LTerm"), {t_namedvar("B")}),
                  t_app(t_namedvar("P"), {t_namedvar("B"), t_namedvar("Q_B")})});
  CHECK(alpha_eq(got, expect));
}

TEST_CASE("derived data liftings match the golden corpus") {
  struct Case {
    const char* file;
    const char* decl;
    const char* golden;
  };
  for (const Case& c : {Case{"seq.gdt", "Seq", "Seq.lifting.txt"},
                        Case{"lterm.gdt", "LType", "LType.lifting.txt"},
                        Case{"lterm.gdt", "LTerm", "LTerm.lifting.txt"},
                        Case{"list.gdt", "List", "List.lifting.txt"},
                        Case{"rose.gdt", "Rose", "Rose.lifting.txt"},
                        Case{"ptree.gdt", "PTree", "PTree.lifting.txt"},
                        Case{"bush.gdt", "Bush", "Bush.lifting.txt"}}) {
    CAPTURE(c.golden);
    Module env = encoded(load_corpus(c.file));
    LiftingDef l = derive_data_lifting(*env.lookup(c.decl), env);
    CHECK(emit_text(l) == slurp(golden_path(c.golden)));
  }
}

TEST_CASE("every lift reference resolves in the registry") {
  for (const char* f : {"equal.gdt", "seq.gdt", "lterm.gdt", "list.gdt", "rose.gdt",
                        "ptree.gdt", "bush.gdt"}) {
    CAPTURE(f);
    Module env = encoded(load_corpus(f));
    LiftRegistry reg(env);
    for (const auto& d : env.decls) {
      const LiftingDef* l = reg.find(d.name);
      REQUIRE(l != nullptr);
      std::set<std::string> refs;
      for (const auto& c : l->clauses) collect_lift_refs(c.body, refs);
      for (const auto& r : refs) {
        CAPTURE(r);
        CHECK(reg.find(r) != nullptr);
      }
    }
  }
}

TEST_CASE("lift maps: liftListMap and the PTree map") {
  Module list_env = load_corpus("list.gdt");
  WitnessDef m = derive_lift_map(*list_env.lookup("List"), list_env);
  CHECK(m.name == "liftListMap");
  CHECK(emit_text(m) ==
        "liftListMap A Q Q' m nil tt = tt\n"
        "liftListMap A Q Q' m (cons a l_A) (liftA, liftA') = (m a liftA, liftListMap A Q Q' m "
        "l_A liftA')\n");

  Module ptree_env = load_corpus("ptree.gdt");
  WitnessDef pm = derive_lift_map(*ptree_env.lookup("PTree"), ptree_env);
  // pnode maps by recursing at the product instance with the pairwise morphism.
  std::string text = emit_text(pm);
  CHECK(text.find("liftPTreeMap (A * A) (Pair^ A A Q Q) (Pair^ A A Q' Q')") != std::string::npos);
  CHECK(text.find("(m x0 u0, m x1 u1)") != std::string::npos);
}

TEST_CASE("lift maps are refused for GADTs and truly nested types") {
  Module seq = encoded(load_corpus("seq.gdt"));
  try {
    (void)derive_lift_map(*seq.lookup("Seq"), seq);
    CHECK(false);
  } catch (const diag_error& e) {
    CHECK(e.diagnostic.code == DiagCode::UnsupportedMap);
  }
  Module bush = load_corpus("bush.gdt");
  try {
    (void)derive_lift_map(*bush.lookup("Bush"), bush);
    CHECK(false);
  } catch (const diag_error& e) {
    CHECK(e.diagnostic.code == DiagCode::UnsupportedMap);
  }
}

TEST_CASE("truly nested GADTs have no lifting") {
  Module g = load_corpus("nested_gadt.gdt");
  CHECK_THROWS_AS((void)derive_data_lifting(g.decls[0], g), diag_error);
}

TEST_CASE("derivation is deterministic across runs") {
  Module env = encoded(load_corpus("seq.gdt"));
  LiftingDef a = derive_data_lifting(*env.lookup("Seq"), env);
  LiftingDef b = derive_data_lifting(*env.lookup("Seq"), env);
  CHECK(alpha_eq(a.signature, b.signature));
  REQUIRE(a.clauses.size() == b.clauses.size());
  for (std::size_t i = 0; i < a.clauses.size(); ++i)
    CHECK(alpha_eq(a.clauses[i].body, b.clauses[i].body));
  CHECK(emit_text(a) == emit_text(b));
}
