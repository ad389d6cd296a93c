#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deepind/encode.hpp"
#include "deepind/interp.hpp"
#include "support/corpus.hpp"

using namespace deepind;
using namespace deepind::interp;
using namespace deepind::testsupport;

namespace {

TypeExpr var(const char* n) { return TypeExpr::mk_data(n); }

struct Ctx {
  Module env;
  LiftRegistry reg;
  Interp in;
  Ctx(const std::string& file, FinModel model)
      : env(encoded(load_corpus(file))), reg(env), in(env, reg, std::move(model)) {}
};

FinModel small_model(int a = 2, int depth = 3) {
  FinModel m;
  m.carriers = {{"A", a}, {"B", 2}};
  m.depth = depth;
  return m;
}

}  // namespace

TEST_CASE("equality carriers") {
  Ctx c("seq.gdt", small_model());
  CHECK(c.in.enumerate(TypeExpr::mk_data("Equal", {var("A"), var("B")})).empty());
  CHECK(c.in.enumerate(TypeExpr::mk_data("Equal", {var("A"), var("A")})).size() == 1);
}

TEST_CASE("Seq at an atomic carrier has only const-built inhabitants") {
  Ctx c("seq.gdt", small_model(2, 2));
  auto vs = c.in.enumerate_at_depth(TypeExpr::mk_data("Seq", {var("A")}), 2);
  REQUIRE(vs.size() == 2);
  for (const auto& v : vs) CHECK(v->ctor == "const");
  // The product instance gains pair-built inhabitants.
  auto ps = c.in.enumerate(
      TypeExpr::mk_data("Seq", {TypeExpr::mk_product(var("A"), var("A"))}));
  bool any_pair = false;
  for (const auto& v : ps)
    if (v->ctor == "pair") any_pair = true;
  CHECK(any_pair);
}

TEST_CASE("lifting evaluation basics") {
  Ctx c("list.gdt", small_model());
  TypeExpr list_a = TypeExpr::mk_data("List", {var("A")});
  const auto& vs = c.in.enumerate(list_a);
  // nil satisfies every lifting.
  for (auto& t : c.in.all_tables(var("A"))) {
    for (const auto& v : vs)
      if (v->ctor == "nil") CHECK(c.in.eval_lifting(list_a, {t}, v));
  }
  // cons a nil satisfies the lifting iff the table holds at a.
  Table t = c.in.full_table(var("A"));
  t.bits[0] = 0;
  for (const auto& v : vs) {
    if (v->ctor != "cons") continue;
    bool expect = true;
    std::function<void(const Value&)> leaves = [&](const Value& w) {
      if (w.kind == Value::Kind::Atom && w.atom == 0) expect = false;
      for (const auto& k : w.kids) leaves(*k);
    };
    leaves(*v);
    CHECK(c.in.eval_lifting(list_a, {t}, v) == expect);
  }
}

TEST_CASE("differential sweeps agree and are schedule independent") {
  for (const char* f : {"equal.gdt", "seq.gdt", "list.gdt", "rose.gdt", "ptree.gdt",
                        "lterm.gdt", "bush.gdt"}) {
    CAPTURE(f);
    Module env = encoded(load_corpus(f));
    LiftRegistry reg(env);
    FinModel model = small_model();
    std::vector<SweepCase> cases;
    for (const auto& d : env.decls)
      for (auto& c : default_cases(d)) cases.push_back(c);
    auto serial = run_sweep_serial(env, reg, model, cases);
    auto parallel = run_sweep_parallel(env, reg, model, cases);
    CHECK(serial.checked > 0);
    CHECK(serial.ok());
    CHECK(parallel.ok());
    CHECK(serial.checked == parallel.checked);
    REQUIRE(serial.mismatches.size() == parallel.mismatches.size());
  }
}

TEST_CASE("constantly-top tables satisfy every lifting") {
  for (const char* f : {"equal.gdt", "seq.gdt", "list.gdt", "rose.gdt", "ptree.gdt",
                        "lterm.gdt", "bush.gdt"}) {
    CAPTURE(f);
    Module env = encoded(load_corpus(f));
    LiftRegistry reg(env);
    std::vector<SweepCase> cases;
    for (const auto& d : env.decls)
      for (auto& c : default_cases(d)) cases.push_back(c);
    auto kt = run_ktop_sweep(env, reg, small_model(), cases);
    CHECK(kt.checked > 0);
    CHECK(kt.ok());
  }
}

TEST_CASE("Henry Ford preserves inhabitant counts") {
  Module plain = load_corpus("seq.gdt");
  Module enc = encoded(plain);
  LiftRegistry r1(plain), r2(enc);
  FinModel model = small_model();
  Interp a(plain, r1, model), b(enc, r2, model);
  for (const auto& c : default_cases(plain.decls[0])) {
    CAPTURE(type_equal(c.instance, c.instance));
    CHECK(a.enumerate(c.instance).size() == b.enumerate(c.instance).size());
  }
}

TEST_CASE("function-space caps raise CAP_EXCEEDED") {
  Ctx c("list.gdt", [] {
    FinModel m;
    m.carriers = {{"A", 3}};
    m.depth = 2;
    m.function_cap = 16;
    return m;
  }());
  TypeExpr big = TypeExpr::mk_arrow(TypeExpr::mk_product(var("A"), var("A")), var("A"));
  CHECK_THROWS_AS((void)c.in.enumerate(big), diag_error);
}

TEST_CASE("lift maps are semantically sound: monotone, identity at equal tables") {
  // For ADTs and nested types the lifting is monotone in its tables, which is
  // exactly what the derived map transports; at equal tables it is the
  // identity. Evidence is proof-irrelevant here, so the check is semantic.
  struct Case {
    const char* file;
    const char* decl;
  };
  for (const Case& cs : {Case{"list.gdt", "List"}, Case{"rose.gdt", "Rose"},
                         Case{"ptree.gdt", "PTree"}}) {
    CAPTURE(cs.decl);
    Module env = load_corpus(cs.file);
    LiftRegistry reg(env);
    FinModel model = small_model(2, 3);
    Interp in(env, reg, model);
    TypeExpr inst = TypeExpr::mk_data(cs.decl, {var("A")});
    const auto& vs = in.enumerate(inst);
    auto tables = in.all_tables(var("A"));
    for (const auto& q : tables) {
      for (const auto& q2 : tables) {
        bool pointwise = true;
        for (std::size_t i = 0; i < q.bits.size(); ++i)
          if (q.bits[i] && !q2.bits[i]) pointwise = false;
        if (!pointwise) continue;
        for (const auto& v : vs)
          if (in.eval_lifting(inst, {q}, v)) CHECK(in.eval_lifting(inst, {q2}, v));
      }
    }
  }
}

TEST_CASE("the leaf oracle is plain leaf satisfaction on ADTs") {
  Module env = load_corpus("rose.gdt");
  LiftRegistry reg(env);
  FinModel model = small_model();
  Interp in(env, reg, model);
  TypeExpr inst = TypeExpr::mk_data("Rose", {var("A")});
  for (const auto& v : in.enumerate(inst)) {
    for (auto& t : in.all_tables(var("A"))) {
      bool leaves_ok = true;
      std::function<void(const Value&)> walk = [&](const Value& w) {
        if (w.kind == Value::Kind::Atom && w.carrier == "A" && !t.bits[static_cast<std::size_t>(w.atom)])
          leaves_ok = false;
        for (const auto& k : w.kids) walk(*k);
      };
      walk(*v);
      CHECK(in.leaf_oracle(inst, {t}, v) == leaves_ok);
      CHECK(in.eval_lifting(inst, {t}, v) == leaves_ok);
    }
  }
}

TEST_CASE("the structural-shape corpus agrees with the oracle") {
  Module env = load_corpus("shapes.gdt");
  LiftRegistry reg(env);
  FinModel model;
  model.carriers = {{"A", 2}};
  model.depth = 2;
  std::vector<SweepCase> cases = default_cases(env.decls[0]);
  auto rep = run_sweep_parallel(env, reg, model, cases);
  CHECK(rep.checked > 0);
  CHECK(rep.ok());
}

TEST_CASE("random declarations agree with the oracle at a tiny model") {
  std::mt19937 rng(777);
  int swept = 0;
  for (int i = 0; i < 12 && swept < 8; ++i) {
    Module m = testsupport::random_gadt_module(rng);
    DataDecl d = m.decls[0];
    if (d.classification == DeclClass::TrulyNestedGadt) continue;
    d = henry_ford(d);
    Module env = m;
    env.decls[0] = d;
    LiftRegistry reg(env);
    FinModel model;
    model.carriers = {{"A", 1}};
    model.depth = 2;
    model.function_cap = 64;
    try {
      auto rep = run_sweep_serial(env, reg, model, default_cases(env.decls[0]));
      CAPTURE(i);
      CHECK(rep.ok());
      ++swept;
    } catch (const diag_error& e) {
      // Function spaces beyond the cap are legitimately refused.
      CHECK(e.diagnostic.code == DiagCode::CapExceeded);
    }
  }
  CHECK(swept > 0);
}
