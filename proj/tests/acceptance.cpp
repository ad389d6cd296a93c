// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "deepind/emit.hpp"
#include "deepind/encode.hpp"
#include "deepind/induct.hpp"
#include "deepind/interp.hpp"
#include "deepind/lift.hpp"
#include "support/corpus.hpp"
#include "support/kt_simplify.hpp"

using namespace deepind;
using namespace deepind::testsupport;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++failures;
}

double run_timed(const std::function<bool()>& f, bool& ok) {
  auto t0 = Clock::now();
  ok = f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Artifacts {
  Module env;
  const DataDecl* decl;
  LiftingDef lifting;
  RuleDef deep;
  RuleDef structural;
};

Artifacts derive_for(const std::string& file, const std::string& name) {
  Artifacts a{encoded(load_corpus(file)), nullptr, {}, {}, {}};
  a.decl = a.env.lookup(name);
  if (!a.decl) throw std::runtime_error("missing decl " + name);
  a.lifting = derive_data_lifting(*a.decl, a.env);
  a.deep = derive_deep_rule(*a.decl, a.env);
  a.structural = derive_structural_rule(*a.decl, a.env);
  return a;
}

bool golden_eq(const std::string& text, const std::string& golden, std::string& why) {
  std::string want = slurp(golden_path(golden));
  if (text == want) return true;
  why = "mismatch against " + golden;
  return false;
}

struct CliResult {
  int exit_code;
  std::string out, err;
};

CliResult run_cli(const std::string& args) {
  CliResult r;
  std::string out_file = (fs::temp_directory_path() / "deepind_acc_out.txt").string();
  std::string err_file = (fs::temp_directory_path() / "deepind_acc_err.txt").string();
  std::string cmd =
      std::string("\"") + DEEPIND_CLI_PATH + "\" " + args + " > " + out_file + " 2> " + err_file;
  int rc = std::system(cmd.c_str());
  r.exit_code = WEXITSTATUS(rc);
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

}  // namespace

int main() {
  // 1. Golden fixtures for Equal.
  {
    bool ok = true;
    std::string why;
    double secs = run_timed(
        [&] {
          Artifacts a = derive_for("equal.gdt", "Equal");
          WitnessDef w = synth_witness(*a.decl, a.env);
          return golden_eq(emit_text(a.lifting), "Equal.lifting.txt", why) &&
                 golden_eq(emit_text(a.deep), "Equal.deep.txt", why) &&
                 golden_eq(emit_text(a.structural), "Equal.structural.txt", why) &&
                 golden_eq(emit_text(w), "Equal.witness.txt", why);
        },
        ok);
    ok = ok && secs < 1.0;
    report(1, "Equal lifting, hypotheses, deep and structural rules, witness", ok,
           why.empty() ? std::to_string(secs) + " s" : why);
  }

  // 2. Golden fixtures for Seq.
  {
    bool ok = true;
    std::string why;
    double secs = run_timed(
        [&] {
          Artifacts a = derive_for("seq.gdt", "Seq");
          WitnessDef w = synth_witness(*a.decl, a.env);
          return golden_eq(emit_text(a.lifting), "Seq.lifting.txt", why) &&
                 golden_eq(emit_text(a.deep), "Seq.deep.txt", why) &&
                 golden_eq(emit_text(w), "Seq.witness.txt", why);
        },
        ok);
    ok = ok && secs < 1.0;
    report(2, "Seq lifting, dIndConst/dIndPair, deep rule, dIndSeq", ok,
           why.empty() ? std::to_string(secs) + " s" : why);
  }

  // 3. Golden fixtures for LType/LTerm.
  {
    bool ok = true;
    std::string why;
    double secs = run_timed(
        [&] {
          Artifacts lt = derive_for("lterm.gdt", "LType");
          Artifacts tm = derive_for("lterm.gdt", "LTerm");
          WitnessDef w = synth_witness(*tm.decl, tm.env);
          std::string wt = emit_text(w);
          bool structure = wt.find("liftListMap (LTerm B) (LTerm^ B Q_B) (P B Q_B)") !=
                               std::string::npos &&
                           wt.find("(B -> A) (Arr^ B A Q_B Q_A) l_BA") != std::string::npos;
          if (!structure) why = "dIndLTerm clause structure";
          return golden_eq(emit_text(lt.lifting), "LType.lifting.txt", why) &&
                 golden_eq(emit_text(tm.lifting), "LTerm.lifting.txt", why) &&
                 golden_eq(emit_text(tm.deep), "LTerm.deep.txt", why) &&
                 golden_eq(wt, "LTerm.witness.txt", why) && structure;
        },
        ok);
    ok = ok && secs < 2.0;
    report(3, "LType/LTerm liftings, hypotheses, dIndLTerm structure", ok,
           why.empty() ? std::to_string(secs) + " s" : why);
  }

  // 4. Golden fixtures for the nested types.
  {
    bool ok = true;
    std::string why;
    double secs = run_timed(
        [&] {
          Artifacts pt = derive_for("ptree.gdt", "PTree");
          Artifacts bu = derive_for("bush.gdt", "Bush");
          Artifacts li = derive_for("list.gdt", "List");
          return golden_eq(emit_text(pt.deep), "PTree.deep.txt", why) &&
                 golden_eq(emit_text(bu.deep), "Bush.deep.txt", why) &&
                 golden_eq(emit_text(bu.lifting), "Bush.lifting.txt", why) &&
                 golden_eq(emit_text(li.structural), "List.structural.txt", why) &&
                 golden_eq(emit_text(li.deep), "List.deep.txt", why);
        },
        ok);
    ok = ok && secs < 1.0;
    report(4, "PTree/Bush deep rules, Bush lifting, List rules", ok,
           why.empty() ? std::to_string(secs) + " s" : why);
  }

  // 5. Rejection of the truly nested GADT through the CLI.
  {
    auto check = run_cli("check " + corpus_path("nested_gadt.gdt"));
    auto derive = run_cli("derive " + corpus_path("nested_gadt.gdt") + " --rule both --witness");
    bool ok = check.exit_code == 1 &&
              check.err.find("TRULY_NESTED_GADT") != std::string::npos &&
              check.err.find("G^Map") != std::string::npos &&
              check.err.find("Q'_B") != std::string::npos && derive.exit_code == 1 &&
              derive.out.empty();
    report(5, "truly nested GADT rejected, exit 1, no artifacts", ok);
  }

  // 6. Deep/structural coherence via the independent constantly-top pass.
  {
    bool ok = true;
    std::string why;
    struct Case {
      const char* file;
      const char* decl;
    };
    for (const Case& c : {Case{"equal.gdt", "Equal"}, Case{"seq.gdt", "Seq"},
                          Case{"lterm.gdt", "LType"}, Case{"lterm.gdt", "LTerm"},
                          Case{"list.gdt", "List"}, Case{"rose.gdt", "Rose"},
                          Case{"ptree.gdt", "PTree"}}) {
      Artifacts a = derive_for(c.file, c.decl);
      if (!alpha_eq(kt_specialize(a.deep, c.decl), a.structural.statement)) {
        ok = false;
        why += std::string(c.decl) + " ";
      }
    }
    report(6, "independent constantly-top specialization equals the structural rule", ok, why);
  }

  // 7. Oracle equivalence sweep.
  {
    bool ok = true;
    std::uint64_t checked = 0;
    std::size_t mismatches = 0;
    double secs = run_timed(
        [&] {
          interp::FinModel model;
          model.carriers = {{"A", 3}, {"B", 2}};
          model.depth = 3;
          for (const char* f : {"seq.gdt", "lterm.gdt", "list.gdt", "rose.gdt", "ptree.gdt"}) {
            Module env = encoded(load_corpus(f));
            LiftRegistry reg(env);
            std::vector<interp::SweepCase> cases;
            for (const auto& d : env.decls)
              for (auto& c : interp::default_cases(d)) cases.push_back(c);
            auto rep = interp::run_sweep_parallel(env, reg, model, cases);
            checked += rep.checked;
            mismatches += rep.mismatches.size();
          }
          return mismatches == 0 && checked > 0;
        },
        ok);
    ok = ok && secs < 60.0;
    report(7, "eval_lifting agrees with the leaf oracle over the full sweep", ok,
           std::to_string(checked) + " checks, " + std::to_string(mismatches) +
               " mismatches, " + std::to_string(secs) + " s");
  }

  // 8. Constantly-top inhabitation plus the LTerm postulate set.
  {
    bool ok = true;
    std::string why;
    interp::FinModel model;
    model.carriers = {{"A", 3}, {"B", 2}};
    model.depth = 3;
    for (const char* f :
         {"equal.gdt", "seq.gdt", "lterm.gdt", "list.gdt", "rose.gdt", "ptree.gdt", "bush.gdt"}) {
      Module env = encoded(load_corpus(f));
      LiftRegistry reg(env);
      std::vector<interp::SweepCase> cases;
      for (const auto& d : env.decls)
        for (auto& c : interp::default_cases(d)) cases.push_back(c);
      auto rep = interp::run_ktop_sweep(env, reg, model, cases);
      if (!rep.ok() || rep.checked == 0) {
        ok = false;
        why += std::string(f) + " ";
      }
    }
    Module lt = encoded(load_corpus("lterm.gdt"));
    KtBundle kt = derive_kt_witness(*lt.lookup("LTerm"), lt);
    std::set<std::string> names;
    for (const auto& p : kt.postulates) names.insert(p.name);
    if (names != std::set<std::string>{"Equal^ArrKT", "Equal^ListKT"}) {
      ok = false;
      why += "postulate set ";
    }
    report(8, "constantly-top tables satisfy every lifting; LTerm postulates exact", ok, why);
  }

  // 9. Henry Ford idempotence and preservation.
  {
    bool ok = true;
    std::string why;
    for (const char* f :
         {"equal.gdt", "seq.gdt", "lterm.gdt", "list.gdt", "rose.gdt", "ptree.gdt", "bush.gdt"}) {
      Module m = load_corpus(f);
      for (const auto& d : m.decls) {
        DataDecl once = henry_ford(d);
        if (!alpha_eq_decl(once, henry_ford(once))) {
          ok = false;
          why += d.name + " not idempotent ";
        }
      }
      Module enc = encoded(m);
      LiftRegistry r1(m), r2(enc);
      interp::FinModel model;
      model.carriers = {{"A", 3}, {"B", 2}};
      model.depth = 3;
      interp::Interp a(m, r1, model), b(enc, r2, model);
      for (const auto& d : m.decls) {
        if (d.classification == DeclClass::TrulyNestedGadt) continue;
        for (const auto& c : interp::default_cases(d)) {
          if (a.enumerate(c.instance).size() != b.enumerate(c.instance).size()) {
            ok = false;
            why += d.name + " counts differ ";
          }
        }
      }
    }
    report(9, "Henry Ford is idempotent and preserves inhabitant counts", ok, why);
  }

  // 10. Structural soundness of witnesses: corpus plus 50 random declarations.
  {
    bool ok = true;
    std::string why;
    int random_checked = 0;
    struct Case {
      const char* file;
      const char* decl;
    };
    for (const Case& c : {Case{"equal.gdt", "Equal"}, Case{"seq.gdt", "Seq"},
                          Case{"lterm.gdt", "LType"}, Case{"lterm.gdt", "LTerm"},
                          Case{"list.gdt", "List"}, Case{"rose.gdt", "Rose"},
                          Case{"ptree.gdt", "PTree"}}) {
      Module env = encoded(load_corpus(c.file));
      const DataDecl* d = env.lookup(c.decl);
      WitnessDef w = synth_witness(*d, env);
      WitnessCheck chk = check_witness(w, *d);
      if (!chk.ok()) {
        ok = false;
        why += std::string(c.decl) + " ";
      }
    }
    std::mt19937 rng(987654321);
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
      if (!chk.ok() || !well_scoped(derive_deep_rule(d, env).statement)) {
        ok = false;
        why += "random#" + std::to_string(i) + " ";
      }
      ++random_checked;
    }
    report(10, "witness coverage, scoping and structural descent", ok,
           std::to_string(random_checked) + " random declarations, " + why);
  }

  std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed\n"
                              : "ACCEPTANCE: " + std::to_string(failures) + " criteria failed\n");
  return failures == 0 ? 0 : 1;
}
