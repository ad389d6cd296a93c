#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "deepind/core.hpp"
#include "deepind/emit.hpp"
#include "deepind/encode.hpp"
#include "deepind/induct.hpp"
#include "deepind/interp.hpp"
#include "deepind/lift.hpp"
#include "deepind/syntax.hpp"

namespace fs = std::filesystem;
using namespace deepind;

namespace {

bool color_enabled() {
  const char* env = std::getenv("DEEPIND_COLOR");
  if (env) return std::string(env) == "1";
  return false;
}

struct Loaded {
  std::string filename;
  std::string text;
  Module module;
};

int load(const std::string& path, Loaded& out) {
  std::ifstream f(path);
  if (!f) {
    std::cerr << "deepind: cannot open " << path << "\n";
    return 2;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  out.filename = path;
  out.text = ss.str();
  auto pr = parse_module(out.text);
  if (!pr.ok()) {
    for (const auto& d : pr.diagnostics)
      std::cerr << render_diagnostic(d, path, out.text, color_enabled());
    return 1;
  }
  try {
    out.module = lower_module(*pr.module);
  } catch (const diag_error& e) {
    std::cerr << render_diagnostic(e.diagnostic, path, out.text, color_enabled());
    return 1;
  }
  return 0;
}

void write_artifact(const std::string& out_dir, const std::string& file, const std::string& text,
                    std::ostream& fallback) {
  if (out_dir.empty()) {
    fallback << text;
    return;
  }
  fs::create_directories(out_dir);
  std::ofstream f(fs::path(out_dir) / file);
  f << text;
}

std::string ext(const std::string& format) { return format == "json" ? ".json" : ".txt"; }

int cmd_check(const Loaded& in) {
  int rc = 0;
  std::ostringstream table;
  table << "name\tarity\tclassification\n";
  for (const auto& d : in.module.decls) {
    table << d.name << "\t" << d.arity << "\t" << decl_class_name(d.classification) << "\n";
    try {
      if (d.classification == DeclClass::TrulyNestedGadt) {
        derive_deep_rule(d, in.module);  // surfaces the full obstruction diagnostic
      } else {
        const bool allow = d.classification == DeclClass::TrulyNestedType;
        for (const auto& c : d.ctors)
          for (std::size_t i = 0; i < c.args.size(); ++i)
            if (!c.is_constraint_arg(i)) (void)shape_of(c.args[i], d.name, in.module, allow);
      }
    } catch (const diag_error& e) {
      std::cerr << render_diagnostic(e.diagnostic, in.filename, in.text, color_enabled());
      rc = 1;
    }
  }
  std::cout << table.str();
  return rc;
}

int cmd_encode(const Loaded& in, const std::string& out_dir) {
  int rc = 0;
  for (const auto& d : in.module.decls) {
    try {
      DataDecl hf = henry_ford(d);
      write_artifact(out_dir, d.name + ".hf.gdt", print_decl(raise_decl(hf)), std::cout);
    } catch (const diag_error& e) {
      std::cerr << render_diagnostic(e.diagnostic, in.filename, in.text, color_enabled());
      rc = 1;
    }
  }
  return rc;
}

struct DeriveOpts {
  std::string decl;
  std::string rule = "deep";
  bool witness = false;
  bool kt = false;
  std::string format = "text";
  bool unicode = false;
  std::string out_dir;
};

int cmd_derive(const Loaded& in, const DeriveOpts& o) {
  int rc = 0;
  EmitOptions eo{o.unicode};
  bool any = false;
  for (const auto& d0 : in.module.decls) {
    if (!o.decl.empty() && d0.name != o.decl) continue;
    any = true;
    try {
      DataDecl d = henry_ford(d0);
      Module env = in.module;  // the encoded view of this declaration
      for (auto& md : env.decls)
        if (md.name == d.name) md = d;
      std::vector<std::pair<std::string, std::string>> files;
      LiftingDef lifting = derive_data_lifting(d, env);
      files.emplace_back(d.name + ".lifting" + ext(o.format),
                         o.format == "json" ? emit_json(lifting) : emit_text(lifting, eo));
      if (o.rule == "deep" || o.rule == "both") {
        RuleDef deep = derive_deep_rule(d, env);
        files.emplace_back(d.name + ".deep" + ext(o.format),
                           o.format == "json" ? emit_json(deep) : emit_text(deep, eo));
      }
      if (o.rule == "structural" || o.rule == "both") {
        RuleDef st = derive_structural_rule(d, env);
        files.emplace_back(d.name + ".structural" + ext(o.format),
                           o.format == "json" ? emit_json(st) : emit_text(st, eo));
      }
      if (o.witness) {
        WitnessDef w = synth_witness(d, env);
        files.emplace_back(d.name + ".witness" + ext(o.format),
                           o.format == "json" ? emit_json(w) : emit_text(w, eo));
      }
      if (o.kt) {
        KtBundle kt = derive_kt_witness(d, env);
        files.emplace_back(d.name + ".kt" + ext(o.format),
                           o.format == "json" ? emit_json(kt) : emit_text(kt, eo));
      }
      std::ostringstream out;
      for (std::size_t i = 0; i < files.size(); ++i) {
        if (o.out_dir.empty()) {
          if (i) out << "\n";
          out << files[i].second;
        } else {
          write_artifact(o.out_dir, files[i].first, files[i].second, out);
        }
      }
      std::cout << out.str();
    } catch (const diag_error& e) {
      std::cerr << render_diagnostic(e.diagnostic, in.filename, in.text, color_enabled());
      rc = 1;
    }
  }
  if (!o.decl.empty() && !any) {
    std::cerr << "deepind: no declaration named " << o.decl << "\n";
    return 2;
  }
  return rc;
}

int cmd_oracle(const Loaded& in, int carrier, int depth, bool serial) {
  Module enc = in.module;
  for (auto& d : enc.decls) {
    try {
      d = henry_ford(d);
    } catch (const diag_error& e) {
      std::cerr << render_diagnostic(e.diagnostic, in.filename, in.text, color_enabled());
      return 1;
    }
  }
  try {
    LiftRegistry reg(enc);
    interp::FinModel model;
    model.carriers = {{"A", carrier}, {"B", std::min(carrier, 2)}};
    model.depth = depth;
    std::vector<interp::SweepCase> cases;
    for (const auto& d : enc.decls)
      for (auto& c : interp::default_cases(d)) cases.push_back(c);
    auto report = serial ? interp::run_sweep_serial(enc, reg, model, cases)
                         : interp::run_sweep_parallel(enc, reg, model, cases);
    auto kt = interp::run_ktop_sweep(enc, reg, model, cases);
    std::cout << "oracle: " << report.checked << " differential checks, "
              << report.mismatches.size() << " disagreement(s); " << kt.checked
              << " constantly-top checks, " << kt.mismatches.size() << " failure(s)\n";
    for (const auto& m : report.mismatches)
      std::cout << "  mismatch: " << m.decl << " at " << m.instance << " value " << m.value
                << " table " << m.table_index << " eval=" << m.eval_result
                << " oracle=" << m.oracle_result << "\n";
    for (const auto& m : kt.mismatches)
      std::cout << "  not inhabited at constantly-top: " << m.decl << " value " << m.value
                << "\n";
    return report.ok() && kt.ok() ? 0 : 1;
  } catch (const diag_error& e) {
    std::cerr << render_diagnostic(e.diagnostic, in.filename, in.text, color_enabled());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deepind: a derivation engine for induction rules over GADT declarations"};
  app.require_subcommand(1);

  std::string file;
  auto* check = app.add_subcommand("check", "parse, classify and grammar-validate a module");
  check->add_option("file", file, "input .gdt module")->required();

  std::string enc_out;
  auto* encode = app.add_subcommand("encode", "print Henry Ford forms");
  encode->add_option("file", file, "input .gdt module")->required();
  encode->add_option("--out", enc_out, "write artifacts into a directory");

  DeriveOpts dopts;
  auto* derive = app.add_subcommand("derive", "derive liftings, rules and witnesses");
  derive->add_option("file", file, "input .gdt module")->required();
  derive->add_option("--decl", dopts.decl, "derive only this declaration");
  derive->add_option("--rule", dopts.rule, "deep|structural|both")
      ->check(CLI::IsMember({"deep", "structural", "both"}));
  derive->add_flag("--witness", dopts.witness, "emit the soundness witness dIndG");
  derive->add_flag("--kt", dopts.kt, "emit the constantly-top witness skeleton G^KT");
  derive->add_option("--format", dopts.format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  derive->add_flag("--unicode", dopts.unicode, "use unicode glyphs in text output");
  derive->add_option("--out", dopts.out_dir, "write artifacts into a directory");

  int carrier = 3, depth = 3;
  bool serial = false;
  auto* oracle = app.add_subcommand("oracle", "run the finite-model differential suite");
  oracle->add_option("file", file, "input .gdt module")->required();
  oracle->add_option("--carrier", carrier, "carrier size (<= 3)")->check(CLI::Range(1, 3));
  oracle->add_option("--depth", depth, "enumeration depth bound")->check(CLI::Range(1, 4));
  oracle->add_flag("--serial", serial, "use the serial reference sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Loaded in;
  int rc = load(file, in);
  if (rc) return rc;

  if (check->parsed()) return cmd_check(in);
  if (encode->parsed()) return cmd_encode(in, enc_out);
  if (derive->parsed()) return cmd_derive(in, dopts);
  if (oracle->parsed()) return cmd_oracle(in, carrier, depth, serial);
  return 2;
}
