// Compares the serial reference sweep against the OpenMP sweep on the
// bundled corpus and reports timings plus result agreement.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "deepind/core.hpp"
#include "deepind/encode.hpp"
#include "deepind/interp.hpp"
#include "deepind/syntax.hpp"

using namespace deepind;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> files;
  for (int i = 1; i < argc; ++i) files.push_back(argv[i]);
  if (files.empty()) {
    std::cerr << "usage: oracle_bench FILE.gdt [FILE.gdt ...]\n";
    return 2;
  }

  int failures = 0;
  for (const auto& path : files) {
    std::ifstream f(path);
    if (!f) {
      std::cerr << "cannot open " << path << "\n";
      return 2;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    auto pr = parse_module(ss.str());
    if (!pr.ok()) {
      std::cerr << path << ": parse failed\n";
      return 1;
    }
    Module mod = lower_module(*pr.module);
    for (auto& d : mod.decls) d = henry_ford(d);
    LiftRegistry reg(mod);
    interp::FinModel model;
    model.carriers = {{"A", 3}, {"B", 2}};
    model.depth = 3;
    std::vector<interp::SweepCase> cases;
    for (const auto& d : mod.decls)
      for (auto& c : interp::default_cases(d)) cases.push_back(c);

    interp::SweepReport serial, parallel;
    double ts = 0, tp = 0;
    try {
      auto t0 = Clock::now();
      serial = interp::run_sweep_serial(mod, reg, model, cases);
      ts = seconds_since(t0);
      t0 = Clock::now();
      parallel = interp::run_sweep_parallel(mod, reg, model, cases);
      tp = seconds_since(t0);
    } catch (const diag_error& e) {
      std::cout << path << ": skipped (" << e.what() << ")\n";
      continue;
    }

    bool same = serial.checked == parallel.checked &&
                serial.mismatches.size() == parallel.mismatches.size();
    for (std::size_t i = 0; same && i < serial.mismatches.size(); ++i)
      same = serial.mismatches[i].value == parallel.mismatches[i].value &&
             serial.mismatches[i].table_index == parallel.mismatches[i].table_index;
    if (!same || !serial.ok()) ++failures;

    std::cout << path << ": " << serial.checked << " checks"
              << ", serial " << ts << " s, parallel " << tp << " s"
              << ", speedup " << (tp > 0 ? ts / tp : 0.0) << "x"
              << ", agree " << (same ? "yes" : "NO")
              << ", mismatches " << serial.mismatches.size() << "\n";
  }
#ifdef _OPENMP
  std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads: 1 (OpenMP disabled)\n";
#endif
  return failures == 0 ? 0 : 1;
}
