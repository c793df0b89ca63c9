#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dlive/sim.h"

namespace fs = std::filesystem;
using namespace dlive;

namespace {

constexpr int kInputError = 3;

struct RunConfig {
  std::string file;
  uint64_t seed = 0;
  double horizon = 10;
  size_t samples = 64;
  size_t budget_cells = Budget{}.max_cells;
  double budget_secs = Budget{}.max_seconds;
  std::string out;
  std::string poly;
  unsigned k = 1;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ProblemFile load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

KernelConfig kernel_config(const RunConfig& rc) {
  KernelConfig cfg;
  cfg.budget.max_cells = rc.budget_cells;
  cfg.budget.max_seconds = rc.budget_secs;
  cfg.seed = rc.seed;
  return cfg;
}

fs::path out_dir(const RunConfig& rc, const char* fallback) {
  fs::path dir = rc.out.empty() ? fs::path(fallback) : fs::path(rc.out);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw InputError("cannot write '" + p.string() + "'");
  f << text;
  std::cout << "wrote " << p.string() << "\n";
}

int cmd_check(const RunConfig& rc) {
  const CheckReport rep = check_problem(load(rc.file), kernel_config(rc));
  std::cout << rep.trace << "verdict " << verdict_text(rep.verdict) << "\n";
  return exit_code(rep.verdict);
}

// Refuted and blown-up samples first, then inconclusive, then witnesses.
int severity(SampleClass c) {
  switch (c) {
    case SampleClass::RefutedSample: return 0;
    case SampleClass::BlowUp: return 1;
    case SampleClass::Inconclusive: return 2;
    case SampleClass::Witness: return 3;
  }
  return 4;
}

int cmd_falsify(const RunConfig& rc) {
  const ProblemFile pf = load(rc.file);
  SimOptions opt;
  opt.horizon = rc.horizon;
  const FalsifyReport rep = falsify_liveness(pf, rc.samples, rc.seed, opt);
  std::ostringstream lines;
  for (size_t i = 0; i < rep.samples.size(); ++i) {
    const auto& s = rep.samples[i];
    lines << "sample " << i << " " << sample_class_text(s.cls) << " " << event_text(s.last.kind)
          << " t=" << s.last.time << "\n";
  }
  std::cout << lines.str() << rep.summary();

  std::vector<size_t> order(rep.samples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return severity(rep.samples[a].cls) < severity(rep.samples[b].cls);
  });
  const fs::path dir = out_dir(rc, "dlive-out");
  for (size_t j = 0; j < std::min<size_t>(3, order.size()); ++j) {
    const size_t i = order[j];
    write_file(dir / ("sample-" + std::to_string(i) + ".csv"), trajectory_csv(rep.samples[i].traj));
  }
  write_file(dir / "summary.txt", rep.summary());
  return rep.exit_code();
}

int cmd_simulate(const RunConfig& rc) {
  const ProblemFile pf = load(rc.file);
  SimOptions opt;
  opt.horizon = rc.horizon;
  const NumPoint init = sample_initial(pf, 1, rc.seed).front();
  const Trajectory tr = simulate(pf.ode, init, pf.goal, opt);
  if (rc.out.empty()) {
    std::cout << trajectory_csv(tr);
  } else {
    write_file(out_dir(rc, "") / "trajectory.csv", trajectory_csv(tr));
  }
  return 0;
}

int cmd_lie(const RunConfig& rc) {
  const ProblemFile pf = load(rc.file);
  std::set<std::string> scope = pf.ode.state_vars();
  scope.insert(pf.ode.params.begin(), pf.ode.params.end());
  const Polynomial p = parse_polynomial(rc.poly, &scope);
  std::cout << print_polynomial(higher_lie(p, pf.ode, rc.k), var_order(pf.ode)) << "\n";
  return 0;
}

int cmd_emit_smt(const RunConfig& rc) {
  const CheckReport rep = check_problem(load(rc.file), kernel_config(rc));
  const fs::path dir = out_dir(rc, "dlive-smt");
  size_t n = 0;
  const auto obs = collect_obligations(rep.root);
  for (size_t i = 0; i < obs.size(); ++i) {
    const Obligation& ob = *obs[i];
    if (ob.kind != ObKind::Arith || ob.status != ObStatus::Unknown) continue;
    write_file(dir / smtlib_filename(i + 1, ob.arith), emit_smtlib(ob.arith));
    ++n;
  }
  std::cout << n << " file(s)\n";
  return 0;
}

int cmd_catalog(const RunConfig& rc) {
  bool all = true;
  for (const auto& r : run_catalog(rc.seed)) {
    std::cout << r.id << " " << (r.pass() ? "PASS" : "FAIL") << " gate=" << (r.gate_ok ? "ok" : "bad")
              << " falsifier=" << (r.falsifier_ok ? "ok" : "bad") << " -- " << r.detail << "\n";
    all = all && r.pass();
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dlive: liveness proof checker for polynomial ODEs"};
  app.require_subcommand(1);
  RunConfig rc;

  auto add_common = [&](CLI::App* sub, bool file = true) {
    if (file) sub->add_option("file", rc.file, "problem file")->required();
    sub->add_option("--seed", rc.seed, "random seed");
    sub->add_option("--budget-cells", rc.budget_cells, "arith prover cell budget");
    sub->add_option("--budget-secs", rc.budget_secs, "arith prover time budget");
    sub->add_option("--out", rc.out, "output directory");
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--horizon", rc.horizon, "simulation horizon")->check(CLI::PositiveNumber);
    sub->add_option("--samples", rc.samples, "number of initial states");
  };

  auto* check = app.add_subcommand("check", "verify the proof block");
  add_common(check);
  auto* falsify = app.add_subcommand("falsify", "simulate sampled initial states");
  add_common(falsify);
  add_sim(falsify);
  auto* simulate = app.add_subcommand("simulate", "write one trajectory as CSV");
  add_common(simulate);
  add_sim(simulate);
  auto* lie = app.add_subcommand("lie", "print a higher Lie derivative");
  add_common(lie);
  lie->add_option("p", rc.poly, "polynomial")->required();
  lie->add_option("k", rc.k, "order");
  auto* smt = app.add_subcommand("emit-smt", "write unresolved arithmetic obligations");
  add_common(smt);
  auto* cat = app.add_subcommand("catalog", "run the counterexample catalog");
  add_common(cat, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInputError;
  }

  try {
    if (*check) return cmd_check(rc);
    if (*falsify) return cmd_falsify(rc);
    if (*simulate) return cmd_simulate(rc);
    if (*lie) return cmd_lie(rc);
    if (*smt) return cmd_emit_smt(rc);
    if (*cat) return cmd_catalog(rc);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const KernelError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const UnsamplableInitSet& e) {
    std::cerr << "unsamplable initial set: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kInputError;
}
