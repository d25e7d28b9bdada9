// Command-line front end: gen | run | trace | sweep.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 every trial failed
// its bound.

#include <omp.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simiter/errors.hpp"
#include "simiter/harness.hpp"
#include "simiter/matrix_io.hpp"
#include "simiter/proof_tracer.hpp"

namespace {

using namespace simiter;
using namespace simiter::harness;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitAllFailed = 3;

struct Flags {
  std::size_t n = 200;
  std::size_t m = 0; // 0: same as n
  std::size_t k = 10;
  double eps = 0.25;
  double c = 1.0;
  int t = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t matrix_seed = 0;
  int reorth = 1;
  std::vector<std::string> spectra;
  double head = 1.0;
  double knee = 1.0;
  double ratio = 0.5;
  std::size_t position = 0;
  std::size_t length = 0;
  std::string values;
  bool trace = false;
  bool exact_residual = false;
  std::string matrix_file;
  std::string out_file;
  // sweep
  std::vector<double> eps_list;
  std::vector<double> t_mults;
  std::size_t seeds = 100;
  std::string summary_file;
  int threads = 0;

  CLI::Option* t_opt = nullptr;

  std::size_t cols() const { return m == 0 ? n : m; }
};

void add_matrix_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--n", f.n, "Rows of the synthesized matrix")->check(CLI::PositiveNumber);
  cmd->add_option("--m", f.m, "Columns of the synthesized matrix (default: n)");
  cmd->add_option("--matrix-seed", f.matrix_seed, "Seed for the random singular vectors of A");
  cmd->add_option("--head", f.head, "Leading singular value level");
  cmd->add_option("--knee", f.knee, "zero-gap: value of sigma_k = sigma_{k+1}");
  cmd->add_option("--ratio", f.ratio, "Step ratio, geometric decay, or zero-gap tail decay");
  cmd->add_option("--position", f.position, "Step position / zero-gap index (default: k)");
  cmd->add_option("--length", f.length, "Spectrum length (default: min(n, m))");
  cmd->add_option("--values", f.values, "custom: comma-separated non-increasing values");
}

void add_trial_flags(CLI::App* cmd, Flags& f) {
  add_matrix_flags(cmd, f);
  cmd->add_option("--k", f.k, "Target rank")->check(CLI::PositiveNumber);
  cmd->add_option("--eps", f.eps, "Accuracy parameter in (0, 1]");
  cmd->add_option("--c", f.c, "Iteration schedule constant");
  f.t_opt = cmd->add_option("--t", f.t, "Explicit iteration count")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Sketch seed");
  cmd->add_option("--stream", f.stream, "Sketch stream index");
  cmd->add_option("--reorth", f.reorth, "Re-orthonormalize every this many power steps")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--exact-residual", f.exact_residual, "Measure the residual with the Jacobi SVD");
  cmd->add_option("--out", f.out_file, "Write CSV here instead of stdout");
}

SpectrumSpec base_spectrum(const Flags& f) {
  SpectrumSpec s;
  s.head = f.head;
  s.knee = f.knee;
  s.ratio = f.ratio;
  s.position = f.position;
  s.length = f.length;
  if (!f.values.empty()) {
    std::string v = f.values;
    for (char& ch : v) {
      if (ch == ',') ch = '/';
    }
    s = parse_spectrum("custom:values=" + v, s);
  }
  return s;
}

SpectrumSpec single_spectrum(const Flags& f) {
  const std::string token = f.spectra.empty() ? "flat" : f.spectra.front();
  return parse_spectrum(token, base_spectrum(f));
}

TrialConfig trial_config(const Flags& f) {
  TrialConfig cfg;
  cfg.spectrum = single_spectrum(f);
  cfg.n = f.n;
  cfg.m = f.cols();
  cfg.matrix_seed = f.matrix_seed;
  cfg.params.k = f.k;
  cfg.params.epsilon = f.eps;
  cfg.params.c = f.c;
  if (f.t_opt && f.t_opt->count() > 0) cfg.params.t_override = f.t;
  cfg.params.reorth_period = f.reorth;
  cfg.params.seed = f.seed;
  cfg.params.stream = f.stream;
  cfg.params.with_trace = f.trace;
  cfg.params.exact_residual = f.exact_residual;
  return cfg;
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  fn(out);
  if (!out) throw IoError("write to '" + path + "' failed");
}

int cmd_gen(const Flags& f) {
  TrialConfig cfg = trial_config(f);
  const Matrix a = trial_matrix(cfg);
  with_output(f.out_file, [&](std::ostream& os) { write_matrix(os, a); });
  return kExitOk;
}

int cmd_run(const Flags& f, bool verbose_trace) {
  TrialConfig cfg = trial_config(f);
  tracer::TraceReport report;
  ExperimentRecord rec;
  if (!f.matrix_file.empty()) {
    const Matrix a = load_matrix(f.matrix_file);
    rec = run_trial_on(a, std::nullopt, "file", cfg.params, &report);
  } else {
    rec = run_trial(cfg, &report);
  }
  with_output(f.out_file, [&](std::ostream& os) { write_csv(os, {rec}); });
  if (verbose_trace) {
    if (rec.kprime || rec.g2_norm) {
      std::cerr << tracer::render(report);
    } else {
      std::cerr << "trace unavailable: " << rec.status << '\n';
    }
  }
  return rec.bound_ok ? kExitOk : kExitAllFailed;
}

int cmd_sweep(const Flags& f) {
  if (f.threads > 0) omp_set_num_threads(f.threads);
  SweepGrid grid;
  const SpectrumSpec base = base_spectrum(f);
  const std::vector<std::string> tokens =
      f.spectra.empty() ? std::vector<std::string>{"flat", "geometric:ratio=0.9", "step:ratio=0.1",
                                                   "zero-gap:head=2,knee=1,ratio=0.1"}
                        : f.spectra;
  for (const auto& tok : tokens) grid.spectra.push_back(parse_spectrum(tok, base));
  if (!f.eps_list.empty()) grid.epsilons = f.eps_list;
  if (!f.t_mults.empty()) grid.t_multipliers = f.t_mults;
  grid.seeds = f.seeds;
  grid.seed_base = f.seed;
  grid.stream = f.stream;
  grid.n = f.n;
  grid.m = f.cols();
  grid.k = f.k;
  grid.c = f.c;
  grid.reorth_period = f.reorth;
  grid.matrix_seed = f.matrix_seed;
  grid.with_trace = f.trace;
  grid.exact_residual = f.exact_residual;

  const auto result = sweep(grid);
  with_output(f.out_file, [&](std::ostream& os) { write_csv(os, result.records); });
  if (f.summary_file.empty()) {
    write_summary(std::cerr, result.cells);
  } else {
    std::ofstream out(f.summary_file);
    if (!out) throw IoError("cannot open '" + f.summary_file + "' for writing");
    write_summary(out, result.cells);
  }
  return result.all_failed() ? kExitAllFailed : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized simultaneous iteration for top-k singular subspaces"};
  app.require_subcommand(1);
  Flags f;

  auto* gen = app.add_subcommand("gen", "Write a synthesized matrix in the text format");
  add_matrix_flags(gen, f);
  gen->add_option("--spectrum", f.spectra, "Spectrum kind[:key=value,...]")->expected(1);
  gen->add_option("--k", f.k, "Default zero-gap/step position")->check(CLI::PositiveNumber);
  gen->add_option("--out", f.out_file, "Output file (default: stdout)");

  auto* run = app.add_subcommand("run", "Run one trial and print a CSV row");
  add_trial_flags(run, f);
  run->add_option("--spectrum", f.spectra, "Spectrum kind[:key=value,...]")->expected(1);
  run->add_flag("--trace", f.trace, "Record proof-trace quantities");
  run->add_option("--matrix", f.matrix_file, "Use this matrix file instead of synthesizing");

  auto* trace = app.add_subcommand("trace", "run --trace, plus a verbose report on stderr");
  add_trial_flags(trace, f);
  trace->add_option("--spectrum", f.spectra, "Spectrum kind[:key=value,...]")->expected(1);
  trace->add_option("--matrix", f.matrix_file, "Use this matrix file instead of synthesizing");

  auto* sw = app.add_subcommand("sweep", "Grid of spectra x epsilons x t-multipliers x seeds");
  add_trial_flags(sw, f);
  sw->add_option("--spectrum", f.spectra, "Spectrum kind[:key=value,...] (repeatable)");
  sw->add_option("--eps-list", f.eps_list, "Epsilons to sweep")->delimiter(',');
  sw->add_option("--t-mult", f.t_mults, "Multipliers on the scheduled t (0 forces t = 1)")
      ->delimiter(',');
  sw->add_option("--seeds", f.seeds, "Seeds per cell")->check(CLI::PositiveNumber);
  sw->add_flag("--trace", f.trace, "Record proof-trace quantities");
  sw->add_option("--summary", f.summary_file, "Per-cell summary CSV (default: stderr)");
  sw->add_option("--threads", f.threads, "OpenMP threads for trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(f);
    if (*run) return cmd_run(f, false);
    if (*trace) {
      f.trace = true;
      return cmd_run(f, true);
    }
    if (*sw) {
      if (f.eps_list.empty()) f.eps_list = {f.eps};
      return cmd_sweep(f);
    }
  } catch (const ContractError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAllFailed;
  }
  return kExitUsage;
}
