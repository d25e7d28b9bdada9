// Checks the CLI's documented exit codes and that `gen` writes the matrix `run` uses.
//
// usage: cli_exit_codes <path-to-simiter-cli> <scratch-dir>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "simiter/harness.hpp"
#include "simiter/matrix_io.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

int exit_code(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect(const std::string& name, int got, int want) {
  const bool ok = got == want;
  if (!ok) ++failures;
  std::cout << (ok ? "ok   " : "FAIL ") << name << ": exit " << got << " (want " << want << ")\n";
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 3) return 2;
  const std::string cli = std::string("'") + argv[1] + "'";
  const fs::path work = argv[2];
  fs::create_directories(work);

  expect("run ok", exit_code(cli + " run --n 30 --k 3"), 0);
  expect("help", exit_code(cli + " --help"), 0);
  expect("non-numeric flag", exit_code(cli + " run --k not-a-number"), 1);
  expect("unknown subcommand", exit_code(cli + " frobnicate"), 1);
  expect("k too large", exit_code(cli + " run --n 10 --k 11"), 1);
  expect("eps out of range", exit_code(cli + " run --n 30 --k 2 --eps 1.5"), 1);
  expect("bad spectrum", exit_code(cli + " run --spectrum wobbly"), 1);
  expect("missing matrix file", exit_code(cli + " run --k 2 --matrix '" + (work / "nope.txt").string() + "'"), 2);
  expect("unwritable output",
         exit_code(cli + " run --n 30 --k 2 --out '" + (work / "no/such/dir/out.csv").string() + "'"), 2);
  // t = 1 on a tiny epsilon fails on every seed
  expect("all trials fail",
         exit_code(cli + " sweep --n 80 --k 5 --seeds 4 --eps-list 0.01 --t-mult 0 --spectrum geometric:ratio=0.99"
                         " --out '" + (work / "fail.csv").string() + "' --summary '" +
                   (work / "fail.summary").string() + "'"),
         3);

  // gen writes the same A that run synthesizes internally
  const fs::path gen = work / "a.txt";
  expect("gen", exit_code(cli + " gen --n 25 --m 18 --k 3 --spectrum step:ratio=0.2 --matrix-seed 5 --out '" +
                          gen.string() + "'"),
         0);
  simiter::harness::TrialConfig cfg;
  cfg.spectrum = simiter::harness::parse_spectrum("step:ratio=0.2");
  cfg.n = 25;
  cfg.m = 18;
  cfg.matrix_seed = 5;
  cfg.params.k = 3;
  const bool same = simiter::load_matrix(gen) == simiter::harness::trial_matrix(cfg);
  if (!same) ++failures;
  std::cout << (same ? "ok   " : "FAIL ") << "gen output equals run matrix\n";

  return failures == 0 ? 0 : 1;
}
