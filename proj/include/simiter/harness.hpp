#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simiter/matrix.hpp"
#include "simiter/proof_tracer.hpp"
#include "simiter/sketch.hpp"

namespace simiter::harness {

enum class SpectrumKind { flat, step, geometric, zero_gap, custom };

std::string_view to_string(SpectrumKind kind);
/// Accepts "flat", "step", "geometric", "zero-gap" (or "zero-gap-at-k"), "custom".
SpectrumKind parse_spectrum_kind(std::string_view name);

/// Recipe for a prescribed singular-value spectrum.
///
///   flat       length copies of `head`
///   step       `position` copies of `head`, then head * ratio
///   geometric  head, head * ratio, head * ratio^2, ...
///   zero-gap   position - 1 copies of `head`, then `knee` twice (so that
///              sigma_k == sigma_{k+1} bitwise with k = position), then
///              knee * ratio, knee * ratio^2, ...
///   custom     `values` verbatim
struct SpectrumSpec {
  SpectrumKind kind = SpectrumKind::flat;
  std::size_t length = 0;
  double head = 1.0;
  double knee = 1.0;
  double ratio = 0.5;
  std::size_t position = 0; ///< 0: use the trial's k
  std::vector<double> values;
};

/// Parses "kind" or "kind:key=value,key=value" with keys head, knee, ratio,
/// position and values (values separated by '/'). Unset keys keep the
/// defaults in `base`.
SpectrumSpec parse_spectrum(std::string_view token, SpectrumSpec base = {});

/// Non-increasing, non-negative vector of spec.length entries.
std::vector<double> make_spectrum(const SpectrumSpec& spec);

/// U diag(sigma) V^T with U (n x r) and V (m x r) drawn from `rng` in that
/// order, r = sigma.size() <= min(n, m).
Matrix synthesize_matrix(const std::vector<double>& sigma, std::size_t n, std::size_t m,
                         RngStream& rng);

/// One trial's inputs and outputs, one CSV row.
struct ExperimentRecord {
  std::size_t n = 0, m = 0, k = 0;
  double epsilon = 0.0, c = 0.0;
  int t = 0;
  std::uint64_t seed = 0, stream = 0;
  std::string spectrum;
  double sigma_kplus1 = 0.0;
  std::optional<double> residual;
  std::optional<double> ratio;
  bool bound_ok = false;

  std::optional<std::size_t> kprime;
  std::optional<double> g2_norm, g1_inv_norm, min_t, worst_margin, tail, tail_limit;

  std::string status = "ok";
  bool ok() const { return status == "ok"; }
};

/// Matrix-independent trial parameters.
struct TrialParams {
  std::size_t k = 10;
  double epsilon = 0.25;
  double c = 1.0;
  std::optional<int> t_override;
  int reorth_period = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  bool with_trace = false;
  bool exact_residual = false;
};

/// A trial on a synthesized matrix; A depends only on (spectrum, n, m, matrix_seed)
/// while the sketch depends on (seed, stream).
struct TrialConfig {
  SpectrumSpec spectrum; ///< length 0 means min(n, m)
  std::size_t n = 200, m = 200;
  std::uint64_t matrix_seed = 0;
  TrialParams params;
};

/// The matrix run_trial would use for `cfg`.
Matrix trial_matrix(const TrialConfig& cfg);

/// Fully-specified spectrum for cfg (length filled in, position defaulting to k).
SpectrumSpec resolved_spectrum(const TrialConfig& cfg);

ExperimentRecord run_trial(const TrialConfig& cfg, tracer::TraceReport* report = nullptr);

/// Trial on an explicit matrix. `sigma` is its spectrum when known; otherwise
/// the Jacobi oracle supplies it. With params.with_trace, the full report is
/// copied to `report` when non-null.
ExperimentRecord run_trial_on(const Matrix& a, const std::optional<std::vector<double>>& sigma,
                              std::string_view label, const TrialParams& params,
                              tracer::TraceReport* report = nullptr);

struct SweepGrid {
  std::vector<SpectrumSpec> spectra; ///< length 0 means min(n, m); position 0 means k
  std::vector<double> epsilons{0.25};
  /// t = max(1, ceil(multiplier * choose_t)); multiplier 0 forces t = 1.
  std::vector<double> t_multipliers{1.0};
  std::size_t seeds = 100;
  std::uint64_t seed_base = 0;
  std::uint64_t stream = 0;
  std::size_t n = 200, m = 200, k = 10;
  double c = 1.0;
  int reorth_period = 1;
  std::uint64_t matrix_seed = 0;
  bool with_trace = false;
  bool exact_residual = false;
  /// Run trials on OpenMP threads. Output is identical either way.
  bool parallel = true;
};

struct SweepCell {
  std::string spectrum;
  double epsilon = 0.0;
  double t_multiplier = 1.0;
  int t = 0;
  std::size_t trials = 0;
  std::size_t failures = 0; ///< trials with bound_ok == false (errors included)
  double failure_fraction = 0.0;
  std::optional<double> median_ratio;
  std::optional<double> median_block_condition;
};

struct SweepResult {
  std::vector<ExperimentRecord> records; ///< ordered by spectrum, epsilon, multiplier, seed
  std::vector<SweepCell> cells;
  bool all_failed() const;
};

SweepResult sweep(const SweepGrid& grid);

int scheduled_t(std::size_t n, double epsilon, double c, double multiplier);

double median(std::vector<double> values);

// CSV ---------------------------------------------------------------------

inline constexpr std::string_view kCsvHeader =
    "n,m,k,epsilon,c,t,seed,stream,spectrum,sigma_kp1,residual,ratio,bound_ok,kprime,g2_norm,"
    "g1_inv_norm,min_t,worst_margin,tail,tail_limit,status";

inline constexpr std::string_view kSummaryHeader =
    "spectrum,epsilon,t_multiplier,t,trials,failures,failure_fraction,median_ratio,"
    "median_block_condition";

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ExperimentRecord& rec);
void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
void write_summary(std::ostream& out, const std::vector<SweepCell>& cells);

} // namespace simiter::harness
