#include "simiter/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>

#include "simiter/dense.hpp"
#include "simiter/errors.hpp"
#include "simiter/proof_tracer.hpp"
#include "simiter/subspace_iteration.hpp"

namespace simiter::harness {

std::string_view to_string(SpectrumKind kind) {
  switch (kind) {
  case SpectrumKind::flat: return "flat";
  case SpectrumKind::step: return "step";
  case SpectrumKind::geometric: return "geometric";
  case SpectrumKind::zero_gap: return "zero-gap";
  case SpectrumKind::custom: return "custom";
  }
  return "unknown";
}

SpectrumKind parse_spectrum_kind(std::string_view name) {
  if (name == "flat") return SpectrumKind::flat;
  if (name == "step") return SpectrumKind::step;
  if (name == "geometric") return SpectrumKind::geometric;
  if (name == "zero-gap" || name == "zero-gap-at-k") return SpectrumKind::zero_gap;
  if (name == "custom") return SpectrumKind::custom;
  throw ContractError("unknown spectrum kind '" + std::string(name) + "'");
}

namespace {

double to_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ContractError("cannot parse '" + std::string(s) + "' as a number");
  }
  return v;
}

std::size_t to_size(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ContractError("cannot parse '" + std::string(s) + "' as a count");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

} // namespace

SpectrumSpec parse_spectrum(std::string_view token, SpectrumSpec base) {
  const auto colon = token.find(':');
  base.kind = parse_spectrum_kind(token.substr(0, colon));
  if (colon == std::string_view::npos) return base;
  for (auto kv : split(token.substr(colon + 1), ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) {
      throw ContractError("spectrum parameter '" + std::string(kv) + "' is not key=value");
    }
    const auto key = kv.substr(0, eq);
    const auto value = kv.substr(eq + 1);
    if (key == "head") base.head = to_double(value);
    else if (key == "knee") base.knee = to_double(value);
    else if (key == "ratio") base.ratio = to_double(value);
    else if (key == "position") base.position = to_size(value);
    else if (key == "length") base.length = to_size(value);
    else if (key == "values") {
      base.values.clear();
      for (auto v : split(value, '/')) base.values.push_back(to_double(v));
    } else {
      throw ContractError("unknown spectrum parameter '" + std::string(key) + "'");
    }
  }
  return base;
}

std::vector<double> make_spectrum(const SpectrumSpec& spec) {
  const std::size_t len = spec.kind == SpectrumKind::custom && spec.length == 0
                              ? spec.values.size()
                              : spec.length;
  auto require = [](bool cond, const std::string& what) {
    if (!cond) throw ContractError("make_spectrum: " + what);
  };
  require(std::isfinite(spec.head) && spec.head >= 0.0, "head must be finite and >= 0");
  std::vector<double> s;
  s.reserve(len);
  switch (spec.kind) {
  case SpectrumKind::flat:
    s.assign(len, spec.head);
    break;
  case SpectrumKind::step:
    require(spec.ratio >= 0.0 && spec.ratio <= 1.0, "step ratio must lie in [0, 1]");
    for (std::size_t i = 0; i < len; ++i) s.push_back(i < spec.position ? spec.head : spec.head * spec.ratio);
    break;
  case SpectrumKind::geometric: {
    require(spec.ratio >= 0.0 && spec.ratio <= 1.0, "geometric ratio must lie in [0, 1]");
    double v = spec.head;
    for (std::size_t i = 0; i < len; ++i, v *= spec.ratio) s.push_back(v);
    break;
  }
  case SpectrumKind::zero_gap: {
    require(spec.position >= 1, "zero-gap position k must be >= 1");
    require(len >= spec.position + 1, "zero-gap needs length >= k + 1");
    require(spec.knee >= 0.0 && spec.knee <= spec.head, "zero-gap needs 0 <= knee <= head");
    require(spec.ratio >= 0.0 && spec.ratio <= 1.0, "zero-gap tail ratio must lie in [0, 1]");
    s.assign(spec.position - 1, spec.head);
    s.push_back(spec.knee);
    s.push_back(spec.knee);
    double v = spec.knee;
    while (s.size() < len) {
      v *= spec.ratio;
      s.push_back(v);
    }
    break;
  }
  case SpectrumKind::custom:
    require(spec.values.size() == len, "custom list length does not match length");
    s = spec.values;
    for (std::size_t i = 0; i < s.size(); ++i) {
      require(std::isfinite(s[i]) && s[i] >= 0.0, "custom values must be finite and >= 0");
      require(i == 0 || s[i] <= s[i - 1], "custom values must be non-increasing");
    }
    break;
  }
  return s;
}

Matrix synthesize_matrix(const std::vector<double>& sigma, std::size_t n, std::size_t m,
                         RngStream& rng) {
  const std::size_t r = sigma.size();
  if (r > std::min(n, m)) {
    throw ContractError("synthesize_matrix: " + std::to_string(r) +
                        " singular values do not fit a " + std::to_string(n) + "x" +
                        std::to_string(m) + " matrix");
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (!(sigma[i] >= 0.0) || (i > 0 && sigma[i] > sigma[i - 1])) {
      throw ContractError("synthesize_matrix: sigma must be non-negative and non-increasing");
    }
  }
  Matrix u = random_orthonormal(n, r, rng);
  const Matrix v = random_orthonormal(m, r, rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < r; ++j) u(i, j) *= sigma[j];
  return matmul(u, transpose(v));
}

SpectrumSpec resolved_spectrum(const TrialConfig& cfg) {
  SpectrumSpec spec = cfg.spectrum;
  if (spec.length == 0) {
    spec.length = spec.kind == SpectrumKind::custom ? spec.values.size() : std::min(cfg.n, cfg.m);
  }
  if (spec.position == 0) spec.position = cfg.params.k;
  return spec;
}

namespace {

std::vector<double> padded_spectrum(const TrialConfig& cfg) {
  auto sigma = make_spectrum(resolved_spectrum(cfg));
  if (sigma.size() > std::min(cfg.n, cfg.m)) {
    throw ContractError("spectrum length " + std::to_string(sigma.size()) + " exceeds min(n, m)");
  }
  sigma.resize(std::min(cfg.n, cfg.m), 0.0);
  return sigma;
}

Matrix synthesize_for(const TrialConfig& cfg, const std::vector<double>& sigma) {
  RngStream rng(cfg.matrix_seed, 0);
  return synthesize_matrix(sigma, cfg.n, cfg.m, rng);
}

std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  }
  return s;
}

IterationConfig iteration_config(const TrialParams& p) {
  IterationConfig cfg;
  cfg.k = p.k;
  cfg.epsilon = p.epsilon;
  cfg.c = p.c;
  cfg.t_override = p.t_override;
  cfg.reorth_period = p.reorth_period;
  cfg.seed = p.seed;
  cfg.stream_index = p.stream;
  cfg.exact_residual = p.exact_residual;
  return cfg;
}

} // namespace

Matrix trial_matrix(const TrialConfig& cfg) { return synthesize_for(cfg, padded_spectrum(cfg)); }

ExperimentRecord run_trial(const TrialConfig& cfg, tracer::TraceReport* report) {
  const auto sigma = padded_spectrum(cfg);
  const Matrix a = synthesize_for(cfg, sigma);
  return run_trial_on(a, sigma, to_string(cfg.spectrum.kind), cfg.params, report);
}

ExperimentRecord run_trial_on(const Matrix& a, const std::optional<std::vector<double>>& sigma,
                              std::string_view label, const TrialParams& params,
                              tracer::TraceReport* report) {
  const IterationConfig cfg = iteration_config(params);
  cfg.validate(a.rows(), a.cols());

  ExperimentRecord rec;
  rec.n = a.rows();
  rec.m = a.cols();
  rec.k = params.k;
  rec.epsilon = params.epsilon;
  rec.c = params.c;
  rec.t = params.t_override.value_or(choose_t(a.rows(), params.epsilon, params.c));
  rec.seed = params.seed;
  rec.stream = params.stream;
  rec.spectrum = std::string(label);

  try {
    const std::vector<double> s = sigma ? *sigma : jacobi_svd(a).sigma;
    const double sigma1 = s.empty() ? 0.0 : s.front();
    rec.sigma_kplus1 = params.k < s.size() ? s[params.k] : 0.0;

    double residual = 0.0;
    if (params.with_trace) {
      const auto rep = tracer::trace(a, cfg);
      residual = rep.residual;
      rec.kprime = rep.kprime;
      rec.g2_norm = rep.g2_norm;
      rec.g1_inv_norm = rep.g1_inv_norm;
      rec.min_t = rep.min_t;
      rec.worst_margin = rep.worst_margin;
      rec.tail = rep.tail.tail;
      rec.tail_limit = rep.tail.limit;
      if (!rep.all_checks_pass()) rec.status = "trace-check-failed";
      if (report) *report = rep;
    } else {
      residual = approximate_topk(a, cfg).residual;
    }
    rec.residual = residual;
    const bool zero_next = rec.sigma_kplus1 <= kNumericalZeroRatio * sigma1;
    rec.ratio = zero_next ? residual : residual / rec.sigma_kplus1;
    rec.bound_ok = lemma_bound_holds(residual, rec.sigma_kplus1, sigma1, params.epsilon);
  } catch (const std::exception& e) {
    rec.status = sanitize(std::string("error: ") + e.what());
    rec.bound_ok = false;
  }
  return rec;
}

int scheduled_t(std::size_t n, double epsilon, double c, double multiplier) {
  if (!(multiplier >= 0.0)) throw ContractError("t multiplier must be >= 0");
  const double t = multiplier * choose_t(n, epsilon, c);
  return std::max(1, static_cast<int>(std::ceil(t)));
}

double median(std::vector<double> values) {
  if (values.empty()) throw ContractError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

bool SweepResult::all_failed() const {
  return !records.empty() &&
         std::none_of(records.begin(), records.end(), [](const auto& r) { return r.bound_ok; });
}

SweepResult sweep(const SweepGrid& grid) {
  if (grid.spectra.empty() || grid.epsilons.empty() || grid.t_multipliers.empty() ||
      grid.seeds == 0) {
    throw ContractError("sweep: grid is empty");
  }
  SweepResult result;
  for (const auto& spec_in : grid.spectra) {
    TrialConfig base;
    base.spectrum = spec_in;
    base.n = grid.n;
    base.m = grid.m;
    base.matrix_seed = grid.matrix_seed;
    base.params.k = grid.k;
    base.params.c = grid.c;
    base.params.reorth_period = grid.reorth_period;
    base.params.stream = grid.stream;
    base.params.with_trace = grid.with_trace;
    base.params.exact_residual = grid.exact_residual;

    const auto sigma = padded_spectrum(base);
    const Matrix a = synthesize_for(base, sigma);
    const std::string label(to_string(spec_in.kind));

    struct Job {
      TrialParams params;
      std::size_t cell;
    };
    std::vector<Job> jobs;
    const std::size_t first_cell = result.cells.size();
    for (double eps : grid.epsilons) {
      for (double mult : grid.t_multipliers) {
        SweepCell cell;
        cell.spectrum = label;
        cell.epsilon = eps;
        cell.t_multiplier = mult;
        cell.t = scheduled_t(grid.n, eps, grid.c, mult);
        for (std::size_t s = 0; s < grid.seeds; ++s) {
          TrialParams p = base.params;
          p.epsilon = eps;
          p.t_override = cell.t;
          p.seed = grid.seed_base + s;
          iteration_config(p).validate(a.rows(), a.cols());
          jobs.push_back({p, result.cells.size()});
        }
        result.cells.push_back(cell);
      }
    }

    std::vector<ExperimentRecord> records(jobs.size());
    const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) if (grid.parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto& job = jobs[static_cast<std::size_t>(i)];
      records[static_cast<std::size_t>(i)] = run_trial_on(a, sigma, label, job.params);
    }

    for (std::size_t c = first_cell; c < result.cells.size(); ++c) {
      auto& cell = result.cells[c];
      std::vector<double> ratios;
      std::vector<double> conditions;
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (jobs[i].cell != c) continue;
        const auto& r = records[i];
        ++cell.trials;
        if (!r.bound_ok) ++cell.failures;
        if (r.ratio) ratios.push_back(*r.ratio);
        if (r.g2_norm && r.g1_inv_norm) conditions.push_back(*r.g2_norm * *r.g1_inv_norm);
      }
      cell.failure_fraction = static_cast<double>(cell.failures) / static_cast<double>(cell.trials);
      if (!ratios.empty()) cell.median_ratio = median(ratios);
      if (!conditions.empty()) cell.median_block_condition = median(conditions);
    }
    result.records.insert(result.records.end(), std::make_move_iterator(records.begin()),
                          std::make_move_iterator(records.end()));
  }
  return result;
}

} // namespace simiter::harness
