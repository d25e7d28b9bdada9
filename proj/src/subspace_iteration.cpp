#include "simiter/subspace_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simiter/errors.hpp"
#include "simiter/sketch.hpp"

namespace simiter {

void IterationConfig::validate(std::size_t n, std::size_t m) const {
  if (k < 1 || k > std::min(n, m)) {
    throw ContractError("IterationConfig: k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(std::min(n, m)) + "] for a " + std::to_string(n) + "x" +
                        std::to_string(m) + " matrix");
  }
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw ContractError("IterationConfig: epsilon must lie in (0, 1]");
  }
  if (!(c > 0.0) || !std::isfinite(c)) throw ContractError("IterationConfig: c must be positive");
  if (reorth_period < 1) throw ContractError("IterationConfig: reorth_period must be >= 1");
  if (t_override && *t_override < 1) throw ContractError("IterationConfig: t must be >= 1");
}

int choose_t(std::size_t n, double epsilon, double c) {
  if (n < 1) throw ContractError("choose_t: n must be >= 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ContractError("choose_t: epsilon must lie in (0, 1]");
  if (!(c > 0.0)) throw ContractError("choose_t: c must be positive");
  const double raw = c * std::log(static_cast<double>(n) / epsilon) / epsilon;
  return std::max(1, static_cast<int>(std::ceil(raw)));
}

namespace {

Matrix orthonormalize(const Matrix& w) {
  if (!w.all_finite()) {
    throw RankCollapseError("simultaneous_iteration: iterate block overflowed; "
                            "use a smaller reorthonormalization period");
  }
  auto [q, r] = householder_qr(w);
  for (std::size_t j = 0; j < r.rows(); ++j) {
    if (std::abs(r(j, j)) < 1e-300) {
      throw RankCollapseError("simultaneous_iteration: iterate block lost rank at column " +
                              std::to_string(j) + "; try a different seed");
    }
  }
  return q;
}

} // namespace

Matrix simultaneous_iteration(const Matrix& a, const Matrix& g, int t, int reorth_period) {
  if (g.rows() != a.cols()) {
    throw ContractError("simultaneous_iteration: sketch " + g.shape_string() +
                        " does not conform to " + a.shape_string());
  }
  if (g.cols() < 1 || g.cols() > std::min(a.rows(), a.cols())) {
    throw ContractError("simultaneous_iteration: sketch width " + std::to_string(g.cols()) +
                        " must be in [1, min(n, m)]");
  }
  if (t < 1) throw ContractError("simultaneous_iteration: t must be >= 1");
  if (reorth_period < 1) throw ContractError("simultaneous_iteration: reorth_period must be >= 1");

  Matrix w = matmul(a, g);
  for (int step = 1; step <= t; ++step) {
    w = matmul(a, matmul_at_b(a, w));
    if (step % reorth_period == 0 && step != t) w = orthonormalize(w);
  }
  return orthonormalize(w);
}

double low_rank_residual(const Matrix& a, const Matrix& z, bool exact) {
  if (z.rows() != a.rows()) {
    throw ContractError("low_rank_residual: basis " + z.shape_string() + " does not match " +
                        a.shape_string());
  }
  const Matrix r = z.cols() == 0 ? a : a - matmul(z, matmul_at_b(z, a));
  if (exact) return r.empty() ? 0.0 : jacobi_svd(r).sigma.front();
  return spectral_norm(r);
}

Matrix draw_sketch(const Matrix& a, const IterationConfig& cfg) {
  RngStream rng(cfg.seed, cfg.stream_index);
  return gaussian_matrix(a.cols(), cfg.k, rng);
}

ApproximationResult approximate_topk(const Matrix& a, const IterationConfig& cfg) {
  cfg.validate(a.rows(), a.cols());
  ApproximationResult out;
  out.t_used = cfg.t_override.value_or(choose_t(a.rows(), cfg.epsilon, cfg.c));
  out.z = simultaneous_iteration(a, draw_sketch(a, cfg), out.t_used, cfg.reorth_period);
  out.residual = low_rank_residual(a, out.z, cfg.exact_residual);
  return out;
}

} // namespace simiter

namespace simiter {

bool lemma_bound_holds(double residual, double sigma_kplus1, double sigma1, double epsilon) {
  if (sigma_kplus1 <= kNumericalZeroRatio * sigma1) return residual <= 1e-8 * sigma1;
  return residual <= (1.0 + epsilon) * sigma_kplus1 * (1.0 + 1e-6);
}

} // namespace simiter
