#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "simiter/dense.hpp"
#include "simiter/matrix.hpp"
#include "simiter/subspace_iteration.hpp"

// Numerical check of the gap-free convergence argument on a concrete
// instance. Indices are 0-based: sigma[i] is the (i+1)-th singular value and
// sigma[k] is the first one outside the target rank.
namespace simiter::tracer {

/// Oracle SVD of A and the sketch expressed in A's right singular basis.
struct RotatedSketch {
  SvdFactorization svd;
  Matrix g_rot; ///< V^T G, r x k with r = min(n, m)
};

struct SketchBlocks {
  Matrix g1; ///< leading k x k block
  Matrix g2; ///< remaining (r - k) x k rows
};

struct BlockNorms {
  double g2_norm = 0.0;     ///< ||G'_2||
  double g1_inv_norm = 0.0; ///< ||G'_1^{-1}|| = 1 / sigma_min(G'_1)
  double condition() const { return g2_norm * g1_inv_norm; }
};

struct CoefficientMargin {
  std::size_t index = 0; ///< 0-based singular index, < k
  double bound = 0.0;    ///< (sigma_k / sigma_i)^(2t+1) ||G'_2|| ||G'_1^{-1}||
  double abs_y = 0.0;
  double margin = 0.0;   ///< bound - |y_i|
  bool passes() const { return margin >= -1e-6 * (1.0 + std::abs(bound)); }
};

struct TailCheck {
  double tail = 0.0;        ///< sum_{i >= k'} y_i^2 sigma_i^2
  double limit = 0.0;       ///< (1 + eps)^2 sigma_{k+1}^2, the term-wise bound
  double unsquared_limit = 0.0; ///< (1 + eps) sigma_{k+1}^2
  bool passes() const { return tail <= limit * (1.0 + 1e-9); }
};

/// Labels which tracer stage failed; the message carries the original error.
class TraceError : public std::runtime_error {
public:
  TraceError(std::string stage, const std::string& what)
      : std::runtime_error("trace[" + stage + "]: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

private:
  std::string stage_;
};

struct TraceReport {
  std::vector<double> sigma;
  std::size_t k = 0;
  double epsilon = 0.0;
  double sigma_kplus1 = 0.0;
  std::optional<std::size_t> kprime; ///< empty: no index clears (1+eps) sigma_k, claim trivial

  double g2_norm = 0.0;
  double g1_inv_norm = 0.0;

  /// Worst direction in the singular basis; empty when Z captures all of A.
  std::optional<std::vector<double>> y;
  std::vector<CoefficientMargin> y1_margins;
  double worst_margin = 0.0;

  TailCheck tail;
  double min_t = 0.0;        ///< t needed with a dimensionless eps on the right-hand side
  double min_t_scaled = 0.0; ///< same, with eps * sigma_k^2 on the right-hand side
  int t_used = 0;

  double residual = 0.0;          ///< measured ||A - Z Z^T A||
  double residual_from_y = 0.0;   ///< sqrt(sum y_i^2 sigma_i^2)
  double bound = 0.0;             ///< (1 + eps) sigma_k

  bool y_unit_ok = true;
  bool identity_ok = true;
  bool margins_ok = true;
  bool tail_ok = true;
  bool lemma_ok = false;
  /// Set only when t_used >= min_t: whether the bound then holds.
  std::optional<bool> sufficiency_ok;

  bool all_checks_pass() const {
    return y_unit_ok && identity_ok && margins_ok && tail_ok && sufficiency_ok.value_or(true);
  }
};

RotatedSketch rotate_sketch(const Matrix& a, const Matrix& g);
/// V^T G for an already computed factorization.
Matrix rotate_sketch(const SvdFactorization& svd, const Matrix& g);

SketchBlocks split_blocks(const Matrix& g_rot, std::size_t k);

/// Both norms separately; g2_norm is 0 when g2 has no rows. Throws
/// SingularBlockError when sigma_min(g1) < 1e-300.
BlockNorms gaussian_block_norms(const Matrix& g1, const Matrix& g2);
/// ||G'_2|| / sigma_min(G'_1).
double gaussian_block_condition(const Matrix& g1, const Matrix& g2);

/// Largest k' in [1, k] with sigma_{k'} >= (1 + eps) sigma_{k+1}, counted
/// 1-based; empty when even sigma_1 falls short. Requires sigma.size() > k.
std::optional<std::size_t> effective_rank(const std::vector<double>& sigma, std::size_t k,
                                          double epsilon);

/// y = U^T x for the top left singular vector x of (I - Z Z^T) A, or empty
/// when that residual is numerically zero (below 1e-10 sigma_1).
std::optional<std::vector<double>> worst_direction(const Matrix& a, const Matrix& z,
                                                   const SvdFactorization& svd);

/// Per-index slack of |y_i| <= (sigma_{k+1}/sigma_i)^(2t+1) ||G'_2|| ||G'_1^{-1}||
/// for i < k. Indices with sigma_i == 0 are skipped.
std::vector<CoefficientMargin> y1_coefficient_bounds(const std::vector<double>& y,
                                                     const std::vector<double>& sigma,
                                                     std::size_t k, int t, double g2_norm,
                                                     double g1_inv_norm);

/// Tail of ||y^T S||^2 past the effective rank. `kprime` is the 1-based
/// effective rank (0 when there is none, in which case the whole sum is tail).
TailCheck tail_bound_check(const std::vector<double>& y, const std::vector<double>& sigma,
                           std::size_t kprime, double epsilon, std::size_t k);

/// ln(g2^2 g1inv^2 k / eps) / (4 ln(1 + eps)). Non-positive means any t >= 1 works.
double min_t_for_bound(double g2_norm, double g1_inv_norm, std::size_t k, double epsilon);

/// Runs the full pipeline with the same sketch approximate_topk would draw.
TraceReport trace(const Matrix& a, const IterationConfig& cfg);

/// Multi-line rendering of every checked inequality with both sides.
std::string render(const TraceReport& report);

} // namespace simiter::tracer
