#pragma once

#include <cstdint>
#include <optional>

#include "simiter/dense.hpp"
#include "simiter/matrix.hpp"

namespace simiter {

/// Parameters of one randomized simultaneous-iteration run.
struct IterationConfig {
  std::size_t k = 1;             ///< target rank
  double epsilon = 0.25;         ///< accuracy parameter, 0 < epsilon <= 1
  double c = 1.0;                ///< schedule constant in t = c ln(n/eps)/eps
  std::optional<int> t_override; ///< explicit iteration count
  int reorth_period = 1;         ///< QR every this many (A A^T) applications
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
  bool exact_residual = false;   ///< measure the residual with the Jacobi oracle

  /// Throws ContractError unless the config is usable on an n x m matrix.
  void validate(std::size_t n, std::size_t m) const;
};

struct ApproximationResult {
  Matrix z;                           ///< n x k, orthonormal columns
  int t_used = 0;
  double residual = 0.0;              ///< ||A - Z Z^T A||
  std::optional<double> sigma_kplus1; ///< filled by callers that know the spectrum
};

/// max(1, ceil(c * ln(n / epsilon) / epsilon)).
int choose_t(std::size_t n, double epsilon, double c);

/// Orthonormal basis of span((A A^T)^t A G).
///
/// Computes W = A G, then applies W <- A (A^T W) t times, replacing W by the
/// Q factor of its QR every `reorth_period` applications and once at the end.
/// Throws RankCollapseError when a QR diagonal falls below 1e-300 or the block
/// stops being finite.
Matrix simultaneous_iteration(const Matrix& a, const Matrix& g, int t, int reorth_period = 1);

/// ||A - Z (Z^T A)|| by power iteration (or the Jacobi oracle when `exact`).
double low_rank_residual(const Matrix& a, const Matrix& z, bool exact = false);

/// The sketch used by approximate_topk for (a, cfg): an m x k Gaussian on
/// stream (cfg.seed, cfg.stream_index).
Matrix draw_sketch(const Matrix& a, const IterationConfig& cfg);

/// Draws G, picks t, runs simultaneous_iteration and measures the residual.
/// Deterministic in (a, cfg).
ApproximationResult approximate_topk(const Matrix& a, const IterationConfig& cfg);

} // namespace simiter

namespace simiter {

/// sigma_{k+1} at or below this fraction of sigma_1 counts as zero.
inline constexpr double kNumericalZeroRatio = 1e-12;

/// residual <= (1 + eps) sigma_{k+1} (1 + 1e-6), or residual <= 1e-8 sigma_1
/// when sigma_{k+1} is numerically zero.
bool lemma_bound_holds(double residual, double sigma_kplus1, double sigma1, double epsilon);

} // namespace simiter
