#include "simiter/proof_tracer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "simiter/errors.hpp"
#include "simiter/matrix_io.hpp"

namespace simiter::tracer {

RotatedSketch rotate_sketch(const Matrix& a, const Matrix& g) {
  if (g.rows() != a.cols()) {
    throw ContractError("rotate_sketch: sketch " + g.shape_string() + " does not conform to " +
                        a.shape_string());
  }
  RotatedSketch out{jacobi_svd(a), Matrix{}};
  out.g_rot = rotate_sketch(out.svd, g);
  return out;
}

Matrix rotate_sketch(const SvdFactorization& svd, const Matrix& g) {
  if (g.rows() != svd.v.rows()) {
    throw ContractError("rotate_sketch: sketch " + g.shape_string() + " does not conform to V " +
                        svd.v.shape_string());
  }
  return matmul_at_b(svd.v, g);
}

SketchBlocks split_blocks(const Matrix& g_rot, std::size_t k) {
  if (g_rot.cols() != k) {
    throw ContractError("split_blocks: expected " + std::to_string(k) + " columns, got " +
                        g_rot.shape_string());
  }
  if (k > g_rot.rows()) {
    throw ContractError("split_blocks: k=" + std::to_string(k) + " exceeds the " +
                        std::to_string(g_rot.rows()) + " rows of the rotated sketch");
  }
  return {g_rot.row_block(0, k), g_rot.row_block(k, g_rot.rows() - k)};
}

BlockNorms gaussian_block_norms(const Matrix& g1, const Matrix& g2) {
  const double smin = min_singular_value(g1);
  if (smin < 1e-300) {
    throw SingularBlockError("gaussian_block_condition: leading block is singular (sigma_min = " +
                             format_double(smin) + ")");
  }
  BlockNorms out;
  out.g1_inv_norm = 1.0 / smin;
  out.g2_norm = g2.rows() == 0 ? 0.0 : spectral_norm(g2);
  return out;
}

double gaussian_block_condition(const Matrix& g1, const Matrix& g2) {
  return gaussian_block_norms(g1, g2).condition();
}

std::optional<std::size_t> effective_rank(const std::vector<double>& sigma, std::size_t k,
                                          double epsilon) {
  if (sigma.size() <= k) {
    throw ContractError("effective_rank: need more than k=" + std::to_string(k) +
                        " singular values, got " + std::to_string(sigma.size()));
  }
  const double threshold = (1.0 + epsilon) * sigma[k];
  std::size_t count = 0;
  while (count < k && sigma[count] >= threshold) ++count;
  if (count == 0) return std::nullopt;
  return count;
}

std::optional<std::vector<double>> worst_direction(const Matrix& a, const Matrix& z,
                                                   const SvdFactorization& svd) {
  if (z.rows() != a.rows() || svd.u.rows() != a.rows()) {
    throw ContractError("worst_direction: shapes do not conform (A " + a.shape_string() +
                        ", Z " + z.shape_string() + ", U " + svd.u.shape_string() + ")");
  }
  const double sigma1 = svd.sigma.empty() ? 0.0 : svd.sigma.front();
  const Matrix r = z.cols() == 0 ? a : a - matmul(z, matmul_at_b(z, a));
  const auto rsvd = jacobi_svd(r);
  if (sigma1 == 0.0 || rsvd.sigma.front() <= 1e-10 * sigma1) return std::nullopt;

  const Matrix x = rsvd.u.col_block(0, 1);
  const Matrix y = matmul_at_b(svd.u, x);
  return y.column(0);
}

std::vector<CoefficientMargin> y1_coefficient_bounds(const std::vector<double>& y,
                                                     const std::vector<double>& sigma,
                                                     std::size_t k, int t, double g2_norm,
                                                     double g1_inv_norm) {
  if (y.size() < k || sigma.size() < k) {
    throw ContractError("y1_coefficient_bounds: need at least k=" + std::to_string(k) +
                        " coefficients and singular values");
  }
  const double sigma_next = k < sigma.size() ? sigma[k] : 0.0;
  const double factor = g2_norm * g1_inv_norm;
  std::vector<CoefficientMargin> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (sigma[i] == 0.0) continue;
    CoefficientMargin m;
    m.index = i;
    m.bound = std::pow(sigma_next / sigma[i], 2.0 * t + 1.0) * factor;
    m.abs_y = std::abs(y[i]);
    m.margin = m.bound - m.abs_y;
    out.push_back(m);
  }
  return out;
}

TailCheck tail_bound_check(const std::vector<double>& y, const std::vector<double>& sigma,
                           std::size_t kprime, double epsilon, std::size_t k) {
  if (y.size() != sigma.size()) {
    throw ContractError("tail_bound_check: y and sigma lengths differ");
  }
  if (kprime > k) throw ContractError("tail_bound_check: kprime exceeds k");
  const double sigma_next = k < sigma.size() ? sigma[k] : 0.0;
  TailCheck out;
  for (std::size_t i = kprime; i < y.size(); ++i) out.tail += y[i] * y[i] * sigma[i] * sigma[i];
  out.limit = (1.0 + epsilon) * (1.0 + epsilon) * sigma_next * sigma_next;
  out.unsquared_limit = (1.0 + epsilon) * sigma_next * sigma_next;
  return out;
}

double min_t_for_bound(double g2_norm, double g1_inv_norm, std::size_t k, double epsilon) {
  const double x = g2_norm * g2_norm * g1_inv_norm * g1_inv_norm * static_cast<double>(k) / epsilon;
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(x) / (4.0 * std::log1p(epsilon));
}

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const TraceError&) {
    throw;
  } catch (const std::exception& e) {
    throw TraceError(name, e.what());
  }
}

} // namespace

TraceReport trace(const Matrix& a, const IterationConfig& cfg) {
  cfg.validate(a.rows(), a.cols());
  TraceReport rep;
  rep.k = cfg.k;
  rep.epsilon = cfg.epsilon;
  rep.t_used = cfg.t_override.value_or(choose_t(a.rows(), cfg.epsilon, cfg.c));

  const Matrix g = draw_sketch(a, cfg);
  const auto rotated = stage("rotate_sketch", [&] { return rotate_sketch(a, g); });
  const auto& svd = rotated.svd;
  rep.sigma = svd.sigma;
  const std::size_t k = cfg.k;
  const double sigma1 = rep.sigma.front();
  rep.sigma_kplus1 = k < rep.sigma.size() ? rep.sigma[k] : 0.0;

  const auto blocks = stage("split_blocks", [&] { return split_blocks(rotated.g_rot, k); });
  const auto norms =
      stage("gaussian_block_condition", [&] { return gaussian_block_norms(blocks.g1, blocks.g2); });
  rep.g2_norm = norms.g2_norm;
  rep.g1_inv_norm = norms.g1_inv_norm;

  auto padded = rep.sigma;
  if (padded.size() == k) padded.push_back(0.0);
  rep.kprime = effective_rank(padded, k, cfg.epsilon);

  const Matrix z =
      stage("simultaneous_iteration", [&] { return simultaneous_iteration(a, g, rep.t_used, cfg.reorth_period); });
  rep.residual = stage("low_rank_residual", [&] { return low_rank_residual(a, z, cfg.exact_residual); });
  rep.y = stage("worst_direction", [&] { return worst_direction(a, z, svd); });

  if (rep.y) {
    const auto& y = *rep.y;
    double ny2 = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      ny2 += y[i] * y[i];
      weighted += y[i] * y[i] * rep.sigma[i] * rep.sigma[i];
    }
    rep.y_unit_ok = std::abs(std::sqrt(ny2) - 1.0) <= 1e-9;
    rep.residual_from_y = std::sqrt(weighted);
    const double r2 = rep.residual * rep.residual;
    rep.identity_ok = std::abs(r2 - weighted) <= 1e-6 * std::max(r2, weighted);

    rep.y1_margins = y1_coefficient_bounds(y, rep.sigma, k, rep.t_used, rep.g2_norm, rep.g1_inv_norm);
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& m : rep.y1_margins) {
      rep.worst_margin = std::min(rep.worst_margin, m.margin);
      rep.margins_ok = rep.margins_ok && m.passes();
    }
    if (rep.y1_margins.empty()) rep.worst_margin = 0.0;
    rep.tail = tail_bound_check(y, rep.sigma, rep.kprime.value_or(0), cfg.epsilon, k);
    rep.tail_ok = rep.tail.passes();
  } else {
    // Z already spans everything A reaches; the direction-based checks are vacuous.
    rep.identity_ok = rep.residual <= 1e-8 * sigma1;
    rep.tail = tail_bound_check(std::vector<double>(rep.sigma.size(), 0.0), rep.sigma,
                                rep.kprime.value_or(0), cfg.epsilon, k);
  }

  rep.min_t = min_t_for_bound(rep.g2_norm, rep.g1_inv_norm, k, cfg.epsilon);
  rep.min_t_scaled = rep.sigma_kplus1 > 0.0
                         ? min_t_for_bound(rep.g2_norm, rep.g1_inv_norm, k,
                                           cfg.epsilon * rep.sigma_kplus1 * rep.sigma_kplus1)
                         : std::numeric_limits<double>::infinity();

  rep.bound = (1.0 + cfg.epsilon) * rep.sigma_kplus1;
  rep.lemma_ok = lemma_bound_holds(rep.residual, rep.sigma_kplus1, sigma1, cfg.epsilon);
  if (rep.t_used >= rep.min_t) rep.sufficiency_ok = rep.lemma_ok;
  return rep;
}

std::string render(const TraceReport& r) {
  std::ostringstream os;
  auto f = [](double x) { return format_double(x); };
  auto verdict = [](bool ok) { return ok ? "ok" : "VIOLATED"; };
  os << "k = " << r.k << ", eps = " << f(r.epsilon) << ", t = " << r.t_used << "\n";
  os << "sigma_1 = " << f(r.sigma.front()) << ", sigma_{k+1} = " << f(r.sigma_kplus1) << "\n";
  if (r.kprime) {
    os << "effective rank k' = " << *r.kprime << "\n";
  } else {
    os << "effective rank: none (sigma_1 < (1+eps) sigma_{k+1}); claim trivial\n";
  }
  os << "||G'_2|| = " << f(r.g2_norm) << ", ||G'_1^-1|| = " << f(r.g1_inv_norm)
     << ", product = " << f(r.g2_norm * r.g1_inv_norm) << "\n";
  if (!r.y) {
    os << "worst direction: none, residual is numerically zero\n";
  } else {
    os << "||y|| = 1: " << verdict(r.y_unit_ok) << "\n";
    os << "residual^2 = sum y_i^2 sigma_i^2: " << f(r.residual * r.residual) << " vs "
       << f(r.residual_from_y * r.residual_from_y) << " " << verdict(r.identity_ok) << "\n";
    for (const auto& m : r.y1_margins) {
      os << "  |y_" << (m.index + 1) << "| = " << f(m.abs_y) << " <= " << f(m.bound) << "  "
         << verdict(m.passes()) << "\n";
    }
  }
  os << "tail = " << f(r.tail.tail) << " <= (1+eps)^2 sigma_{k+1}^2 = " << f(r.tail.limit) << " "
     << verdict(r.tail_ok) << " (unsquared limit " << f(r.tail.unsquared_limit) << ")\n";
  os << "min t (dimensionless eps) = " << f(r.min_t) << ", min t (eps sigma_{k+1}^2) = "
     << f(r.min_t_scaled) << ", t used = " << r.t_used << "\n";
  os << "residual = " << f(r.residual) << " <= (1+eps) sigma_{k+1} = " << f(r.bound) << " "
     << verdict(r.lemma_ok) << "\n";
  if (r.sufficiency_ok) {
    os << "t_used >= min t, bound must hold: " << verdict(*r.sufficiency_ok) << "\n";
  }
  return os.str();
}

} // namespace simiter::tracer
