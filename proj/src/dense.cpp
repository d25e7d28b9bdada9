#include "simiter/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "simiter/errors.hpp"
#include "simiter/kernels.hpp"
#include "simiter/sketch.hpp"

namespace simiter {

namespace {

bool use_parallel(double work) {
  return work >= kernels::kParallelThreshold && kernels::max_threads() > 1 &&
         !kernels::in_parallel_region();
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double ss = 0.0;
  for (double v : x) {
    const double y = v / scale;
    ss += y * y;
  }
  return scale * std::sqrt(ss);
}

// x[i] -= tau * (v . x) * v[i], the action of I - tau v v^T on x.
void apply_reflector(std::span<const double> v, double tau, std::span<double> x) {
  const double s = tau * dot(v, x);
  if (s == 0.0) return;
  for (std::size_t i = 0; i < v.size(); ++i) x[i] -= s * v[i];
}

} // namespace

Matrix SvdFactorization::reconstruct() const {
  Matrix us = u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= sigma[j];
  return matmul(us, transpose(v));
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ContractError("matmul: inner dimensions differ, " + a.shape_string() + " times " +
                        b.shape_string());
  }
  Matrix out(a.rows(), b.cols());
  const double work = static_cast<double>(a.rows()) * a.cols() * b.cols();
  if (use_parallel(work)) {
    kernels::parallel::matmul(a, b, out);
  } else {
    kernels::serial::matmul(a, b, out);
  }
  return out;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ContractError("matmul_at_b: row counts differ, transpose of " + a.shape_string() +
                        " times " + b.shape_string());
  }
  Matrix out(a.cols(), b.cols());
  const double work = static_cast<double>(a.rows()) * a.cols() * b.cols();
  if (use_parallel(work)) {
    kernels::parallel::matmul_at_b(a, b, out);
  } else {
    kernels::serial::matmul_at_b(a, b, out);
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

QrFactorization householder_qr(const Matrix& a) {
  const std::size_t n = a.rows();
  const std::size_t k = a.cols();
  if (n < k) {
    throw ContractError("householder_qr: thin QR needs rows >= cols, got " + a.shape_string());
  }

  // Work on columns as contiguous rows.
  Matrix w = transpose(a);
  std::vector<std::vector<double>> reflectors(k);
  std::vector<double> taus(k, 0.0);
  Matrix r(k, k);

  for (std::size_t j = 0; j < k; ++j) {
    auto col = w.row(j).subspan(j);
    const double norm = norm2(col);
    if (norm == 0.0) continue; // r(j, j) stays 0, identity reflector
    const double alpha = col[0] >= 0.0 ? -norm : norm;
    std::vector<double> v(col.begin(), col.end());
    v[0] -= alpha;
    const double vnorm = norm2(v);
    if (vnorm == 0.0) continue;
    for (double& x : v) x /= vnorm;
    taus[j] = 2.0;
    for (std::size_t l = j + 1; l < k; ++l) apply_reflector(v, 2.0, w.row(l).subspan(j));
    std::fill(col.begin(), col.end(), 0.0);
    col[0] = alpha;
    reflectors[j] = std::move(v);
  }
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t l = j; l < k; ++l) r(j, l) = w(l, j);

  // Q = H_0 H_1 ... H_{k-1} applied to the first k columns of I.
  Matrix qt(k, n);
  for (std::size_t l = 0; l < k; ++l) qt(l, l) = 1.0;
  for (std::size_t jj = k; jj-- > 0;) {
    if (taus[jj] == 0.0) continue;
    for (std::size_t l = 0; l < k; ++l) apply_reflector(reflectors[jj], taus[jj], qt.row(l).subspan(jj));
  }

  for (std::size_t j = 0; j < k; ++j) {
    if (r(j, j) < 0.0) {
      for (std::size_t l = j; l < k; ++l) r(j, l) = -r(j, l);
      for (double& x : qt.row(j)) x = -x;
    }
  }
  return {transpose(qt), std::move(r)};
}

namespace {

// Orthonormal completion: a unit vector orthogonal to the first `filled`
// columns of u (given as rows of ut).
std::vector<double> complete_basis(const Matrix& ut, const std::vector<bool>& filled) {
  const std::size_t n = ut.cols();
  std::vector<double> best;
  double best_norm = -1.0;
  for (std::size_t e = 0; e < n; ++e) {
    std::vector<double> x(n, 0.0);
    x[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < ut.rows(); ++j) {
        if (!filled[j]) continue;
        const auto q = ut.row(j);
        const double s = dot(q, x);
        for (std::size_t i = 0; i < n; ++i) x[i] -= s * q[i];
      }
    }
    const double nx = norm2(x);
    if (nx > best_norm) {
      best_norm = nx;
      best = std::move(x);
    }
    if (best_norm > 0.7) break;
  }
  for (double& x : best) x /= best_norm;
  return best;
}

SvdFactorization jacobi_svd_tall(const Matrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  Matrix w = transpose(a);          // row j: column j of the rotated a
  Matrix vt = Matrix::identity(m);  // row j: column j of v

  bool converged = m < 2;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        auto wp = w.row(p);
        auto wq = w.row(q);
        const double alpha = dot(wp, wp);
        const double beta = dot(wq, wq);
        if (alpha == 0.0 || beta == 0.0) continue;
        const double gamma = dot(wp, wq);
        if (std::abs(gamma) <= kJacobiTolerance * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::abs(zeta) > 1e150
                             ? 0.5 / zeta
                             : std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const double x = wp[i];
          const double y = wq[i];
          wp[i] = c * x - s * y;
          wq[i] = s * x + c * y;
        }
        auto vp = vt.row(p);
        auto vq = vt.row(q);
        for (std::size_t i = 0; i < m; ++i) {
          const double x = vp[i];
          const double y = vq[i];
          vp[i] = c * x - s * y;
          vq[i] = s * x + c * y;
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw ConvergenceError("jacobi_svd: no convergence after " + std::to_string(kJacobiMaxSweeps) +
                           " sweeps on a " + a.shape_string() + " matrix");
  }

  std::vector<double> norms(m);
  for (std::size_t j = 0; j < m; ++j) norms[j] = norm2(w.row(j));
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  SvdFactorization out;
  out.sigma.resize(m);
  Matrix ut(m, n);
  Matrix vt_sorted(m, m);
  std::vector<bool> filled(m, false);
  constexpr double kNullThreshold = 1e-290;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t src = order[j];
    out.sigma[j] = norms[src];
    std::copy(vt.row(src).begin(), vt.row(src).end(), vt_sorted.row(j).begin());
    if (norms[src] > kNullThreshold) {
      auto dst = ut.row(j);
      const auto col = w.row(src);
      for (std::size_t i = 0; i < n; ++i) dst[i] = col[i] / norms[src];
      filled[j] = true;
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (filled[j]) continue;
    const auto e = complete_basis(ut, filled);
    std::copy(e.begin(), e.end(), ut.row(j).begin());
    filled[j] = true;
  }
  out.u = transpose(ut);
  out.v = transpose(vt_sorted);
  return out;
}

} // namespace

SvdFactorization jacobi_svd(const Matrix& a) {
  if (a.rows() >= a.cols()) return jacobi_svd_tall(a);
  auto t = jacobi_svd_tall(transpose(a));
  std::swap(t.u, t.v);
  return t;
}

double spectral_norm(const Matrix& a, double tol, int max_iters, std::uint64_t seed) {
  if (!(tol > 0.0)) throw ContractError("spectral_norm: tol must be positive");
  if (a.empty() || a.frobenius_norm() == 0.0) return 0.0;

  const bool par = use_parallel(static_cast<double>(a.size()));
  auto apply = [&](std::span<const double> x, std::span<double> y) {
    par ? kernels::parallel::matvec(a, x, y) : kernels::serial::matvec(a, x, y);
  };
  auto apply_t = [&](std::span<const double> x, std::span<double> y) {
    par ? kernels::parallel::matvec_t(a, x, y) : kernels::serial::matvec_t(a, x, y);
  };

  RngStream rng(mix64(seed) ^ mix64(a.rows() * 0x100000001b3ULL + a.cols()), 0xa5a5a5a5ULL);
  std::vector<double> v(a.cols());
  std::vector<double> w(a.rows());
  auto draw = [&] {
    for (double& x : v) x = rng.next_normal();
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
  };
  draw();

  double previous = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    apply(v, w);
    const double nw = norm2(w);
    if (nw == 0.0) { // start vector lies in the null space
      draw();
      previous = 0.0;
      continue;
    }
    apply_t(w, v);
    const double nv = norm2(v);
    // ||A^T A v|| / ||A v|| sits between ||A v|| and sigma_1.
    const double estimate = nv / nw;
    for (double& x : v) x /= nv;
    if (previous > 0.0 && std::abs(estimate - previous) <= tol * estimate) return estimate;
    previous = estimate;
  }
  throw ConvergenceError("spectral_norm: no convergence within " + std::to_string(max_iters) +
                         " iterations on a " + a.shape_string() + " matrix");
}

double min_singular_value(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ContractError("min_singular_value: needs a non-empty square matrix, got " +
                        a.shape_string());
  }
  return jacobi_svd(a).sigma.back();
}

} // namespace simiter
