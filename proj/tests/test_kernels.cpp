#include <gtest/gtest.h>

#include <omp.h>

#include "simiter/kernels.hpp"
#include "test_util.hpp"

using namespace simiter;

namespace {

class ThreadsGuard {
public:
  explicit ThreadsGuard(int n) : saved_(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadsGuard() { omp_set_num_threads(saved_); }

private:
  int saved_;
};

} // namespace

TEST(Kernels, SerialMatmulMatchesNaiveOracle) {
  const Matrix a = test_util::random_matrix(17, 23, 1);
  const Matrix b = test_util::random_matrix(23, 9, 2);
  Matrix out(17, 9);
  kernels::serial::matmul(a, b, out);
  EXPECT_LE(max_abs_diff(out, test_util::naive_matmul(a, b)), 1e-12);
}

TEST(Kernels, ParallelIsBitIdenticalToSerial) {
  ThreadsGuard threads(4);
  const Matrix a = test_util::random_matrix(61, 47, 3);
  const Matrix b = test_util::random_matrix(47, 13, 4);
  const Matrix c = test_util::random_matrix(61, 13, 5);

  Matrix s(61, 13), p(61, 13);
  kernels::serial::matmul(a, b, s);
  kernels::parallel::matmul(a, b, p);
  EXPECT_EQ(s, p);

  Matrix st(47, 13), pt(47, 13);
  kernels::serial::matmul_at_b(a, c, st);
  kernels::parallel::matmul_at_b(a, c, pt);
  EXPECT_EQ(st, pt);
  EXPECT_LE(max_abs_diff(st, test_util::naive_matmul(transpose(a), c)), 1e-12);

  std::vector<double> x(47), y_s(61), y_p(61);
  std::vector<double> w(61), z_s(47), z_p(47);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = b(i, 0);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = c(i, 0);
  kernels::serial::matvec(a, x, y_s);
  kernels::parallel::matvec(a, x, y_p);
  EXPECT_EQ(y_s, y_p);
  kernels::serial::matvec_t(a, w, z_s);
  kernels::parallel::matvec_t(a, w, z_p);
  EXPECT_EQ(z_s, z_p);
}

TEST(Kernels, DispatchingMatmulIsThreadCountInvariant) {
  const Matrix a = test_util::random_matrix(120, 90, 6);
  const Matrix b = test_util::random_matrix(90, 40, 7);
  Matrix one, many;
  {
    ThreadsGuard threads(1);
    one = matmul(a, b);
  }
  {
    ThreadsGuard threads(3);
    many = matmul(a, b);
  }
  EXPECT_EQ(one, many);
}
