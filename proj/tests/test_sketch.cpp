#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "simiter/errors.hpp"
#include "simiter/sketch.hpp"
#include "test_util.hpp"

using namespace simiter;

TEST(RngStream, SameKeySameSequence) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, DistinctStreamsDiffer) {
  RngStream a(42, 0), b(42, 1);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += a.next_u64() == b.next_u64();
  EXPECT_EQ(same, 0);
}

TEST(RngStream, UniformStaysInOpenInterval) {
  RngStream r(1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.next_uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(GaussianMatrix, Shape) {
  RngStream r(3, 0);
  const Matrix g = gaussian_matrix(7, 3, r);
  EXPECT_EQ(g.rows(), 7u);
  EXPECT_EQ(g.cols(), 3u);
}

TEST(GaussianMatrix, Deterministic) {
  RngStream a(9, 4), b(9, 4);
  EXPECT_EQ(gaussian_matrix(11, 5, a), gaussian_matrix(11, 5, b));
}

TEST(GaussianMatrix, MomentsAtFixedSeed) {
  RngStream r(2024, 0);
  const Matrix g = gaussian_matrix(200, 200, r);
  double sum = 0.0;
  for (double x : g.data()) sum += x;
  const double mean = sum / static_cast<double>(g.size());
  double ss = 0.0;
  for (double x : g.data()) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(g.size() - 1);
  EXPECT_LT(std::abs(mean), 0.02);
  EXPECT_LT(std::abs(var - 1.0), 0.05);
}

TEST(RandomOrthonormal, UnitVector) {
  RngStream r(5, 0);
  const Matrix q = random_orthonormal(30, 1, r);
  EXPECT_NEAR(q.frobenius_norm(), 1.0, 1e-12);
}

TEST(RandomOrthonormal, OrthonormalColumns) {
  RngStream r(6, 0);
  const Matrix q = random_orthonormal(50, 10, r);
  EXPECT_LE(test_util::orthonormality_error(q), 1e-10);
}

TEST(RandomOrthonormal, StreamsGiveDifferentBases) {
  RngStream a(6, 0), b(6, 1);
  EXPECT_NE(random_orthonormal(20, 4, a), random_orthonormal(20, 4, b));
}

TEST(RandomOrthonormal, RejectsWide) {
  RngStream r(1, 0);
  EXPECT_THROW(random_orthonormal(3, 4, r), ContractError);
}

// A Gaussian block rotated by a fixed orthogonal matrix is again Gaussian, so
// the condition product of its k x k / remainder split has the same law.
TEST(RotationInvariance, BlockConditionMediansAgree) {
  constexpr std::size_t m = 60;
  constexpr std::size_t k = 5;
  RngStream vr(77, 0);
  const Matrix v = random_orthonormal(m, m, vr);
  std::vector<double> plain, rotated;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RngStream r(seed, 3);
    const Matrix g = gaussian_matrix(m, k, r);
    auto condition = [&](const Matrix& gp) {
      const Matrix g1 = gp.row_block(0, k);
      const Matrix g2 = gp.row_block(k, m - k);
      return spectral_norm(g2) / min_singular_value(g1);
    };
    plain.push_back(condition(g));
    rotated.push_back(condition(matmul_at_b(v, g)));
  }
  auto med = [](std::vector<double> x) {
    std::sort(x.begin(), x.end());
    return 0.5 * (x[x.size() / 2 - 1] + x[x.size() / 2]);
  };
  const double a = med(plain);
  const double b = med(rotated);
  EXPECT_LT(std::abs(a - b) / std::max(a, b), 0.25) << "medians " << a << " vs " << b;
}
