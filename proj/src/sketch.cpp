#include "simiter/sketch.hpp"

#include <cmath>
#include <numbers>

#include "simiter/dense.hpp"
#include "simiter/errors.hpp"

namespace simiter {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
    : seed_(seed), stream_index_(stream_index),
      key_(mix64(seed ^ mix64(stream_index ^ 0x632be59bd9b4e019ULL))) {}

std::uint64_t RngStream::next_u64() noexcept { return mix64(key_ ^ mix64(counter_++)); }

double RngStream::next_uniform() noexcept {
  constexpr double kInv53 = 1.0 / 9007199254740992.0; // 2^-53
  return (static_cast<double>(next_u64() >> 11) + 0.5) * kInv53;
}

double RngStream::next_normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
  Matrix g(rows, cols);
  for (double& x : g.data()) x = rng.next_normal();
  return g;
}

Matrix random_orthonormal(std::size_t n, std::size_t r, RngStream& rng) {
  if (r > n) {
    throw ContractError("random_orthonormal: need n >= r, got n=" + std::to_string(n) +
                        " r=" + std::to_string(r));
  }
  auto [q, rfac] = householder_qr(gaussian_matrix(n, r, rng));
  for (std::size_t j = 0; j < r; ++j) {
    if (!(rfac(j, j) > 0.0)) {
      throw RankCollapseError("random_orthonormal: Gaussian draw is rank deficient");
    }
  }
  return q;
}

} // namespace simiter
