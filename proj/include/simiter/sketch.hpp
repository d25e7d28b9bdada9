#pragma once

#include <cstddef>
#include <cstdint>

#include "simiter/matrix.hpp"

namespace simiter {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based pseudo-random stream keyed by (seed, stream_index).
///
/// The i-th 64-bit word is a pure function of (seed, stream_index, i), so two
/// streams with the same key replay the same variates and streams with
/// different indices share no state. Normals come from Box-Muller pairs.
/// A stream is a value; do not consume one instance from several threads.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }
  std::uint64_t position() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double next_uniform() noexcept;
  /// Standard normal.
  double next_normal() noexcept;

private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// rows x cols matrix of i.i.d. standard normals, filled in row-major order.
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, RngStream& rng);

/// n x r matrix with orthonormal columns: the Q factor of a Gaussian draw.
/// Throws RankCollapseError if the draw is rank deficient.
Matrix random_orthonormal(std::size_t n, std::size_t r, RngStream& rng);

} // namespace simiter
