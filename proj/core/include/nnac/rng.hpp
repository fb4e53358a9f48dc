#pragma once

#include <cstdint>
#include <random>

#include "nnac/linalg.hpp"

namespace nnac {

/// Seedable generator with a platform-independent output stream.
///
/// Backed by std::mt19937_64 (whose sequence is fixed by the standard) seeded
/// through std::seed_seq, and maps raw 64-bit draws to doubles itself instead
/// of using std::uniform_real_distribution, whose algorithm is left to the
/// library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform draw in [lo, hi).
  double uniform(double lo, double hi);
  Vector uniform_vector(Index n, double lo, double hi);
  Matrix uniform_matrix(Index rows, Index cols, double lo, double hi);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// Weight initialisation range used for every network in the project.
inline constexpr double kInitWeightBound = 0.1;

}  // namespace nnac
