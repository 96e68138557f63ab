#pragma once

#include <cstdint>
#include <random>

namespace fbident {

/// Standard normal deviates drawn from a seeded mt19937_64 through the
/// Box-Muller transform. The transform is spelled out in the implementation
/// instead of relying on std::normal_distribution so that a given seed
/// reproduces the same sample stream on every platform this library is built
/// for.
///
/// `stream` is mixed into the engine seed and decorrelates generators that
/// happen to share a seed but serve different purposes (process drive vs
/// measurement noise, for example).
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed, std::uint64_t stream = 0);

  /// One N(0, 1) sample.
  double operator()();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fbident
