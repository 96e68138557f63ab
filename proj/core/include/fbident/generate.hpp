#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fbident/signal.hpp"

namespace fbident {

/// One conjugate pole pair radius * exp(+-j * angle) of an autoregressive
/// process denominator.
struct PolePair {
  double radius = 0.0;  // must satisfy 0 <= radius < 1
  double angle = 0.0;   // radians
};

/// Autoregressive excitation x(n) = -sum_{k>=1} a_k x(n-k) + e(n), driven by
/// white Gaussian e(n) with the given variance and started from a zero state.
struct ArSpec {
  std::vector<PolePair> poles;
  double drive_variance = 1.0;  // >= 0; zero drive yields the all-zero signal
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;      // samples generated and discarded up front
};

/// Denominator [1, a_1, ..., a_{2q}] from expanding
/// prod_i (1 - r_i e^{j theta_i} q)(1 - r_i e^{-j theta_i} q).
/// Throws std::invalid_argument when any radius falls outside [0, 1).
std::vector<double> ar_denominator(const ArSpec& spec);

/// Generates `length` samples of the AR process as a single-channel signal.
/// Deterministic: the same spec (seed included) always produces the same
/// samples.
MultichannelSignal ar_generate(const ArSpec& spec, std::size_t length);

/// White Gaussian measurement noise at a linear signal-to-noise power ratio.
struct NoiseSpec {
  double snr = 1.0;  // linear power ratio, > 0
  std::uint64_t seed = 0;
};

/// Returns the signal with zero-mean white Gaussian noise added per channel;
/// the noise variance on channel c equals that channel's empirical power
/// divided by spec.snr. Rejects snr <= 0 and all-zero channels, whose noise
/// variance would be undefined. An empty signal is returned unchanged.
MultichannelSignal add_noise(const MultichannelSignal& signal, const NoiseSpec& spec);

}  // namespace fbident
