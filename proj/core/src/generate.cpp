#include "fbident/generate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fbident/random.hpp"

namespace fbident {
namespace {

// Distinct role tags keep drive and measurement noise decorrelated even when
// a caller reuses one seed for both.
constexpr std::uint64_t kDriveStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

}  // namespace

std::vector<double> ar_denominator(const ArSpec& spec) {
  std::vector<double> den{1.0};
  for (const PolePair& pole : spec.poles) {
    if (!(pole.radius >= 0.0 && pole.radius < 1.0)) {
      throw std::invalid_argument("AR pole radius " + std::to_string(pole.radius) +
                                  " outside the stable range [0, 1)");
    }
    // (1 - r e^{j t} q)(1 - r e^{-j t} q) = 1 - 2 r cos(t) q + r^2 q^2
    const std::vector<double> factor{1.0, -2.0 * pole.radius * std::cos(pole.angle),
                                     pole.radius * pole.radius};
    den = convolve(den, factor);
  }
  return den;
}

MultichannelSignal ar_generate(const ArSpec& spec, std::size_t length) {
  const std::vector<double> den = ar_denominator(spec);
  if (!(spec.drive_variance >= 0.0)) {
    throw std::invalid_argument("AR drive variance must be >= 0, got " +
                                std::to_string(spec.drive_variance));
  }
  const double drive_sd = std::sqrt(spec.drive_variance);
  const std::size_t order = den.size() - 1;
  const std::size_t total = spec.burn_in + length;

  GaussianRng rng(spec.seed, kDriveStream);
  std::vector<double> buf(total, 0.0);
  for (std::size_t n = 0; n < total; ++n) {
    double acc = drive_sd * rng();
    for (std::size_t k = 1; k <= order && k <= n; ++k) {
      acc -= den[k] * buf[n - k];
    }
    buf[n] = acc;
  }
  buf.erase(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(spec.burn_in));
  return MultichannelSignal::from_channel(std::move(buf));
}

MultichannelSignal add_noise(const MultichannelSignal& signal, const NoiseSpec& spec) {
  if (!(spec.snr > 0.0)) {
    throw std::invalid_argument("snr must be > 0 (linear power ratio), got " +
                                std::to_string(spec.snr));
  }
  MultichannelSignal out = signal;
  const std::size_t length = signal.length();
  if (length == 0) {
    return out;  // nothing to perturb
  }
  GaussianRng rng(spec.seed, kNoiseStream);
  for (std::size_t c = 0; c < signal.channels(); ++c) {
    double power = 0.0;
    for (double v : signal.channel(c)) {
      power += v * v;
    }
    power /= static_cast<double>(length);
    if (power == 0.0) {
      throw std::invalid_argument("channel " + std::to_string(c) +
                                  " is all-zero; its noise variance at a finite snr is undefined");
    }
    const double noise_sd = std::sqrt(power / spec.snr);
    for (std::size_t n = 0; n < length; ++n) {
      out(c, n) += noise_sd * rng();
    }
  }
  return out;
}

}  // namespace fbident
