#pragma once

#include <cstddef>
#include <vector>

namespace fbident {

/// A block of C >= 1 equal-length channels of real samples, indexed as
/// (channel, time). Time index 0 is the first recorded sample; operations
/// that need earlier history treat it as zero.
class MultichannelSignal {
 public:
  /// Wraps existing channel data. Throws std::invalid_argument when no
  /// channel is given or the channels differ in length.
  explicit MultichannelSignal(std::vector<std::vector<double>> channels);

  static MultichannelSignal zeros(std::size_t channels, std::size_t length);
  static MultichannelSignal from_channel(std::vector<double> samples);

  std::size_t channels() const noexcept { return ch_.size(); }
  std::size_t length() const noexcept { return ch_.front().size(); }

  const std::vector<double>& channel(std::size_t c) const { return ch_.at(c); }
  std::vector<double>& channel(std::size_t c) { return ch_.at(c); }

  double operator()(std::size_t c, std::size_t n) const { return ch_[c][n]; }
  double& operator()(std::size_t c, std::size_t n) { return ch_[c][n]; }

  bool operator==(const MultichannelSignal& other) const { return ch_ == other.ch_; }

 private:
  std::vector<std::vector<double>> ch_;
};

}  // namespace fbident
