#include "fbident/signal.hpp"

#include <stdexcept>
#include <string>

namespace fbident {

MultichannelSignal::MultichannelSignal(std::vector<std::vector<double>> channels)
    : ch_(std::move(channels)) {
  if (ch_.empty()) {
    throw std::invalid_argument("signal needs at least one channel");
  }
  const std::size_t len = ch_.front().size();
  for (std::size_t c = 1; c < ch_.size(); ++c) {
    if (ch_[c].size() != len) {
      throw std::invalid_argument("channel " + std::to_string(c) + " has " +
                                  std::to_string(ch_[c].size()) + " samples, expected " +
                                  std::to_string(len));
    }
  }
}

MultichannelSignal MultichannelSignal::zeros(std::size_t channels, std::size_t length) {
  if (channels == 0) {
    throw std::invalid_argument("signal needs at least one channel");
  }
  return MultichannelSignal(std::vector<std::vector<double>>(channels, std::vector<double>(length, 0.0)));
}

MultichannelSignal MultichannelSignal::from_channel(std::vector<double> samples) {
  std::vector<std::vector<double>> ch;
  ch.push_back(std::move(samples));
  return MultichannelSignal(std::move(ch));
}

}  // namespace fbident
