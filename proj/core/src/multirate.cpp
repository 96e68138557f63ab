#include "fbident/multirate.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fbident {

SynthesisFilterBank::SynthesisFilterBank(std::vector<FirFilter> bands) : bands_(std::move(bands)) {
  if (bands_.empty()) {
    throw std::invalid_argument("filter bank needs at least one band");
  }
  std::size_t longest = 0;
  for (std::size_t i = 0; i < bands_.size(); ++i) {
    if (bands_[i].taps.empty()) {
      throw std::invalid_argument("band " + std::to_string(i) + " has no taps");
    }
    longest = std::max(longest, bands_[i].taps.size());
  }
  const std::size_t m = bands_.size();
  const std::size_t padded = (longest + m - 1) / m * m;
  for (FirFilter& band : bands_) {
    band.taps.resize(padded, 0.0);
  }
}

PolyphaseMatrix::PolyphaseMatrix(std::size_t bands, std::size_t component_length)
    : bands_(bands),
      component_length_(component_length),
      grid_(bands * bands, std::vector<double>(component_length, 0.0)) {
  if (bands == 0) {
    throw std::invalid_argument("polyphase matrix needs at least one band");
  }
}

const std::vector<double>& PolyphaseMatrix::component(std::size_t i, std::size_t k) const {
  return grid_.at(i * bands_ + k);
}

std::vector<double>& PolyphaseMatrix::component(std::size_t i, std::size_t k) {
  return grid_.at(i * bands_ + k);
}

std::vector<double> upsample(std::span<const double> x, std::size_t factor) {
  if (factor == 0) {
    throw std::invalid_argument("upsampling factor must be >= 1");
  }
  std::vector<double> out(x.size() * factor, 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    out[n * factor] = x[n];
  }
  return out;
}

PolyphaseMatrix type2_polyphase(const SynthesisFilterBank& bank) {
  const std::size_t m = bank.bands();
  const std::size_t plen = bank.filter_length() / m;
  PolyphaseMatrix components(m, plen);
  for (std::size_t i = 0; i < m; ++i) {
    const std::vector<double>& taps = bank.band(i).taps;
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<double>& comp = components.component(i, k);
      for (std::size_t p = 0; p < plen; ++p) {
        comp[p] = taps[p * m + m - 1 - k];
      }
    }
  }
  return components;
}

SynthesisFilterBank polyphase_reassemble(const PolyphaseMatrix& components) {
  const std::size_t m = components.bands();
  const std::size_t plen = components.component_length();
  std::vector<FirFilter> bands(m);
  for (std::size_t i = 0; i < m; ++i) {
    bands[i].taps.assign(std::max<std::size_t>(plen * m, 1), 0.0);
    for (std::size_t p = 0; p < plen; ++p) {
      for (std::size_t r = 0; r < m; ++r) {
        bands[i].taps[p * m + r] = components.component(i, m - 1 - r)[p];
      }
    }
  }
  return SynthesisFilterBank(std::move(bands));
}

std::vector<double> synth_direct(const SynthesisFilterBank& bank,
                                 const MultichannelSignal& inputs) {
  const std::size_t m = bank.bands();
  if (inputs.channels() != m) {
    throw std::invalid_argument("bank has " + std::to_string(m) + " bands but inputs carry " +
                                std::to_string(inputs.channels()) + " channels");
  }
  const std::size_t out_len = inputs.length() * m;
  std::vector<double> out(out_len, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::vector<double> up = upsample(inputs.channel(i), m);
    const std::vector<double>& taps = bank.band(i).taps;
    for (std::size_t t = 0; t < out_len; ++t) {
      double acc = 0.0;
      const std::size_t kmax = std::min(taps.size() - 1, t);
      for (std::size_t k = 0; k <= kmax; ++k) {
        acc += taps[k] * up[t - k];
      }
      out[t] += acc;
    }
  }
  return out;
}

MultichannelSignal polyphase_branch_outputs(const SynthesisFilterBank& bank,
                                            const MultichannelSignal& inputs) {
  const std::size_t m = bank.bands();
  if (inputs.channels() != m) {
    throw std::invalid_argument("bank has " + std::to_string(m) + " bands but inputs carry " +
                                std::to_string(inputs.channels()) + " channels");
  }
  const PolyphaseMatrix components = type2_polyphase(bank);
  const std::size_t plen = components.component_length();
  const std::size_t frames = inputs.length();
  MultichannelSignal out = MultichannelSignal::zeros(m, frames);
  for (std::size_t branch = 0; branch < m; ++branch) {
    for (std::size_t n = 0; n < frames; ++n) {
      double acc = 0.0;
      for (std::size_t lag = 0; lag < plen && lag <= n; ++lag) {
        for (std::size_t j = 0; j < m; ++j) {
          acc += components.component(j, branch)[lag] * inputs(j, n - lag);
        }
      }
      out(branch, n) = acc;
    }
  }
  return out;
}

std::vector<double> synth_polyphase(const SynthesisFilterBank& bank,
                                    const MultichannelSignal& inputs) {
  const std::size_t m = bank.bands();
  const MultichannelSignal branches = polyphase_branch_outputs(bank, inputs);
  std::vector<double> out(inputs.length() * m, 0.0);
  for (std::size_t n = 0; n < inputs.length(); ++n) {
    for (std::size_t j = 0; j < m; ++j) {
      out[n * m + j] = branches(m - 1 - j, n);
    }
  }
  return out;
}

}  // namespace fbident
