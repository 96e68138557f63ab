#include "fbident/mimo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fbident {

MimoFirModel::MimoFirModel(std::size_t outputs, std::size_t inputs, std::size_t taps)
    : MimoFirModel(outputs, inputs, taps, std::vector<double>(outputs * inputs * taps, 0.0)) {}

MimoFirModel::MimoFirModel(std::size_t outputs, std::size_t inputs, std::size_t taps,
                           std::vector<double> coefficients)
    : outputs_(outputs), inputs_(inputs), taps_(taps), h_(std::move(coefficients)) {
  if (outputs_ == 0 || inputs_ == 0 || taps_ == 0) {
    throw std::invalid_argument("model dimensions must all be >= 1");
  }
  if (h_.size() != outputs_ * inputs_ * taps_) {
    throw std::invalid_argument("expected " + std::to_string(outputs_ * inputs_ * taps_) +
                                " coefficients, got " + std::to_string(h_.size()));
  }
  for (double v : h_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("model coefficients must be finite");
    }
  }
}

MimoFirModel MimoFirModel::identity(std::size_t channels) {
  MimoFirModel model(channels, channels, 1);
  for (std::size_t c = 0; c < channels; ++c) {
    model(c, c, 0) = 1.0;
  }
  return model;
}

MultichannelSignal mimo_apply(const MimoFirModel& model, const MultichannelSignal& x) {
  if (x.channels() != model.inputs()) {
    throw std::invalid_argument("model expects " + std::to_string(model.inputs()) +
                                " input channels, got " + std::to_string(x.channels()));
  }
  const std::size_t frames = x.length();
  MultichannelSignal y = MultichannelSignal::zeros(model.outputs(), frames);
  for (std::size_t m = 0; m < model.outputs(); ++m) {
    for (std::size_t n = 0; n < frames; ++n) {
      double acc = 0.0;
      for (std::size_t l = 0; l < model.taps() && l <= n; ++l) {
        for (std::size_t p = 0; p < model.inputs(); ++p) {
          acc += model(m, p, l) * x(p, n - l);
        }
      }
      y(m, n) = acc;
    }
  }
  return y;
}

ScalarStream serialize(const MultichannelSignal& x) {
  const std::size_t c = x.channels();
  ScalarStream s;
  s.block = c;
  s.samples.resize(c * x.length());
  for (std::size_t n = 0; n < x.length(); ++n) {
    for (std::size_t j = 0; j < c; ++j) {
      s.samples[n * c + j] = x(c - 1 - j, n);
    }
  }
  return s;
}

MultichannelSignal deserialize(const ScalarStream& s, std::size_t channels) {
  if (channels == 0) {
    throw std::invalid_argument("deserialize needs at least one channel");
  }
  if (s.samples.size() % channels != 0) {
    throw std::invalid_argument("stream length " + std::to_string(s.samples.size()) +
                                " is not divisible by " + std::to_string(channels) + " channels");
  }
  const std::size_t frames = s.samples.size() / channels;
  MultichannelSignal x = MultichannelSignal::zeros(channels, frames);
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t j = 0; j < channels; ++j) {
      x(channels - 1 - j, n) = s.samples[n * channels + j];
    }
  }
  return x;
}

ScalarStream siso_apply(const MimoFirModel& model, const ScalarStream& z) {
  const std::size_t p_count = model.inputs();
  const std::size_t m_count = model.outputs();
  if (z.block != p_count) {
    throw std::invalid_argument("stream block " + std::to_string(z.block) +
                                " does not match the model's " + std::to_string(p_count) +
                                " inputs");
  }
  if (z.samples.size() % p_count != 0) {
    throw std::invalid_argument("stream length " + std::to_string(z.samples.size()) +
                                " is not divisible by its block " + std::to_string(p_count));
  }
  const std::size_t frames = z.samples.size() / p_count;
  ScalarStream w;
  w.block = m_count;
  w.samples.assign(m_count * frames, 0.0);
  // Same accumulation order as mimo_apply; only the indexing into the flat
  // stream differs, so the two routes agree bit for bit.
  for (std::size_t m = 0; m < m_count; ++m) {
    for (std::size_t n = 0; n < frames; ++n) {
      double acc = 0.0;
      for (std::size_t l = 0; l < model.taps() && l <= n; ++l) {
        for (std::size_t p = 0; p < p_count; ++p) {
          acc += model(m, p, l) * z.samples[(n - l) * p_count + (p_count - 1 - p)];
        }
      }
      w.samples[n * m_count + (m_count - 1 - m)] = acc;
    }
  }
  return w;
}

}  // namespace fbident
