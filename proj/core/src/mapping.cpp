#include "fbident/mapping.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace fbident {

LptvSystem::LptvSystem(std::vector<FirFilter> kernels) : kernels_(std::move(kernels)) {
  if (kernels_.empty()) {
    throw std::invalid_argument("periodic system needs at least one phase kernel");
  }
  const std::size_t len = kernels_.front().taps.size();
  if (len == 0) {
    throw std::invalid_argument("phase kernels need at least one tap");
  }
  for (std::size_t i = 1; i < kernels_.size(); ++i) {
    if (kernels_[i].taps.size() != len) {
      throw std::invalid_argument("phase kernel " + std::to_string(i) + " has " +
                                  std::to_string(kernels_[i].taps.size()) +
                                  " taps, expected " + std::to_string(len));
    }
  }
}

std::vector<double> lptv_apply(const LptvSystem& sys, std::span<const double> x) {
  const std::size_t period = sys.period();
  const std::size_t klen = sys.kernel_length();
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    const std::vector<double>& g = sys.kernel(n % period).taps;
    double acc = 0.0;
    for (std::size_t k = 0; k < klen && k <= n; ++k) {
      acc += g[k] * x[n - k];
    }
    y[n] = acc;
  }
  return y;
}

MimoFirModel bank_to_mimo(const SynthesisFilterBank& bank) {
  const std::size_t m = bank.bands();
  const std::size_t taps = bank.filter_length() / m;
  MimoFirModel model(m, m, taps);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < taps; ++k) {
        model(i, j, k) = bank.band(j).taps[k * m + m - 1 - i];
      }
    }
  }
  return model;
}

SynthesisFilterBank mimo_to_bank(const MimoFirModel& model) {
  if (model.outputs() != model.inputs()) {
    throw std::invalid_argument(
        "model is " + std::to_string(model.outputs()) + "x" + std::to_string(model.inputs()) +
        ", but only square models map to a bank; embed it with pad_to_square first");
  }
  const std::size_t m = model.outputs();
  std::vector<FirFilter> bands(m);
  for (std::size_t j = 0; j < m; ++j) {
    bands[j].taps.assign(model.taps() * m, 0.0);
    for (std::size_t k = 0; k < model.taps(); ++k) {
      for (std::size_t r = 0; r < m; ++r) {
        bands[j].taps[k * m + r] = model(m - 1 - r, j, k);
      }
    }
  }
  return SynthesisFilterBank(std::move(bands));
}

MimoFirModel pad_to_square(const MimoFirModel& model) {
  const std::size_t q = std::lcm(model.outputs(), model.inputs());
  MimoFirModel padded(q, q, model.taps());
  for (std::size_t m = 0; m < model.outputs(); ++m) {
    for (std::size_t p = 0; p < model.inputs(); ++p) {
      for (std::size_t l = 0; l < model.taps(); ++l) {
        padded(m, p, l) = model(m, p, l);
      }
    }
  }
  return padded;
}

MimoFirModel lptv_to_mimo(const LptvSystem& sys) {
  const std::size_t m_count = sys.period();
  const std::size_t klen = sys.kernel_length();
  // Largest block lag needed: kernel index k = M*l + p - m stays below klen.
  const std::size_t taps = (klen - 1 + m_count - 1) / m_count + 1;
  MimoFirModel model(m_count, m_count, taps);
  for (std::size_t m = 0; m < m_count; ++m) {
    const std::vector<double>& g = sys.kernel(m_count - 1 - m).taps;
    for (std::size_t p = 0; p < m_count; ++p) {
      for (std::size_t l = 0; l < taps; ++l) {
        const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(m_count * l + p) -
                                 static_cast<std::ptrdiff_t>(m);
        if (k >= 0 && k < static_cast<std::ptrdiff_t>(klen)) {
          model(m, p, l) = g[static_cast<std::size_t>(k)];
        }
      }
    }
  }
  return model;
}

}  // namespace fbident
