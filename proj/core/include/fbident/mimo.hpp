#pragma once

#include <cstddef>
#include <vector>

#include "fbident/signal.hpp"

namespace fbident {

/// Dense FIR map from P input channels to M output channels:
///
///   y_m(n) = sum_{l=0}^{L-1} sum_{p=0}^{P-1} h(m, p, l) x_p(n - l)
///
/// with zero history before time 0. Coefficients are stored [m][p][l] and
/// must all be finite.
class MimoFirModel {
 public:
  MimoFirModel() : MimoFirModel(1, 1, 1) {}
  MimoFirModel(std::size_t outputs, std::size_t inputs, std::size_t taps);
  MimoFirModel(std::size_t outputs, std::size_t inputs, std::size_t taps,
               std::vector<double> coefficients);

  static MimoFirModel identity(std::size_t channels);

  std::size_t outputs() const noexcept { return outputs_; }
  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t taps() const noexcept { return taps_; }

  double operator()(std::size_t m, std::size_t p, std::size_t l) const {
    return h_[(m * inputs_ + p) * taps_ + l];
  }
  double& operator()(std::size_t m, std::size_t p, std::size_t l) {
    return h_[(m * inputs_ + p) * taps_ + l];
  }

  const std::vector<double>& coefficients() const noexcept { return h_; }

  bool operator==(const MimoFirModel& other) const = default;

 private:
  std::size_t outputs_;
  std::size_t inputs_;
  std::size_t taps_;
  std::vector<double> h_;
};

/// A commutator-serialized sample stream. `block` records the interleave
/// factor the stream was produced with; the sample count is a multiple of it.
struct ScalarStream {
  std::vector<double> samples;
  std::size_t block = 1;
};

/// Runs the model over the input block by block. inputs must have exactly
/// model.inputs() channels; the output has model.outputs() channels of the
/// same length.
MultichannelSignal mimo_apply(const MimoFirModel& model, const MultichannelSignal& x);

/// Commutator serialization: s[C*n + j] = x_{C-1-j}(n), i.e. channel C-1
/// leads each block. Lossless; the stream has C*T samples and block = C.
ScalarStream serialize(const MultichannelSignal& x);

/// Exact inverse of serialize for the given channel count. Throws
/// std::invalid_argument when the stream length is not divisible by it.
MultichannelSignal deserialize(const ScalarStream& s, std::size_t channels);

/// Runs the model directly on a block-P stream, producing a block-M stream.
/// The commutator indexing is resolved on the fly and the per-sample
/// arithmetic is ordered exactly as in mimo_apply, so
///
///   siso_apply(H, serialize(x)).samples == serialize(mimo_apply(H, x)).samples
///
/// holds bit for bit. Throws std::invalid_argument when z.block differs from
/// model.inputs().
ScalarStream siso_apply(const MimoFirModel& model, const ScalarStream& z);

}  // namespace fbident
