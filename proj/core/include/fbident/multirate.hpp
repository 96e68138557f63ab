#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fbident/signal.hpp"

namespace fbident {

/// FIR filter; taps[k] weights the input delayed by k samples. Every filter
/// used by this library carries at least one tap.
struct FirFilter {
  std::vector<double> taps;
};

/// M equal-length synthesis filters driven by M low-rate inputs. The common
/// filter length N is kept a multiple of M; bands shorter than the longest
/// are zero-padded on construction, as is the common length itself when it is
/// not divisible by M.
class SynthesisFilterBank {
 public:
  explicit SynthesisFilterBank(std::vector<FirFilter> bands);

  std::size_t bands() const noexcept { return bands_.size(); }          // M
  std::size_t filter_length() const noexcept { return bands_.front().taps.size(); }  // N

  const FirFilter& band(std::size_t i) const { return bands_.at(i); }

 private:
  std::vector<FirFilter> bands_;
};

/// M x M grid of length-N/M component filters. Entry (i, k) holds the
/// type-II polyphase component of band i with component index k, whose taps
/// are f_i(p*M + M-1-k) for p = 0 .. N/M-1.
class PolyphaseMatrix {
 public:
  PolyphaseMatrix(std::size_t bands, std::size_t component_length);

  std::size_t bands() const noexcept { return bands_; }
  std::size_t component_length() const noexcept { return component_length_; }

  const std::vector<double>& component(std::size_t i, std::size_t k) const;
  std::vector<double>& component(std::size_t i, std::size_t k);

 private:
  std::size_t bands_;
  std::size_t component_length_;
  std::vector<std::vector<double>> grid_;  // index i * bands_ + k
};

/// Inserts factor-1 zeros after every sample: output[n*factor] = x[n], all
/// other outputs zero, output length x.size()*factor. factor must be >= 1.
std::vector<double> upsample(std::span<const double> x, std::size_t factor);

/// Splits every band of the bank into its M type-II polyphase components.
PolyphaseMatrix type2_polyphase(const SynthesisFilterBank& bank);

/// Exact inverse of type2_polyphase: f_i(p*M + r) = component(i, M-1-r)[p].
SynthesisFilterBank polyphase_reassemble(const PolyphaseMatrix& components);

/// Reference synthesis path: per band, upsample the input by M, filter, and
/// sum across bands. Zero initial conditions; the convolution tail beyond
/// T*M output samples is truncated. inputs must have exactly M channels.
std::vector<double> synth_direct(const SynthesisFilterBank& bank,
                                 const MultichannelSignal& inputs);

/// Low-rate branch outputs before interleaving:
///   y_i(n) = sum_l sum_j component(j, i)[l] * x_j(n - l).
/// The (lag outer, channel inner) accumulation order matches mimo_apply, so a
/// converted model reproduces these samples bit for bit.
MultichannelSignal polyphase_branch_outputs(const SynthesisFilterBank& bank,
                                            const MultichannelSignal& inputs);

/// Polyphase synthesis path: branch outputs computed at the low rate, then
/// interleaved as output[n*M + j] = y_{M-1-j}(n). Block n of the output holds
/// the branch samples for low-rate instant n with branch M-1 first. Agrees
/// with synth_direct sample for sample up to roundoff.
std::vector<double> synth_polyphase(const SynthesisFilterBank& bank,
                                    const MultichannelSignal& inputs);

}  // namespace fbident
