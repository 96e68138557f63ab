#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fbident/mimo.hpp"
#include "fbident/multirate.hpp"

namespace fbident {

/// Single-channel linear periodically time-varying system of period M: sample
/// n is produced by the kernel of phase n mod M,
///   y(n) = sum_k g_{n mod M}(k) x(n - k),
/// with zero history before time 0.
class LptvSystem {
 public:
  /// period = kernels.size(); all kernels must be nonempty and equally long.
  explicit LptvSystem(std::vector<FirFilter> kernels);

  std::size_t period() const noexcept { return kernels_.size(); }
  std::size_t kernel_length() const noexcept { return kernels_.front().taps.size(); }

  const FirFilter& kernel(std::size_t phase) const { return kernels_.at(phase); }

 private:
  std::vector<FirFilter> kernels_;
};

/// Direct time-domain simulation of the LPTV system; output length matches x.
std::vector<double> lptv_apply(const LptvSystem& sys, std::span<const double> x);

/// Synthesis bank as a square M x M block model: h(i, j, k) = f_j(M*k + M-1-i),
/// the assignment under which mimo_apply reproduces the bank's low-rate branch
/// outputs exactly.
MimoFirModel bank_to_mimo(const SynthesisFilterBank& bank);

/// Inverse of bank_to_mimo; requires a square model. Non-square models must
/// first be embedded with pad_to_square.
SynthesisFilterBank mimo_to_bank(const MimoFirModel& model);

/// Embeds an M x P model into a Q x Q model with Q = lcm(M, P), zero-filling
/// the added rows and columns. Outputs 0..M-1 of the padded model match the
/// original when the extra input channels are fed zeros.
MimoFirModel pad_to_square(const MimoFirModel& model);

/// Blocks a period-M LPTV system into an M x M LTI model under the
/// serialize/deserialize commutator convention (channel M-1 leads each
/// block): serializing mimo_apply(lptv_to_mimo(sys), deserialize(x, M))
/// reproduces lptv_apply(sys, x).
MimoFirModel lptv_to_mimo(const LptvSystem& sys);

}  // namespace fbident
