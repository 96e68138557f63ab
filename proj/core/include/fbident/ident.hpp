#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "fbident/mimo.hpp"
#include "fbident/signal.hpp"

namespace fbident {

enum class IdentMethod { kBlockLs, kRls, kOrderRecursive, kWiener };

struct IdentConfig {
  std::size_t taps = 1;                        // model order L (lags per input channel)
  IdentMethod method = IdentMethod::kBlockLs;
  double ridge = 0.0;                          // added to the normal-equation diagonal
  double lambda = 1.0;                         // forgetting factor, recursive method only
};

/// Per-coefficient comparison of an estimate against a reference model.
struct ErrorTable {
  std::size_t outputs = 0;
  std::size_t inputs = 0;
  std::size_t taps = 0;
  std::vector<double> abs_error;  // [m][p][l], same layout as the model
  double max_abs_error = 0.0;
  std::size_t max_m = 0, max_p = 0, max_l = 0;
  std::vector<double> holdout_mse;  // per output; empty unless held-out data was given

  double error(std::size_t m, std::size_t p, std::size_t l) const {
    return abs_error[(m * inputs + p) * taps + l];
  }
};

struct IdentReport {
  MimoFirModel estimated;
  std::optional<MimoFirModel> reference;
  std::optional<ErrorTable> errors;  // present iff a reference was supplied
  std::vector<double> rss;           // residual sum of squares per output channel
  std::size_t samples_used = 0;      // samples that entered the cost
};

/// Batch least squares with covariance windowing: the first taps-1 output
/// samples never enter the cost, so no regressor reaches before time 0.
/// Per output channel m, minimizes
///
///   sum_{n=L-1}^{T-1} (d_m(n) - sum_{p,l} h(m,p,l) x_p(n-l))^2 + ridge * |h_m|^2
///
/// by a symmetric factorization of the normal equations; no matrix is
/// inverted. Requires T >= L + P*L. A singular normal matrix with ridge = 0
/// raises RankDeficiencyError naming the offending regressor. The reported
/// rss excludes the ridge penalty.
IdentReport block_ls_identify(const MultichannelSignal& x, const MultichannelSignal& d,
                              const IdentConfig& cfg,
                              const MimoFirModel* reference = nullptr);

/// Exponentially weighted recursive least squares over the full record
/// (missing history is read as zero). The inverse normal matrix starts at
/// I/ridge, which makes the initialization equivalent to a ridge of
/// cfg.ridge; every step uses scalar and vector recursions only. With
/// lambda = 1 the final model is the exact ridge solution of the prewindowed
/// cost, up to roundoff; on data a model of matching order generates
/// noiselessly (itself zero-prehistory), that solution coincides with
/// block_ls_identify's because both recover the generator, the two windows
/// disagreeing only on samples whose residual is already zero.
/// Requires ridge > 0 and lambda in (0, 1]. When
/// `trajectory` is non-null the model after every sample is appended to it.
/// The reported rss evaluates the final model over the covariance window.
IdentReport rls_identify(const MultichannelSignal& x, const MultichannelSignal& d,
                         const IdentConfig& cfg,
                         const MimoFirModel* reference = nullptr,
                         std::vector<MimoFirModel>* trajectory = nullptr);

/// Least squares solutions for every order 1 .. cfg.taps in one pass,
/// returned in ascending order. The report for order l is exactly the
/// solution block_ls_identify would produce with taps = l: the engine factors
/// the full-order normal equations once and reaches the lower orders through
/// nested leading blocks plus rank-one updates that re-admit the samples each
/// shorter window gains, so all orders together cost only marginally more
/// than the largest alone.
std::vector<IdentReport> order_recursive_identify(const MultichannelSignal& x,
                                                  const MultichannelSignal& d,
                                                  const IdentConfig& cfg,
                                                  const MimoFirModel* reference = nullptr);

/// Second-order statistics sufficient for the given-statistics solution:
/// input correlations r_{x_p x_q}(tau) = E[x_p(n) x_q(n - tau)] for
/// |tau| < taps, and input-output cross-correlations r_{d_m x_p}(tau) for
/// 0 <= tau < taps. Only tau >= 0 is stored; reads with tau < 0 resolve
/// through the identity r_{pq}(tau) = r_{qp}(-tau), so the symmetry holds by
/// construction.
class CorrelationData {
 public:
  CorrelationData(std::size_t outputs, std::size_t inputs, std::size_t taps);

  std::size_t outputs() const noexcept { return outputs_; }
  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t taps() const noexcept { return taps_; }

  double input_corr(std::size_t p, std::size_t q, std::ptrdiff_t tau) const;
  void set_input_corr(std::size_t p, std::size_t q, std::ptrdiff_t tau, double value);

  double cross_corr(std::size_t m, std::size_t p, std::size_t tau) const;
  void set_cross_corr(std::size_t m, std::size_t p, std::size_t tau, double value);

 private:
  std::size_t outputs_, inputs_, taps_;
  std::vector<double> input_;  // [p][q][tau], tau >= 0 only
  std::vector<double> cross_;  // [m][p][tau]
};

/// Biased sample estimates over the full zero-padded overlap, normalized by
/// the record length T:
///   r_{x_p x_q}(tau) = (1/T) sum_{n=tau}^{T-1} x_p(n) x_q(n - tau).
/// Assembling normal equations from these estimates reproduces, up to the 1/T
/// scale, the batch least squares problem on the record extended with taps-1
/// zeros at both ends.
CorrelationData sample_correlations(const MultichannelSignal& x, const MultichannelSignal& d,
                                    std::size_t taps);

/// Given-statistics (Wiener) solution: per output channel m solves
/// (R + ridge*I) h_m = r_m, where R is the taps*P x taps*P matrix assembled
/// from the input correlations and r_m from the cross-correlations. A
/// correlation matrix that is not positive definite with ridge = 0 raises
/// RankDeficiencyError.
MimoFirModel wiener_identify(const CorrelationData& corr, double ridge = 0.0);

/// Per-coefficient absolute errors of `estimated` against `reference`; both
/// models must share dimensions.
ErrorTable report_errors(const MimoFirModel& estimated, const MimoFirModel& reference);

/// As above, plus the per-output mean squared error of the estimate on
/// held-out data.
ErrorTable report_errors(const MimoFirModel& estimated, const MimoFirModel& reference,
                         const MultichannelSignal& x_holdout,
                         const MultichannelSignal& d_holdout);

/// Writes the coefficient table "snr,m,p,l,true,estimated,abs_error". The snr
/// cell carries `snr` when given and stays blank otherwise (noiseless data);
/// true/abs_error stay blank when the report has no reference.
void write_report_csv(const IdentReport& report, const std::filesystem::path& path,
                      std::optional<double> snr = std::nullopt);

/// Writes the per-output residual table "m,rss,samples".
void write_residuals_csv(const IdentReport& report, const std::filesystem::path& path);

}  // namespace fbident
