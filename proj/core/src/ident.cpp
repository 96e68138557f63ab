#include "fbident/ident.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>

#include "fbident/cholesky.hpp"
#include "fbident/errors.hpp"
#include "text_util.hpp"

namespace fbident {
namespace {

// Regressor r = l*P + p pairs input channel p with lag l. Ordering by lag
// makes every shorter order a leading subproblem of the full one, which the
// order-recursive engine exploits.
struct Regression {
  std::size_t inputs = 0;   // P
  std::size_t outputs = 0;  // M
  std::size_t taps = 0;     // L
  std::size_t dim = 0;      // P*L
  std::size_t window = 0;   // rows entering the cost: T - L + 1
  std::vector<double> gram;                // packed lower triangle, ridge not included
  std::vector<std::vector<double>> cross;  // [m][dim]
  std::vector<double> sum_dd;              // [m]
};

void check_problem(const MultichannelSignal& x, const MultichannelSignal& d,
                   const IdentConfig& cfg) {
  if (cfg.taps == 0) {
    throw std::invalid_argument("taps must be >= 1");
  }
  if (!(cfg.ridge >= 0.0)) {
    throw std::invalid_argument("ridge must be >= 0, got " + std::to_string(cfg.ridge));
  }
  if (x.length() != d.length()) {
    throw std::invalid_argument("input record has " + std::to_string(x.length()) +
                                " samples but output record has " + std::to_string(d.length()));
  }
  const std::size_t need = cfg.taps + x.channels() * cfg.taps;
  if (x.length() < need) {
    throw std::invalid_argument("identification with taps=" + std::to_string(cfg.taps) + " and " +
                                std::to_string(x.channels()) + " inputs needs at least " +
                                std::to_string(need) + " samples, got " +
                                std::to_string(x.length()));
  }
}

Regression assemble(const MultichannelSignal& x, const MultichannelSignal& d, std::size_t taps) {
  Regression reg;
  reg.inputs = x.channels();
  reg.outputs = d.channels();
  reg.taps = taps;
  reg.dim = reg.inputs * taps;
  reg.window = x.length() - taps + 1;
  reg.gram.assign(reg.dim * (reg.dim + 1) / 2, 0.0);
  reg.cross.assign(reg.outputs, std::vector<double>(reg.dim, 0.0));
  reg.sum_dd.assign(reg.outputs, 0.0);

  std::vector<double> phi(reg.dim);
  for (std::size_t n = taps - 1; n < x.length(); ++n) {
    for (std::size_t l = 0; l < taps; ++l) {
      for (std::size_t p = 0; p < reg.inputs; ++p) {
        phi[l * reg.inputs + p] = x(p, n - l);
      }
    }
    std::size_t idx = 0;
    for (std::size_t r = 0; r < reg.dim; ++r) {
      for (std::size_t c = 0; c <= r; ++c, ++idx) {
        reg.gram[idx] += phi[r] * phi[c];
      }
    }
    for (std::size_t m = 0; m < reg.outputs; ++m) {
      const double dm = d(m, n);
      for (std::size_t r = 0; r < reg.dim; ++r) {
        reg.cross[m][r] += dm * phi[r];
      }
      reg.sum_dd[m] += dm * dm;
    }
  }
  return reg;
}

std::string regressor_name(std::size_t column, std::size_t inputs) {
  return "input channel " + std::to_string(column % inputs) + ", lag " +
         std::to_string(column / inputs);
}

// Factors gram + ridge*I up to `dim`, translating a dead pivot into an error
// that names the offending regressor.
CholeskyFactor factor_gram(const std::vector<double>& gram, double ridge, std::size_t dim,
                           std::size_t inputs, const std::string& what) {
  CholeskyFactor factor;
  std::vector<double> row;
  for (std::size_t r = 0; r < dim; ++r) {
    row.assign(gram.begin() + static_cast<std::ptrdiff_t>(r * (r + 1) / 2),
               gram.begin() + static_cast<std::ptrdiff_t>(r * (r + 1) / 2 + r + 1));
    row[r] += ridge;
    try {
      factor.append_row(row);
    } catch (const RankDeficiencyError& e) {
      throw RankDeficiencyError(what + " is rank deficient at " + regressor_name(e.column(), inputs) +
                                    " (column " + std::to_string(e.column()) +
                                    "); add ridge or remove dependent inputs",
                                e.column());
    }
  }
  return factor;
}

double quadratic_form(const std::vector<double>& packed, std::span<const double> h,
                      std::size_t dim) {
  double qf = 0.0;
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t base = r * (r + 1) / 2;
    for (std::size_t c = 0; c < r; ++c) {
      qf += 2.0 * packed[base + c] * h[r] * h[c];
    }
    qf += packed[base + r] * h[r] * h[r];
  }
  return qf;
}

// Residual sum of squares of the exact solution, ridge penalty excluded.
double solution_rss(double sum_dd, std::span<const double> cross, std::span<const double> h,
                    const std::vector<double>& gram, std::size_t dim) {
  double dot = 0.0;
  for (std::size_t r = 0; r < dim; ++r) {
    dot += cross[r] * h[r];
  }
  const double rss = sum_dd - 2.0 * dot + quadratic_form(gram, h, dim);
  return std::max(rss, 0.0);
}

MimoFirModel model_from_solutions(const std::vector<std::vector<double>>& sol, std::size_t outputs,
                                  std::size_t inputs, std::size_t taps) {
  MimoFirModel model(outputs, inputs, taps);
  for (std::size_t m = 0; m < outputs; ++m) {
    for (std::size_t l = 0; l < taps; ++l) {
      for (std::size_t p = 0; p < inputs; ++p) {
        model(m, p, l) = sol[m][l * inputs + p];
      }
    }
  }
  return model;
}

void attach_reference(IdentReport& report, const MimoFirModel* reference) {
  if (reference == nullptr) {
    return;
  }
  report.reference = *reference;
  report.errors = report_errors(report.estimated, *reference);
}

}  // namespace

IdentReport block_ls_identify(const MultichannelSignal& x, const MultichannelSignal& d,
                              const IdentConfig& cfg, const MimoFirModel* reference) {
  check_problem(x, d, cfg);
  const Regression reg = assemble(x, d, cfg.taps);
  const CholeskyFactor factor = factor_gram(reg.gram, cfg.ridge, reg.dim, reg.inputs,
                                            "normal matrix");
  std::vector<std::vector<double>> sol(reg.outputs);
  IdentReport report;
  report.rss.resize(reg.outputs);
  for (std::size_t m = 0; m < reg.outputs; ++m) {
    sol[m] = factor.solve(reg.cross[m], reg.dim);
    report.rss[m] = solution_rss(reg.sum_dd[m], reg.cross[m], sol[m], reg.gram, reg.dim);
  }
  report.estimated = model_from_solutions(sol, reg.outputs, reg.inputs, cfg.taps);
  report.samples_used = reg.window;
  attach_reference(report, reference);
  return report;
}

IdentReport rls_identify(const MultichannelSignal& x, const MultichannelSignal& d,
                         const IdentConfig& cfg, const MimoFirModel* reference,
                         std::vector<MimoFirModel>* trajectory) {
  if (!(cfg.lambda > 0.0 && cfg.lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in (0, 1], got " + std::to_string(cfg.lambda));
  }
  if (!(cfg.ridge > 0.0)) {
    throw std::invalid_argument("recursive least squares needs ridge > 0 to initialize the "
                                "inverse normal matrix");
  }
  check_problem(x, d, cfg);

  const std::size_t inputs = x.channels();
  const std::size_t outputs = d.channels();
  const std::size_t taps = cfg.taps;
  const std::size_t dim = inputs * taps;
  const std::size_t frames = x.length();

  // pmat tracks the inverse of the exponentially weighted normal matrix,
  // started at I/ridge; all updates below are rank one.
  std::vector<double> pmat(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    pmat[i * dim + i] = 1.0 / cfg.ridge;
  }
  std::vector<std::vector<double>> h(outputs, std::vector<double>(dim, 0.0));
  std::vector<double> phi(dim), pf(dim), gain(dim);

  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t l = 0; l < taps; ++l) {
      for (std::size_t p = 0; p < inputs; ++p) {
        phi[l * inputs + p] = (n >= l) ? x(p, n - l) : 0.0;
      }
    }
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        acc += pmat[i * dim + j] * phi[j];
      }
      pf[i] = acc;
    }
    double denom = cfg.lambda;
    for (std::size_t i = 0; i < dim; ++i) {
      denom += phi[i] * pf[i];
    }
    for (std::size_t i = 0; i < dim; ++i) {
      gain[i] = pf[i] / denom;
    }
    for (std::size_t m = 0; m < outputs; ++m) {
      double err = d(m, n);
      for (std::size_t i = 0; i < dim; ++i) {
        err -= phi[i] * h[m][i];
      }
      for (std::size_t i = 0; i < dim; ++i) {
        h[m][i] += gain[i] * err;
      }
    }
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        pmat[i * dim + j] = (pmat[i * dim + j] - gain[i] * pf[j]) / cfg.lambda;
      }
    }
    if (trajectory != nullptr) {
      trajectory->push_back(model_from_solutions(h, outputs, inputs, taps));
    }
  }

  IdentReport report;
  report.estimated = model_from_solutions(h, outputs, inputs, taps);
  report.samples_used = frames;

  // Residuals of the final model over the covariance window, comparable to
  // the batch reports.
  report.rss.assign(outputs, 0.0);
  for (std::size_t m = 0; m < outputs; ++m) {
    for (std::size_t n = taps - 1; n < frames; ++n) {
      double err = d(m, n);
      for (std::size_t l = 0; l < taps; ++l) {
        for (std::size_t p = 0; p < inputs; ++p) {
          err -= report.estimated(m, p, l) * x(p, n - l);
        }
      }
      report.rss[m] += err * err;
    }
  }
  attach_reference(report, reference);
  return report;
}

std::vector<IdentReport> order_recursive_identify(const MultichannelSignal& x,
                                                  const MultichannelSignal& d,
                                                  const IdentConfig& cfg,
                                                  const MimoFirModel* reference) {
  check_problem(x, d, cfg);
  const std::size_t full = cfg.taps;
  const Regression reg = assemble(x, d, full);
  CholeskyFactor factor = factor_gram(reg.gram, cfg.ridge, reg.dim, reg.inputs, "normal matrix");

  // Mutable copies evolve as the recursion walks down the orders: each
  // shorter order keeps the leading block and re-admits the one sample its
  // longer sibling had to exclude from the covariance window.
  std::vector<double> gram = reg.gram;
  std::vector<std::vector<double>> cross = reg.cross;
  std::vector<double> sum_dd = reg.sum_dd;

  std::vector<IdentReport> reports;
  reports.reserve(full);
  std::vector<double> phi;
  for (std::size_t order = full;; --order) {
    const std::size_t dim = reg.inputs * order;
    std::vector<std::vector<double>> sol(reg.outputs);
    IdentReport report;
    report.rss.resize(reg.outputs);
    for (std::size_t m = 0; m < reg.outputs; ++m) {
      sol[m] = factor.solve(std::span(cross[m]).first(dim), dim);
      report.rss[m] = solution_rss(sum_dd[m], std::span(cross[m]).first(dim), sol[m], gram, dim);
    }
    report.estimated = model_from_solutions(sol, reg.outputs, reg.inputs, order);
    report.samples_used = x.length() - order + 1;
    if (reference != nullptr && reference->taps() == order &&
        reference->outputs() == reg.outputs && reference->inputs() == reg.inputs) {
      attach_reference(report, reference);
    }
    reports.push_back(std::move(report));

    if (order == 1) {
      break;
    }

    // Order order-1 sees one earlier sample: n = order-2. Fold it in as a
    // rank-one update of the leading block.
    const std::size_t next_dim = reg.inputs * (order - 1);
    const std::size_t n = order - 2;
    phi.assign(next_dim, 0.0);
    for (std::size_t l = 0; l < order - 1; ++l) {
      for (std::size_t p = 0; p < reg.inputs; ++p) {
        phi[l * reg.inputs + p] = (n >= l) ? x(p, n - l) : 0.0;
      }
    }
    factor.rank_one_update(phi, next_dim);
    std::size_t idx = 0;
    for (std::size_t r = 0; r < next_dim; ++r) {
      for (std::size_t c = 0; c <= r; ++c, ++idx) {
        gram[idx] += phi[r] * phi[c];
      }
    }
    for (std::size_t m = 0; m < reg.outputs; ++m) {
      const double dm = d(m, n);
      for (std::size_t r = 0; r < next_dim; ++r) {
        cross[m][r] += dm * phi[r];
      }
      sum_dd[m] += dm * dm;
    }
  }
  std::reverse(reports.begin(), reports.end());
  return reports;
}

CorrelationData::CorrelationData(std::size_t outputs, std::size_t inputs, std::size_t taps)
    : outputs_(outputs), inputs_(inputs), taps_(taps) {
  if (outputs_ == 0 || inputs_ == 0 || taps_ == 0) {
    throw std::invalid_argument("correlation dimensions must all be >= 1");
  }
  input_.assign(inputs_ * inputs_ * taps_, 0.0);
  cross_.assign(outputs_ * inputs_ * taps_, 0.0);
}

double CorrelationData::input_corr(std::size_t p, std::size_t q, std::ptrdiff_t tau) const {
  if (p >= inputs_ || q >= inputs_ ||
      static_cast<std::size_t>(tau < 0 ? -tau : tau) >= taps_) {
    throw std::invalid_argument("input correlation index out of range");
  }
  if (tau < 0) {
    return input_[(q * inputs_ + p) * taps_ + static_cast<std::size_t>(-tau)];
  }
  return input_[(p * inputs_ + q) * taps_ + static_cast<std::size_t>(tau)];
}

void CorrelationData::set_input_corr(std::size_t p, std::size_t q, std::ptrdiff_t tau,
                                     double value) {
  if (p >= inputs_ || q >= inputs_ ||
      static_cast<std::size_t>(tau < 0 ? -tau : tau) >= taps_) {
    throw std::invalid_argument("input correlation index out of range");
  }
  if (tau < 0) {
    input_[(q * inputs_ + p) * taps_ + static_cast<std::size_t>(-tau)] = value;
  } else {
    input_[(p * inputs_ + q) * taps_ + static_cast<std::size_t>(tau)] = value;
  }
}

double CorrelationData::cross_corr(std::size_t m, std::size_t p, std::size_t tau) const {
  if (m >= outputs_ || p >= inputs_ || tau >= taps_) {
    throw std::invalid_argument("cross correlation index out of range");
  }
  return cross_[(m * inputs_ + p) * taps_ + tau];
}

void CorrelationData::set_cross_corr(std::size_t m, std::size_t p, std::size_t tau, double value) {
  if (m >= outputs_ || p >= inputs_ || tau >= taps_) {
    throw std::invalid_argument("cross correlation index out of range");
  }
  cross_[(m * inputs_ + p) * taps_ + tau] = value;
}

CorrelationData sample_correlations(const MultichannelSignal& x, const MultichannelSignal& d,
                                    std::size_t taps) {
  if (taps == 0) {
    throw std::invalid_argument("taps must be >= 1");
  }
  if (x.length() != d.length()) {
    throw std::invalid_argument("input record has " + std::to_string(x.length()) +
                                " samples but output record has " + std::to_string(d.length()));
  }
  const std::size_t frames = x.length();
  if (frames == 0) {
    throw std::invalid_argument("cannot estimate correlations from an empty record");
  }
  CorrelationData corr(d.channels(), x.channels(), taps);
  const double scale = 1.0 / static_cast<double>(frames);
  for (std::size_t p = 0; p < x.channels(); ++p) {
    for (std::size_t q = 0; q < x.channels(); ++q) {
      for (std::size_t tau = 0; tau < taps; ++tau) {
        double acc = 0.0;
        for (std::size_t n = tau; n < frames; ++n) {
          acc += x(p, n) * x(q, n - tau);
        }
        corr.set_input_corr(p, q, static_cast<std::ptrdiff_t>(tau), acc * scale);
      }
    }
  }
  for (std::size_t m = 0; m < d.channels(); ++m) {
    for (std::size_t p = 0; p < x.channels(); ++p) {
      for (std::size_t tau = 0; tau < taps; ++tau) {
        double acc = 0.0;
        for (std::size_t n = tau; n < frames; ++n) {
          acc += d(m, n) * x(p, n - tau);
        }
        corr.set_cross_corr(m, p, tau, acc * scale);
      }
    }
  }
  return corr;
}

MimoFirModel wiener_identify(const CorrelationData& corr, double ridge) {
  if (!(ridge >= 0.0)) {
    throw std::invalid_argument("ridge must be >= 0, got " + std::to_string(ridge));
  }
  const std::size_t inputs = corr.inputs();
  const std::size_t taps = corr.taps();
  const std::size_t dim = inputs * taps;

  std::vector<double> packed(dim * (dim + 1) / 2, 0.0);
  std::size_t idx = 0;
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t l = r / inputs, p = r % inputs;
    for (std::size_t c = 0; c <= r; ++c, ++idx) {
      const std::size_t lp = c / inputs, q = c % inputs;
      packed[idx] = corr.input_corr(p, q, static_cast<std::ptrdiff_t>(lp) -
                                              static_cast<std::ptrdiff_t>(l));
    }
  }
  const CholeskyFactor factor = factor_gram(packed, ridge, dim, inputs, "correlation matrix");

  std::vector<std::vector<double>> sol(corr.outputs());
  std::vector<double> b(dim);
  for (std::size_t m = 0; m < corr.outputs(); ++m) {
    for (std::size_t l = 0; l < taps; ++l) {
      for (std::size_t p = 0; p < inputs; ++p) {
        b[l * inputs + p] = corr.cross_corr(m, p, l);
      }
    }
    sol[m] = factor.solve(b, dim);
  }
  return model_from_solutions(sol, corr.outputs(), inputs, taps);
}

ErrorTable report_errors(const MimoFirModel& estimated, const MimoFirModel& reference) {
  if (estimated.outputs() != reference.outputs() || estimated.inputs() != reference.inputs() ||
      estimated.taps() != reference.taps()) {
    throw std::invalid_argument("estimated and reference model dimensions differ");
  }
  ErrorTable table;
  table.outputs = estimated.outputs();
  table.inputs = estimated.inputs();
  table.taps = estimated.taps();
  table.abs_error.resize(estimated.coefficients().size());
  table.max_abs_error = -1.0;
  for (std::size_t m = 0; m < table.outputs; ++m) {
    for (std::size_t p = 0; p < table.inputs; ++p) {
      for (std::size_t l = 0; l < table.taps; ++l) {
        const double err = std::abs(estimated(m, p, l) - reference(m, p, l));
        table.abs_error[(m * table.inputs + p) * table.taps + l] = err;
        if (err > table.max_abs_error) {
          table.max_abs_error = err;
          table.max_m = m;
          table.max_p = p;
          table.max_l = l;
        }
      }
    }
  }
  return table;
}

ErrorTable report_errors(const MimoFirModel& estimated, const MimoFirModel& reference,
                         const MultichannelSignal& x_holdout,
                         const MultichannelSignal& d_holdout) {
  ErrorTable table = report_errors(estimated, reference);
  if (x_holdout.length() != d_holdout.length() || d_holdout.channels() != estimated.outputs()) {
    throw std::invalid_argument("held-out record does not match the model dimensions");
  }
  if (x_holdout.length() == 0) {
    throw std::invalid_argument("held-out record is empty");
  }
  const MultichannelSignal predicted = mimo_apply(estimated, x_holdout);
  table.holdout_mse.assign(estimated.outputs(), 0.0);
  for (std::size_t m = 0; m < estimated.outputs(); ++m) {
    for (std::size_t n = 0; n < d_holdout.length(); ++n) {
      const double err = d_holdout(m, n) - predicted(m, n);
      table.holdout_mse[m] += err * err;
    }
    table.holdout_mse[m] /= static_cast<double>(d_holdout.length());
  }
  return table;
}

void write_report_csv(const IdentReport& report, const std::filesystem::path& path,
                      std::optional<double> snr) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open file for writing");
  }
  out << "snr,m,p,l,true,estimated,abs_error\n";
  const std::string snr_cell = snr ? detail::format_double(*snr) : std::string();
  const MimoFirModel& est = report.estimated;
  for (std::size_t m = 0; m < est.outputs(); ++m) {
    for (std::size_t p = 0; p < est.inputs(); ++p) {
      for (std::size_t l = 0; l < est.taps(); ++l) {
        out << snr_cell << ',' << m << ',' << p << ',' << l << ',';
        if (report.reference) {
          out << detail::format_double((*report.reference)(m, p, l));
        }
        out << ',' << detail::format_double(est(m, p, l)) << ',';
        if (report.errors) {
          out << detail::format_double(report.errors->error(m, p, l));
        }
        out << '\n';
      }
    }
  }
  if (!out) {
    throw std::runtime_error(path.string() + ": write failed");
  }
}

void write_residuals_csv(const IdentReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open file for writing");
  }
  out << "m,rss,samples\n";
  for (std::size_t m = 0; m < report.rss.size(); ++m) {
    out << m << ',' << detail::format_double(report.rss[m]) << ',' << report.samples_used << '\n';
  }
  if (!out) {
    throw std::runtime_error(path.string() + ": write failed");
  }
}

}  // namespace fbident
