#include "fbident/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>

#include "fbident/csv.hpp"
#include "fbident/errors.hpp"
#include "text_util.hpp"

namespace fbident {
namespace {

std::size_t worker_count(std::size_t jobs) {
  std::size_t cap = std::thread::hardware_concurrency();
  if (cap == 0) {
    cap = 1;
  }
  if (const char* env = std::getenv("FBIDENT_THREADS")) {
    std::size_t requested = 0;
    const char* end = env + std::string_view(env).size();
    auto [ptr, ec] = std::from_chars(env, end, requested);
    if (ec != std::errc() || ptr != end || requested == 0) {
      throw ConfigError("FBIDENT_THREADS must be a positive integer, got \"" + std::string(env) +
                        "\"");
    }
    cap = std::min(cap, requested);
  }
  return std::max<std::size_t>(1, std::min(cap, jobs));
}

MimoFirModel estimate_once(const ExperimentConfig& config, const MultichannelSignal& inputs,
                           const MultichannelSignal& outputs) {
  switch (config.ident.method) {
    case IdentMethod::kBlockLs:
      return block_ls_identify(inputs, outputs, config.ident).estimated;
    case IdentMethod::kRls:
      return rls_identify(inputs, outputs, config.ident).estimated;
    case IdentMethod::kOrderRecursive:
      return order_recursive_identify(inputs, outputs, config.ident).back().estimated;
    case IdentMethod::kWiener:
      return wiener_identify(sample_correlations(inputs, outputs, config.ident.taps),
                             config.ident.ridge);
  }
  throw std::logic_error("unreachable identification method");
}

}  // namespace

void validate(const ExperimentConfig& config) {
  const bool has_ar = !config.ar_inputs.empty();
  const bool has_csv = !config.input_csvs.empty();
  if (has_ar == has_csv) {
    throw ConfigError("config must set exactly one input source: inputs.ar or inputs.csv");
  }
  if (has_ar) {
    if (config.samples == 0) {
      throw ConfigError("samples must be >= 1 when inputs are generated");
    }
    if (config.ar_inputs.size() != config.true_model.inputs()) {
      throw ConfigError("inputs.ar lists " + std::to_string(config.ar_inputs.size()) +
                        " generators but the model has " +
                        std::to_string(config.true_model.inputs()) + " inputs");
    }
    for (std::size_t i = 0; i < config.ar_inputs.size(); ++i) {
      const ArSpec& spec = config.ar_inputs[i];
      if (!(spec.drive_variance >= 0.0)) {
        throw ConfigError("inputs.ar[" + std::to_string(i) + "].drive_variance must be >= 0");
      }
      for (std::size_t j = 0; j < spec.poles.size(); ++j) {
        const double r = spec.poles[j].radius;
        if (!(r >= 0.0) || r >= 1.0) {
          throw ConfigError("inputs.ar[" + std::to_string(i) + "].poles[" + std::to_string(j) +
                            "].radius must lie in [0, 1)");
        }
      }
    }
  }
  for (std::size_t i = 0; i < config.snrs.size(); ++i) {
    if (!(config.snrs[i] > 0.0)) {
      throw ConfigError("noise.snrs[" + std::to_string(i) + "] must be > 0");
    }
  }
  if (!config.snrs.empty() && config.noise_seeds.empty()) {
    throw ConfigError("noise.seeds must be non-empty when noise.snrs is set");
  }
  if (config.ident.taps == 0) {
    throw ConfigError("identification.taps must be >= 1");
  }
  if (!(config.ident.ridge >= 0.0)) {
    throw ConfigError("identification.ridge must be >= 0");
  }
  if (!(config.ident.lambda > 0.0 && config.ident.lambda <= 1.0)) {
    throw ConfigError("identification.lambda must lie in (0, 1]");
  }
}

MultichannelSignal load_inputs(const ExperimentConfig& config) {
  validate(config);
  if (!config.ar_inputs.empty()) {
    std::vector<std::vector<double>> channels;
    channels.reserve(config.ar_inputs.size());
    for (const ArSpec& spec : config.ar_inputs) {
      MultichannelSignal one = ar_generate(spec, config.samples);
      channels.push_back(one.channel(0));
    }
    return MultichannelSignal(std::move(channels));
  }

  std::vector<std::vector<double>> channels;
  for (const std::filesystem::path& path : config.input_csvs) {
    MultichannelSignal part = read_signal_csv(path);
    for (std::size_t c = 0; c < part.channels(); ++c) {
      if (!channels.empty() && part.length() != channels.front().size()) {
        throw ConfigError(path.string() + ": record length " + std::to_string(part.length()) +
                          " differs from earlier input files (" +
                          std::to_string(channels.front().size()) + ")");
      }
      channels.push_back(part.channel(c));
    }
  }
  if (channels.size() != config.true_model.inputs()) {
    throw ConfigError("inputs.csv supplies " + std::to_string(channels.size()) +
                      " channels but the model has " + std::to_string(config.true_model.inputs()) +
                      " inputs");
  }
  return MultichannelSignal(std::move(channels));
}

std::string snr_label(double snr) { return detail::format_double(snr); }

GeneratedFiles run_generate(const ExperimentConfig& config) {
  const MultichannelSignal inputs = load_inputs(config);
  std::filesystem::create_directories(config.output_dir);

  GeneratedFiles files;
  files.inputs = config.output_dir / "inputs.csv";
  write_signal_csv(inputs, files.inputs);

  const MultichannelSignal clean = mimo_apply(config.true_model, inputs);
  files.outputs_clean = config.output_dir / "outputs_clean.csv";
  write_signal_csv(clean, files.outputs_clean);

  for (const double snr : config.snrs) {
    const NoiseSpec noise{snr, config.noise_seeds.front()};
    const MultichannelSignal noisy = add_noise(clean, noise);
    std::filesystem::path path = config.output_dir / ("outputs_snr_" + snr_label(snr) + ".csv");
    write_signal_csv(noisy, path);
    files.outputs_noisy.push_back(std::move(path));
  }
  return files;
}

SweepTable run_sweep(const ExperimentConfig& config) {
  validate(config);
  if (config.snrs.empty()) {
    throw ConfigError("noise.snrs must be non-empty for a sweep");
  }
  if (config.ident.taps != config.true_model.taps()) {
    throw ConfigError("identification.taps (" + std::to_string(config.ident.taps) +
                      ") must equal the model taps (" + std::to_string(config.true_model.taps()) +
                      ") to aggregate a sweep against the true coefficients");
  }
  const MultichannelSignal inputs = load_inputs(config);
  const MultichannelSignal clean = mimo_apply(config.true_model, inputs);

  struct Job {
    std::size_t snr_idx;
    std::size_t seed_idx;
  };
  std::vector<Job> jobs;
  jobs.reserve(config.snrs.size() * config.noise_seeds.size());
  for (std::size_t s = 0; s < config.snrs.size(); ++s) {
    for (std::size_t k = 0; k < config.noise_seeds.size(); ++k) {
      jobs.push_back({s, k});
    }
  }

  // Every job is a pure function of (snr, seed), so the fill order cannot
  // change the result.
  std::vector<std::vector<MimoFirModel>> estimates(
      config.snrs.size(), std::vector<MimoFirModel>(config.noise_seeds.size()));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= jobs.size()) {
        return;
      }
      try {
        const Job& job = jobs[i];
        const NoiseSpec noise{config.snrs[job.snr_idx], config.noise_seeds[job.seed_idx]};
        const MultichannelSignal noisy = add_noise(clean, noise);
        estimates[job.snr_idx][job.seed_idx] = estimate_once(config, inputs, noisy);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  const std::size_t workers = worker_count(jobs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  // Rows grouped by snr ascending; coefficients in model layout order.
  std::vector<std::size_t> snr_order(config.snrs.size());
  std::iota(snr_order.begin(), snr_order.end(), std::size_t{0});
  std::stable_sort(snr_order.begin(), snr_order.end(),
                   [&](std::size_t a, std::size_t b) { return config.snrs[a] < config.snrs[b]; });

  const MimoFirModel& truth = config.true_model;
  const double seed_count = static_cast<double>(config.noise_seeds.size());
  SweepTable table;
  for (const std::size_t s : snr_order) {
    for (std::size_t m = 0; m < truth.outputs(); ++m) {
      for (std::size_t p = 0; p < truth.inputs(); ++p) {
        for (std::size_t l = 0; l < truth.taps(); ++l) {
          double mean = 0.0;
          for (const MimoFirModel& est : estimates[s]) {
            mean += est(m, p, l);
          }
          mean /= seed_count;
          SweepRow row;
          row.snr = config.snrs[s];
          row.m = m;
          row.p = p;
          row.l = l;
          row.true_value = truth(m, p, l);
          row.estimated = mean;
          row.abs_error = std::abs(mean - truth(m, p, l));
          table.rows.push_back(row);
        }
      }
    }
  }
  return table;
}

void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open file for writing");
  }
  out << "snr,m,p,l,true,estimated,abs_error\n";
  for (const SweepRow& row : table.rows) {
    out << detail::format_double(row.snr) << ',' << row.m << ',' << row.p << ',' << row.l << ','
        << detail::format_double(row.true_value) << ',' << detail::format_double(row.estimated)
        << ',' << detail::format_double(row.abs_error) << '\n';
  }
  if (!out) {
    throw std::runtime_error(path.string() + ": write failed");
  }
}

}  // namespace fbident
