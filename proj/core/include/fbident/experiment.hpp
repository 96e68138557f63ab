#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fbident/generate.hpp"
#include "fbident/ident.hpp"
#include "fbident/mimo.hpp"

namespace fbident {

/// A full experiment: input description, true model, identification settings,
/// and the noise conditions to sweep. Inputs come either from per-channel AR
/// generators or from CSV files (exactly one of the two).
struct ExperimentConfig {
  std::size_t samples = 10000;                     // record length T (AR inputs only)
  std::filesystem::path output_dir = ".";
  std::vector<ArSpec> ar_inputs;                   // one generator per input channel
  std::vector<std::filesystem::path> input_csvs;   // channels concatenated in order
  MimoFirModel true_model;
  IdentConfig ident;
  std::vector<double> snrs;                        // linear, each > 0
  std::vector<std::uint64_t> noise_seeds;          // one estimate per (snr, seed)
};

/// Structural validation; throws ConfigError naming the offending field.
void validate(const ExperimentConfig& config);

/// Resolves the configured inputs into one multichannel record and checks the
/// channel count against the true model.
MultichannelSignal load_inputs(const ExperimentConfig& config);

/// Filename fragment for a linear snr value ("1", "0.1", "0.001", ...).
std::string snr_label(double snr);

struct GeneratedFiles {
  std::filesystem::path inputs;
  std::filesystem::path outputs_clean;
  std::vector<std::filesystem::path> outputs_noisy;  // one per snr, first seed
};

/// Writes inputs.csv, outputs_clean.csv, and outputs_snr_<snr>.csv per snr
/// into config.output_dir (created if missing). Noisy outputs use the first
/// noise seed. Deterministic: the same config always writes identical bytes.
GeneratedFiles run_generate(const ExperimentConfig& config);

struct SweepRow {
  double snr = 0.0;
  std::size_t m = 0, p = 0, l = 0;
  double true_value = 0.0;
  double estimated = 0.0;  // mean over the seed list
  double abs_error = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // ordered by (snr, m, p, l)
};

/// One identification per (snr, seed), aggregated per snr by averaging the
/// estimates over seeds. Jobs run in parallel, capped by the FBIDENT_THREADS
/// environment variable when set; results do not depend on the schedule.
SweepTable run_sweep(const ExperimentConfig& config);

/// Consolidated table with the write_report_csv column layout.
void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path);

}  // namespace fbident
