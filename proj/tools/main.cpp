#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config_json.hpp"
#include "fbident/csv.hpp"
#include "fbident/errors.hpp"
#include "fbident/experiment.hpp"
#include "fbident/ident.hpp"
#include "fbident/verify.hpp"

namespace {

void ensure_parent_dir(const std::filesystem::path& file) {
  const std::filesystem::path dir = file.parent_path();
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
  }
}

std::filesystem::path residuals_path(const std::filesystem::path& report) {
  return report.parent_path() / (report.stem().string() + "_residuals.csv");
}

void print_rss(const fbident::IdentReport& report) {
  std::cout << "rss = [";
  for (std::size_t m = 0; m < report.rss.size(); ++m) {
    std::cout << (m ? ", " : "") << report.rss[m];
  }
  std::cout << "] over " << report.samples_used << " samples\n";
}

void print_reference_errors(const fbident::IdentReport& report) {
  if (!report.errors) {
    return;
  }
  const fbident::ErrorTable& errors = *report.errors;
  std::cout << "max |estimated - reference| = " << errors.max_abs_error << " at (m="
            << errors.max_m << ", p=" << errors.max_p << ", l=" << errors.max_l << ")\n";
}

int run_generate_cmd(const std::string& config_path) {
  const fbident::ExperimentConfig cfg = fbident::tools::load_config(config_path);
  const fbident::GeneratedFiles files = fbident::run_generate(cfg);
  std::cout << "wrote " << files.inputs.string() << "\n";
  std::cout << "wrote " << files.outputs_clean.string() << "\n";
  for (const std::filesystem::path& path : files.outputs_noisy) {
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out) {
  const fbident::ExperimentConfig cfg = fbident::tools::load_config(config_path);
  const fbident::SweepTable table = fbident::run_sweep(cfg);
  const std::filesystem::path out_path =
      out.empty() ? cfg.output_dir / "sweep.csv" : std::filesystem::path(out);
  ensure_parent_dir(out_path);
  fbident::write_sweep_csv(table, out_path);

  double snr = table.rows.empty() ? 0.0 : table.rows.front().snr;
  double worst = 0.0;
  for (const fbident::SweepRow& row : table.rows) {
    if (row.snr != snr) {
      std::cout << "snr " << snr << ": max |mean estimate - true| = " << worst << "\n";
      snr = row.snr;
      worst = 0.0;
    }
    worst = std::max(worst, row.abs_error);
  }
  if (!table.rows.empty()) {
    std::cout << "snr " << snr << ": max |mean estimate - true| = " << worst << "\n";
  }
  std::cout << "wrote " << out_path.string() << "\n";
  return 0;
}

struct IdentifyArgs {
  std::string inputs;
  std::string outputs;
  std::size_t taps = 1;
  std::string method = "block-ls";
  double ridge = 0.0;
  double lambda = 1.0;
  std::string reference;
  std::string report;
};

int run_identify_cmd(const IdentifyArgs& args) {
  const fbident::MultichannelSignal x = fbident::read_signal_csv(args.inputs);
  const fbident::MultichannelSignal d = fbident::read_signal_csv(args.outputs);

  fbident::IdentConfig cfg;
  cfg.taps = args.taps;
  cfg.ridge = args.ridge;
  cfg.lambda = args.lambda;

  fbident::MimoFirModel reference;
  const fbident::MimoFirModel* reference_ptr = nullptr;
  if (!args.reference.empty()) {
    reference = fbident::read_model_csv(args.reference);
    reference_ptr = &reference;
  }

  fbident::IdentReport report;
  if (args.method == "block-ls") {
    cfg.method = fbident::IdentMethod::kBlockLs;
    report = fbident::block_ls_identify(x, d, cfg, reference_ptr);
  } else if (args.method == "rls") {
    cfg.method = fbident::IdentMethod::kRls;
    report = fbident::rls_identify(x, d, cfg, reference_ptr);
  } else if (args.method == "order-recursive") {
    cfg.method = fbident::IdentMethod::kOrderRecursive;
    std::vector<fbident::IdentReport> reports =
        fbident::order_recursive_identify(x, d, cfg, reference_ptr);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      std::cout << "order " << (i + 1) << ": ";
      print_rss(reports[i]);
    }
    report = std::move(reports.back());
  } else {
    cfg.method = fbident::IdentMethod::kWiener;
    const fbident::CorrelationData corr = fbident::sample_correlations(x, d, cfg.taps);
    report.estimated = fbident::wiener_identify(corr, cfg.ridge);
    report.samples_used = x.length();
    // Residuals of the statistics-based solution, reported over the same
    // window as the batch methods so the numbers are comparable.
    report.rss.assign(d.channels(), 0.0);
    for (std::size_t m = 0; m < d.channels(); ++m) {
      for (std::size_t n = cfg.taps - 1; n < x.length(); ++n) {
        double err = d(m, n);
        for (std::size_t l = 0; l < cfg.taps; ++l) {
          for (std::size_t p = 0; p < x.channels(); ++p) {
            err -= report.estimated(m, p, l) * x(p, n - l);
          }
        }
        report.rss[m] += err * err;
      }
    }
    if (reference_ptr != nullptr) {
      report.reference = reference;
      report.errors = fbident::report_errors(report.estimated, reference);
    }
  }

  std::cout << "estimated " << report.estimated.outputs() << "x" << report.estimated.inputs()
            << " model with " << report.estimated.taps() << " taps from " << x.length()
            << " samples\n";
  print_rss(report);
  print_reference_errors(report);

  if (!args.report.empty()) {
    const std::filesystem::path report_path(args.report);
    ensure_parent_dir(report_path);
    fbident::write_report_csv(report, report_path);
    const std::filesystem::path res_path = residuals_path(report_path);
    fbident::write_residuals_csv(report, res_path);
    std::cout << "wrote " << report_path.string() << "\n";
    std::cout << "wrote " << res_path.string() << "\n";
  }
  return 0;
}

int run_verify_cmd(std::uint64_t seed, const std::string& fault) {
  fbident::VerifyOptions options;
  options.seed = seed;
  options.inject_polyphase_fault = (fault == "polyphase-index");
  return fbident::run_verification(options, std::cout) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIMO FIR identification toolkit: blocked models, synthesis filter banks, and "
               "serialized single-channel streams are three views of one system; every command "
               "works on CSV records of them"};
  app.require_subcommand(1);

  std::string gen_config;
  CLI::App* generate = app.add_subcommand(
      "generate", "synthesize the input/output records an experiment config describes");
  generate->add_option("--config", gen_config, "experiment description (JSON)")->required();

  std::string sweep_config;
  std::string sweep_out;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "estimate the model at every configured noise level, averaged over noise seeds");
  sweep->add_option("--config", sweep_config, "experiment description (JSON)")->required();
  sweep->add_option("--out", sweep_out, "consolidated table path (default <output_dir>/sweep.csv)");

  IdentifyArgs id;
  CLI::App* identify =
      app.add_subcommand("identify", "fit a blocked FIR model to input/output records");
  identify->add_option("--inputs", id.inputs, "input record CSV")->required();
  identify->add_option("--outputs", id.outputs, "output record CSV")->required();
  identify->add_option("--taps", id.taps, "model order (lags per input)")
      ->required()
      ->check(CLI::PositiveNumber);
  identify->add_option("--method", id.method, "estimator")
      ->check(CLI::IsMember({"block-ls", "rls", "order-recursive", "wiener"}))
      ->capture_default_str();
  identify->add_option("--ridge", id.ridge, "diagonal regularization")->capture_default_str();
  identify->add_option("--lambda", id.lambda, "forgetting factor (rls only)")
      ->capture_default_str();
  identify->add_option("--reference", id.reference, "true model CSV for error reporting");
  identify->add_option("--report", id.report,
                       "coefficient table destination; residuals go next to it");

  std::uint64_t verify_seed = 1;
  std::string verify_fault;
  CLI::App* verify = app.add_subcommand(
      "verify", "run the randomized cross-representation equivalence suite");
  verify->add_option("--seed", verify_seed, "suite seed")->capture_default_str();
  verify->add_option("--inject-fault", verify_fault,
                     "corrupt one route on purpose to prove the suite detects it")
      ->check(CLI::IsMember({"polyphase-index"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (generate->parsed()) {
      return run_generate_cmd(gen_config);
    }
    if (sweep->parsed()) {
      return run_sweep_cmd(sweep_config, sweep_out);
    }
    if (identify->parsed()) {
      return run_identify_cmd(id);
    }
    if (verify->parsed()) {
      return run_verify_cmd(verify_seed, verify_fault);
    }
  } catch (const fbident::RankDeficiencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
