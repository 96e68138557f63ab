// Identification engines on a common problem: batch normal equations, the
// exponentially weighted recursive estimator, the all-orders sweep, and the
// statistics-domain route.
#include <cstddef>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fbident/ident.hpp"
#include "fbident/mimo.hpp"
#include "fbident/signal.hpp"

namespace {

struct Problem {
  fbident::MultichannelSignal x;
  fbident::MultichannelSignal d;
};

Problem make_problem(std::size_t channels, std::size_t taps, std::size_t frames) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  fbident::MimoFirModel truth(channels, channels, taps);
  for (std::size_t m = 0; m < channels; ++m) {
    for (std::size_t p = 0; p < channels; ++p) {
      for (std::size_t l = 0; l < taps; ++l) {
        truth(m, p, l) = dist(rng);
      }
    }
  }

  std::vector<std::vector<double>> data(channels, std::vector<double>(frames));
  for (auto& ch : data) {
    for (double& v : ch) {
      v = dist(rng);
    }
  }
  fbident::MultichannelSignal x{std::move(data)};
  fbident::MultichannelSignal d = fbident::mimo_apply(truth, x);
  for (std::size_t m = 0; m < channels; ++m) {
    for (std::size_t n = 0; n < frames; ++n) {
      d(m, n) += 0.05 * dist(rng);
    }
  }
  return {std::move(x), std::move(d)};
}

void BM_BlockLs(benchmark::State& state) {
  const auto problem = make_problem(2, static_cast<std::size_t>(state.range(0)), 4096);
  fbident::IdentConfig cfg;
  cfg.taps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fbident::block_ls_identify(problem.x, problem.d, cfg));
  }
}

void BM_Rls(benchmark::State& state) {
  const auto problem = make_problem(2, static_cast<std::size_t>(state.range(0)), 4096);
  fbident::IdentConfig cfg;
  cfg.taps = static_cast<std::size_t>(state.range(0));
  cfg.method = fbident::IdentMethod::kRls;
  cfg.ridge = 1e-4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fbident::rls_identify(problem.x, problem.d, cfg));
  }
}

void BM_OrderSweep(benchmark::State& state) {
  const auto problem = make_problem(2, static_cast<std::size_t>(state.range(0)), 4096);
  fbident::IdentConfig cfg;
  cfg.taps = static_cast<std::size_t>(state.range(0));
  cfg.method = fbident::IdentMethod::kOrderRecursive;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fbident::order_recursive_identify(problem.x, problem.d, cfg));
  }
}

void BM_EveryOrderSeparately(benchmark::State& state) {
  // Baseline for BM_OrderSweep: one independent batch solve per order.
  const auto problem = make_problem(2, static_cast<std::size_t>(state.range(0)), 4096);
  for (auto _ : state) {
    for (std::size_t order = 1; order <= static_cast<std::size_t>(state.range(0)); ++order) {
      fbident::IdentConfig cfg;
      cfg.taps = order;
      benchmark::DoNotOptimize(fbident::block_ls_identify(problem.x, problem.d, cfg));
    }
  }
}

void BM_StatisticsRoute(benchmark::State& state) {
  const auto problem = make_problem(2, static_cast<std::size_t>(state.range(0)), 4096);
  const std::size_t taps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fbident::wiener_identify(fbident::sample_correlations(problem.x, problem.d, taps)));
  }
}

}  // namespace

BENCHMARK(BM_BlockLs)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_Rls)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_OrderSweep)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_EveryOrderSeparately)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_StatisticsRoute)->Arg(4)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
