// Direct (upsample, filter, sum) versus polyphase synthesis at the low rate.
// The polyphase route does the same arithmetic with an M-fold smaller working
// set and no multiplications against inserted zeros.
#include <cstddef>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fbident/multirate.hpp"
#include "fbident/signal.hpp"

namespace {

fbident::SynthesisFilterBank make_bank(std::size_t bands, std::size_t length,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<fbident::FirFilter> filters(bands);
  for (auto& f : filters) {
    f.taps.resize(length);
    for (double& t : f.taps) {
      t = dist(rng);
    }
  }
  return fbident::SynthesisFilterBank(std::move(filters));
}

fbident::MultichannelSignal make_signal(std::size_t channels, std::size_t frames,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::vector<double>> data(channels, std::vector<double>(frames));
  for (auto& ch : data) {
    for (double& v : ch) {
      v = dist(rng);
    }
  }
  return fbident::MultichannelSignal(std::move(data));
}

void BM_SynthDirect(benchmark::State& state) {
  const std::size_t bands = static_cast<std::size_t>(state.range(0));
  const auto bank = make_bank(bands, 16 * bands, 1);
  const auto x = make_signal(bands, 4096, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fbident::synth_direct(bank, x));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 4096 * bands);
}

void BM_SynthPolyphase(benchmark::State& state) {
  const std::size_t bands = static_cast<std::size_t>(state.range(0));
  const auto bank = make_bank(bands, 16 * bands, 1);
  const auto x = make_signal(bands, 4096, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fbident::synth_polyphase(bank, x));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 4096 * bands);
}

}  // namespace

BENCHMARK(BM_SynthDirect)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(BM_SynthPolyphase)->Arg(2)->Arg(4)->Arg(8);
