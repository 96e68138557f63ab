#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fbident/multirate.hpp"
#include "fbident/signal.hpp"
#include "oracles.hpp"

using fbident::FirFilter;
using fbident::MultichannelSignal;
using fbident::PolyphaseMatrix;
using fbident::SynthesisFilterBank;

TEST_CASE("upsampling inserts zeros between samples") {
  const std::vector<double> x = {1.0, 2.0};
  CHECK(fbident::upsample(x, 3) == std::vector<double>{1, 0, 0, 2, 0, 0});
  CHECK(fbident::upsample(x, 1) == x);
  CHECK_THROWS_AS(fbident::upsample(x, 0), std::invalid_argument);
  CHECK(fbident::upsample(std::vector<double>{}, 2).empty());
}

TEST_CASE("bank construction pads bands to a common multiple of the band count") {
  const SynthesisFilterBank bank{{FirFilter{{1.0}}, FirFilter{{1.0, 2.0, 3.0}}}};
  CHECK(bank.bands() == 2);
  CHECK(bank.filter_length() == 4);  // longest band 3, rounded up to a multiple of 2
  CHECK(bank.band(0).taps == std::vector<double>{1, 0, 0, 0});
  CHECK(bank.band(1).taps == std::vector<double>{1, 2, 3, 0});

  CHECK_THROWS_AS(SynthesisFilterBank{std::vector<FirFilter>{}}, std::invalid_argument);
  CHECK_THROWS_AS((SynthesisFilterBank{{FirFilter{{1.0}}, FirFilter{{}}}}),
                  std::invalid_argument);
}

TEST_CASE("component split follows the reversed-phase index map") {
  // f = [1,2,3,4], two bands: component k picks taps f(p*2 + 1 - k).
  const SynthesisFilterBank bank{{FirFilter{{1.0, 2.0, 3.0, 4.0}}, FirFilter{{0.0}}}};
  const PolyphaseMatrix components = fbident::type2_polyphase(bank);
  CHECK(components.bands() == 2);
  CHECK(components.component_length() == 2);
  CHECK(components.component(0, 0) == std::vector<double>{2, 4});
  CHECK(components.component(0, 1) == std::vector<double>{1, 3});

  // A length-1 filter [5] in a 3-band bank lands in the last component.
  const SynthesisFilterBank spike{{FirFilter{{5.0}}, FirFilter{{0.0}}, FirFilter{{0.0}}}};
  const PolyphaseMatrix sc = fbident::type2_polyphase(spike);
  CHECK(sc.component(0, 0) == std::vector<double>{0});
  CHECK(sc.component(0, 1) == std::vector<double>{0});
  CHECK(sc.component(0, 2) == std::vector<double>{5});
}

TEST_CASE("component split and reassembly are mutually inverse") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = oracle::pick(rng, 1, 5);
    std::vector<FirFilter> bands;
    for (std::size_t i = 0; i < m; ++i) {
      bands.push_back({oracle::random_taps(rng, oracle::pick(rng, 1, 17))});
    }
    const SynthesisFilterBank bank{std::move(bands)};
    const SynthesisFilterBank back = fbident::polyphase_reassemble(fbident::type2_polyphase(bank));
    REQUIRE(back.bands() == bank.bands());
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(back.band(i).taps == bank.band(i).taps);
    }
  }
}

TEST_CASE("two-band synthesis worked example") {
  // f0 = [1,2], f1 = [3,4], one low-rate frame x0 = x1 = 1:
  // upsampled x0 -> [1,0] filtered by f0 -> [1,2]; x1 -> [3,4]; sum [4,6].
  const SynthesisFilterBank bank{{FirFilter{{1.0, 2.0}}, FirFilter{{3.0, 4.0}}}};
  const MultichannelSignal x({{1.0}, {1.0}});
  CHECK(fbident::synth_direct(bank, x) == std::vector<double>{4, 6});
  CHECK(fbident::synth_polyphase(bank, x) == std::vector<double>{4, 6});
}

TEST_CASE("single-band bank degenerates to plain convolution") {
  const SynthesisFilterBank bank{{FirFilter{{1.0, -1.0, 0.5}}}};
  const MultichannelSignal x({{2.0, 0.0, 1.0, 3.0}});
  // truncated convolution with [1,-1,0.5] padded to length 3
  const std::vector<double> want = {2.0, -2.0, 2.0, 2.0};
  CHECK(fbident::synth_direct(bank, x) == want);
  CHECK(fbident::synth_polyphase(bank, x) == want);
}

TEST_CASE("direct and low-rate synthesis agree on random banks") {
  oracle::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = oracle::pick(rng, 1, 4);
    std::vector<FirFilter> bands;
    for (std::size_t i = 0; i < m; ++i) {
      bands.push_back({oracle::random_taps(rng, oracle::pick(rng, 1, 12))});
    }
    const SynthesisFilterBank bank{std::move(bands)};
    const std::size_t frames = oracle::pick(rng, 1, 40);
    const MultichannelSignal x = oracle::random_signal(rng, m, frames);

    const std::vector<double> direct = fbident::synth_direct(bank, x);
    const std::vector<double> fast = fbident::synth_polyphase(bank, x);
    REQUIRE(direct.size() == frames * m);
    REQUIRE(fast.size() == frames * m);

    double scale = 1.0;
    for (const double v : direct) scale = std::max(scale, std::abs(v));
    for (std::size_t n = 0; n < direct.size(); ++n) {
      CHECK(std::abs(direct[n] - fast[n]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("branch outputs match an independently ordered evaluation") {
  oracle::Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = oracle::pick(rng, 1, 4);
    std::vector<FirFilter> bands;
    for (std::size_t i = 0; i < m; ++i) {
      bands.push_back({oracle::random_taps(rng, oracle::pick(rng, 1, 12))});
    }
    const SynthesisFilterBank bank{std::move(bands)};
    const MultichannelSignal x = oracle::random_signal(rng, m, oracle::pick(rng, 1, 30));

    const MultichannelSignal branches = fbident::polyphase_branch_outputs(bank, x);
    const MultichannelSignal reference = oracle::direct_branch_outputs(bank, x);
    REQUIRE(branches.channels() == m);
    REQUIRE(branches.length() == x.length());
    double scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t n = 0; n < x.length(); ++n) {
        scale = std::max(scale, std::abs(reference(i, n)));
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t n = 0; n < x.length(); ++n) {
        CHECK(std::abs(branches(i, n) - reference(i, n)) <= 1e-12 * scale);
      }
    }

    // Interleaving the branches with the last branch leading each block is
    // exactly the full-rate synthesis output.
    const std::vector<double> full = fbident::synth_polyphase(bank, x);
    for (std::size_t n = 0; n < x.length(); ++n) {
      for (std::size_t j = 0; j < m; ++j) {
        CHECK(full[n * m + j] == branches(m - 1 - j, n));
      }
    }
  }
}

TEST_CASE("synthesis rejects mismatched channel counts") {
  const SynthesisFilterBank bank{{FirFilter{{1.0}}, FirFilter{{1.0}}}};
  const MultichannelSignal x({{1.0, 2.0}});
  CHECK_THROWS_AS(fbident::synth_direct(bank, x), std::invalid_argument);
  CHECK_THROWS_AS(fbident::synth_polyphase(bank, x), std::invalid_argument);
  CHECK_THROWS_AS(fbident::polyphase_branch_outputs(bank, x), std::invalid_argument);
}
