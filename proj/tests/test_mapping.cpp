#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fbident/mapping.hpp"
#include "fbident/mimo.hpp"
#include "fbident/multirate.hpp"
#include "oracles.hpp"

using fbident::FirFilter;
using fbident::LptvSystem;
using fbident::MimoFirModel;
using fbident::MultichannelSignal;
using fbident::ScalarStream;
using fbident::SynthesisFilterBank;

TEST_CASE("bank to model worked example") {
  // Two bands of length 2: f0 = [a,b], f1 = [c,d]; single-tap 2x2 model with
  // h(i,j,0) = f_j(1-i).
  const double a = 1.5, b = -2.0, c = 3.25, d = 0.125;
  const SynthesisFilterBank bank{{FirFilter{{a, b}}, FirFilter{{c, d}}}};
  const MimoFirModel model = fbident::bank_to_mimo(bank);
  CHECK(model.outputs() == 2);
  CHECK(model.inputs() == 2);
  CHECK(model.taps() == 1);
  CHECK(model(0, 0, 0) == b);
  CHECK(model(0, 1, 0) == d);
  CHECK(model(1, 0, 0) == a);
  CHECK(model(1, 1, 0) == c);
}

TEST_CASE("bank and model views are mutually inverse") {
  oracle::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = oracle::pick(rng, 1, 4);
    std::vector<FirFilter> bands;
    for (std::size_t i = 0; i < m; ++i) {
      bands.push_back({oracle::random_taps(rng, oracle::pick(rng, 1, 12))});
    }
    const SynthesisFilterBank bank{std::move(bands)};
    const SynthesisFilterBank back = fbident::mimo_to_bank(fbident::bank_to_mimo(bank));
    REQUIRE(back.bands() == bank.bands());
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(back.band(i).taps == bank.band(i).taps);
    }

    const MimoFirModel model = oracle::random_model(rng, m, m, oracle::pick(rng, 1, 5));
    CHECK(fbident::bank_to_mimo(fbident::mimo_to_bank(model)) == model);
  }
}

TEST_CASE("converted model reproduces branch outputs bit for bit") {
  oracle::Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = oracle::pick(rng, 1, 4);
    std::vector<FirFilter> bands;
    for (std::size_t i = 0; i < m; ++i) {
      bands.push_back({oracle::random_taps(rng, oracle::pick(rng, 1, 12))});
    }
    const SynthesisFilterBank bank{std::move(bands)};
    const MultichannelSignal x = oracle::random_signal(rng, m, oracle::pick(rng, 1, 30));

    const MultichannelSignal via_model = fbident::mimo_apply(fbident::bank_to_mimo(bank), x);
    const MultichannelSignal branches = fbident::polyphase_branch_outputs(bank, x);
    CHECK(via_model == branches);

    // Full-rate view: interleaving the model outputs is the synthesis output.
    CHECK(fbident::serialize(via_model).samples == fbident::synth_polyphase(bank, x));
  }
}

TEST_CASE("identity model maps to a bank of shifted impulses") {
  const SynthesisFilterBank bank = fbident::mimo_to_bank(MimoFirModel::identity(3));
  CHECK(bank.bands() == 3);
  CHECK(bank.filter_length() == 3);
  CHECK(bank.band(0).taps == std::vector<double>{0, 0, 1});
  CHECK(bank.band(1).taps == std::vector<double>{0, 1, 0});
  CHECK(bank.band(2).taps == std::vector<double>{1, 0, 0});
}

TEST_CASE("non-square models must be embedded before converting to a bank") {
  const MimoFirModel rect(2, 3, 1, std::vector<double>(6, 1.0));
  CHECK_THROWS_WITH_AS(fbident::mimo_to_bank(rect), doctest::Contains("square"),
                       std::invalid_argument);

  const MimoFirModel padded = fbident::pad_to_square(rect);
  CHECK(padded.outputs() == 6);  // lcm(2, 3)
  CHECK(padded.inputs() == 6);
  CHECK(padded.taps() == rect.taps());

  // Original block intact, everything else zero.
  for (std::size_t m = 0; m < 6; ++m) {
    for (std::size_t p = 0; p < 6; ++p) {
      const double want = (m < 2 && p < 3) ? rect(m, p, 0) : 0.0;
      CHECK(padded(m, p, 0) == want);
    }
  }

  // Feeding the padded model zero-extended inputs reproduces the original.
  oracle::Rng rng(33);
  const MultichannelSignal x = oracle::random_signal(rng, 3, 12);
  std::vector<std::vector<double>> extended;
  for (std::size_t p = 0; p < 3; ++p) extended.push_back(x.channel(p));
  extended.resize(6, std::vector<double>(12, 0.0));
  const MultichannelSignal y_rect = fbident::mimo_apply(rect, x);
  const MultichannelSignal y_pad = fbident::mimo_apply(padded, MultichannelSignal(extended));
  for (std::size_t m = 0; m < 2; ++m) {
    for (std::size_t n = 0; n < 12; ++n) {
      CHECK(y_pad(m, n) == y_rect(m, n));
    }
    for (std::size_t n = 0; n < 12; ++n) {
      CHECK(y_pad(m + 2, n) == 0.0);
    }
  }

  // Round trip through the bank view after padding.
  CHECK(fbident::bank_to_mimo(fbident::mimo_to_bank(padded)) == padded);
}

TEST_CASE("periodic system validates its kernels") {
  CHECK_THROWS_AS(LptvSystem{std::vector<FirFilter>{}}, std::invalid_argument);
  CHECK_THROWS_AS((LptvSystem{{FirFilter{{1.0}}, FirFilter{{}}}}), std::invalid_argument);
  CHECK_THROWS_AS((LptvSystem{{FirFilter{{1.0}}, FirFilter{{1.0, 2.0}}}}), std::invalid_argument);
}

TEST_CASE("periodic filtering worked example") {
  // period 2, memoryless gains: even samples scaled by 2, odd by -3
  const LptvSystem sys{{FirFilter{{2.0}}, FirFilter{{-3.0}}}};
  const std::vector<double> x = {1.0, 1.0, 5.0, 7.0};
  CHECK(fbident::lptv_apply(sys, x) == std::vector<double>{2.0, -3.0, 10.0, -21.0});

  // Blocked twin: channel 1 carries even phases, channel 0 odd phases.
  const MimoFirModel blocked = fbident::lptv_to_mimo(sys);
  CHECK(blocked.outputs() == 2);
  CHECK(blocked.inputs() == 2);
  CHECK(blocked.taps() == 1);
  CHECK(blocked(0, 0, 0) == -3.0);
  CHECK(blocked(0, 1, 0) == 0.0);
  CHECK(blocked(1, 0, 0) == 0.0);
  CHECK(blocked(1, 1, 0) == 2.0);
}

TEST_CASE("blocking a period-2 system with memory") {
  // g0 = [g00, g01], g1 = [g10, g11]; the blocked model reads
  // h(m, p, l) = g_{1-m}(2l + p - m), entries outside the kernel being zero.
  const double g00 = 1.0, g01 = -2.0, g10 = 0.5, g11 = 4.0;
  const LptvSystem sys{{FirFilter{{g00, g01}}, FirFilter{{g10, g11}}}};
  const MimoFirModel blocked = fbident::lptv_to_mimo(sys);
  REQUIRE(blocked.taps() == 2);
  CHECK(blocked(0, 0, 0) == g10);
  CHECK(blocked(0, 1, 0) == g11);
  CHECK(blocked(1, 0, 0) == 0.0);
  CHECK(blocked(1, 1, 0) == g00);
  CHECK(blocked(0, 0, 1) == 0.0);
  CHECK(blocked(0, 1, 1) == 0.0);
  CHECK(blocked(1, 0, 1) == g01);
  CHECK(blocked(1, 1, 1) == 0.0);
}

TEST_CASE("blocked simulation equals direct periodic simulation") {
  oracle::Rng rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t period = oracle::pick(rng, 1, 4);
    const std::size_t klen = oracle::pick(rng, 1, 9);
    std::vector<FirFilter> kernels;
    for (std::size_t i = 0; i < period; ++i) {
      kernels.push_back({oracle::random_taps(rng, klen)});
    }
    const LptvSystem sys{std::move(kernels)};
    const std::vector<double> s = oracle::random_taps(rng, period * oracle::pick(rng, 1, 30));

    const std::vector<double> direct = fbident::lptv_apply(sys, s);
    const MultichannelSignal x = fbident::deserialize(ScalarStream{s, period}, period);
    const std::vector<double> blocked =
        fbident::serialize(fbident::mimo_apply(fbident::lptv_to_mimo(sys), x)).samples;
    CHECK(direct == blocked);
  }
}
