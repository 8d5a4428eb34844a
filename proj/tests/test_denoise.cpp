// SPDX-License-Identifier: Apache-2.0
#include <numeric>

#include "agentharness/denoise.hpp"
#include "agentharness/parallel.hpp"
#include "agentharness/prng.hpp"
#include "doctest.h"

using namespace ah;

using Positions = std::vector<std::size_t>;

TEST_CASE("threshold gate") {
  std::vector<double> c{0.5, 0.95, 0.2, 0.9};
  CHECK(threshold_unmask(c, 0.9) == Positions{1, 3});
  CHECK(threshold_unmask(c, 0.99) == Positions{1});  // argmax fallback
  std::vector<double> tie{0.3, 0.3};
  CHECK(threshold_unmask(tie, 0.5) == Positions{0});
  CHECK_THROWS(threshold_unmask(std::vector<double>{}, 0.5));
}

TEST_CASE("factor gate worked example and fallback") {
  std::vector<double> c{0.8, 0.99, 0.95};
  CHECK(factor_unmask(c, 0.3) == Positions{1, 2});
  CHECK(factor_unmask(c, 1.0) == Positions{1, 2, 0});  // 4 * 0.2 = 0.8 < 1
  std::vector<double> low{0.1, 0.4};
  CHECK(factor_unmask(low, 0.5) == Positions{1});
}

TEST_CASE("gate config validation and dispatch") {
  CHECK_THROWS(validate(GateConfig{GateMode::threshold, 0.0, 0.5}));
  CHECK_THROWS(validate(GateConfig{GateMode::threshold, 1.5, 0.5}));
  CHECK_THROWS(validate(GateConfig{GateMode::factor, 0.9, 0.0}));
  CHECK_NOTHROW(validate(GateConfig{}));
  std::vector<double> c{0.95, 0.5};
  CHECK(gate_unmask(c, {GateMode::threshold, 0.9, 0.5}) == Positions{0});
  CHECK(parse_gate_mode("factor") == GateMode::factor);
  CHECK_FALSE(parse_gate_mode("greedy"));
}

TEST_CASE("low-confidence remasking") {
  std::map<std::size_t, double> committed{{0, 0.9}, {3, 0.2}, {5, 0.2}, {7, 0.6}};
  CHECK(low_confidence_remask(committed, 2) == Positions{3, 5});
  CHECK(low_confidence_remask(committed, 0).empty());
  CHECK_THROWS(low_confidence_remask(committed, 5));
}

TEST_CASE("reverse schedule spreads the remainder first") {
  CHECK(plan_reverse_schedule(10, 4) == Positions{3, 3, 2, 2});
  CHECK(plan_reverse_schedule(4, 4) == Positions{1, 1, 1, 1});
  for (std::size_t L = 1; L < 40; ++L)
    for (std::size_t T = 1; T <= L; ++T) {
      auto s = plan_reverse_schedule(L, T);
      CHECK(std::accumulate(s.begin(), s.end(), std::size_t{0}) == L);
    }
  CHECK_THROWS(plan_reverse_schedule(3, 0));
  CHECK_THROWS(plan_reverse_schedule(3, 4));
}

TEST_CASE("block decoding stops at the first EOS") {
  const std::vector<Token> prompt{100, 101};
  LookupPredictor certain({5, 6, 7, 99, 8}, prompt.size(), 1, 0, true);
  auto r = block_decode(certain, prompt, 2, GateConfig{}, 10, 99);
  CHECK(r.tokens == std::vector<Token>{5, 6, 7});
  CHECK_FALSE(r.truncated);
  CHECK(r.iterations_per_block == Positions{1, 1});  // certain predictions commit a whole block

  LookupPredictor hashy({5, 6, 7, 8}, prompt.size(), 3, 4);
  auto t = block_decode(hashy, prompt, 4, GateConfig{GateMode::threshold, 1.0, 0.5}, 2, 99);
  CHECK(t.truncated);
  CHECK(t.tokens == std::vector<Token>{5, 6, 7, 8, 4, 4, 4, 4});
  CHECK(t.iterations_per_block == Positions{4, 4});  // one position per iteration at tau = 1
  std::size_t committed = 0;
  for (const auto& ev : t.trace) committed += ev.committed.size();
  CHECK(committed == 8);
  CHECK_THROWS(block_decode(hashy, prompt, 0, GateConfig{}, 2, 99));
}

TEST_CASE("parallel kernels agree with the serial reference") {
  SplitMix64 rng(9);
  std::vector<std::vector<std::string>> seqs(300);
  for (auto& s : seqs) {
    const auto n = rng.below(60);
    for (std::uint64_t i = 0; i < n; ++i) s.push_back(std::string(1, static_cast<char>('a' + rng.below(3))));
  }
  for (int thr = 2; thr <= 5; ++thr) CHECK(retry_loop_counts(seqs, thr) == retry_loop_counts_serial(seqs, thr));

  std::vector<std::vector<double>> conf(300);
  for (auto& c : conf) {
    const auto n = 1 + rng.below(32);
    for (std::uint64_t i = 0; i < n; ++i) c.push_back(rng.unit());
  }
  for (GateConfig g : {GateConfig{GateMode::threshold, 0.7, 0.5}, GateConfig{GateMode::factor, 0.9, 0.4}})
    CHECK(gate_commit_counts(conf, g) == gate_commit_counts_serial(conf, g));
  CHECK(kernel_threads() >= 1);
}
