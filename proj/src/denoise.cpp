// SPDX-License-Identifier: Apache-2.0
#include "agentharness/denoise.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "agentharness/prng.hpp"

namespace ah {

std::string_view to_string(GateMode m) noexcept { return m == GateMode::factor ? "factor" : "threshold"; }

std::optional<GateMode> parse_gate_mode(std::string_view s) noexcept {
  if (s == "threshold") return GateMode::threshold;
  if (s == "factor") return GateMode::factor;
  return std::nullopt;
}

void validate(const GateConfig& cfg) {
  if (!(cfg.tau > 0.0 && cfg.tau <= 1.0)) throw std::invalid_argument("tau must be in (0, 1]");
  if (!(cfg.gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
}

namespace {

std::size_t argmax(std::span<const double> c) {
  if (c.empty()) throw std::invalid_argument("confidences must be nonempty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i] > c[best]) best = i;
  return best;
}

}  // namespace

std::vector<std::size_t> threshold_unmask(std::span<const double> confidences, double tau) {
  const std::size_t fallback = argmax(confidences);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < confidences.size(); ++i)
    if (confidences[i] >= tau) out.push_back(i);
  if (out.empty()) out.push_back(fallback);
  return out;
}

std::vector<std::size_t> factor_unmask(std::span<const double> confidences, double gamma) {
  const std::size_t fallback = argmax(confidences);
  std::vector<std::size_t> order(confidences.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return confidences[a] > confidences[b]; });
  std::size_t best_k = 0;
  for (std::size_t k = 1; k <= order.size(); ++k) {
    if (static_cast<double>(k + 1) * (1.0 - confidences[order[k - 1]]) < gamma) best_k = k;
  }
  if (best_k == 0) return {fallback};
  order.resize(best_k);
  return order;
}

std::vector<std::size_t> gate_unmask(std::span<const double> confidences, const GateConfig& cfg) {
  return cfg.mode == GateMode::factor ? factor_unmask(confidences, cfg.gamma)
                                      : threshold_unmask(confidences, cfg.tau);
}

std::vector<std::size_t> low_confidence_remask(const std::map<std::size_t, double>& committed, std::size_t r) {
  if (r > committed.size())
    throw std::invalid_argument("low_confidence_remask: r=" + std::to_string(r) + " exceeds " +
                                std::to_string(committed.size()) + " committed positions");
  std::vector<std::pair<std::size_t, double>> items(committed.begin(), committed.end());
  // map order is ascending position, so a stable sort keeps the tie rule
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < r; ++i) out.push_back(items[i].first);
  return out;
}

std::vector<std::size_t> plan_reverse_schedule(std::size_t length, std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("plan_reverse_schedule: T must be >= 1");
  if (steps > length)
    throw std::invalid_argument("plan_reverse_schedule: T=" + std::to_string(steps) + " exceeds L=" +
                                std::to_string(length));
  std::vector<std::size_t> out(steps, length / steps);
  for (std::size_t i = 0; i < length % steps; ++i) ++out[i];
  return out;
}

LookupPredictor::LookupPredictor(std::vector<Token> table, std::size_t prompt_length, std::uint64_t seed,
                                 Token filler, bool certain)
    : table_(std::move(table)), prompt_length_(prompt_length), seed_(seed), filler_(filler), certain_(certain) {}

std::vector<TokenPrediction> LookupPredictor::predict(std::span<const Token> sequence) const {
  std::vector<TokenPrediction> out(sequence.size());
  const auto masked = static_cast<std::uint64_t>(std::count(sequence.begin(), sequence.end(), kMaskToken));
  for (std::size_t i = prompt_length_; i < sequence.size(); ++i) {
    if (sequence[i] != kMaskToken) continue;
    const std::size_t p = i - prompt_length_;
    out[i].token = p < table_.size() ? table_[p] : filler_;
    if (certain_) {
      out[i].confidence = 1.0;
    } else {
      SplitMix64 rng(seed_ ^ (static_cast<std::uint64_t>(p) * 0x9e3779b97f4a7c15ULL) ^ (masked << 32));
      out[i].confidence = rng.unit();
    }
  }
  return out;
}

DecodeResult block_decode(const MaskPredictor& predictor, std::span<const Token> prompt, std::size_t block_size,
                          const GateConfig& gate, std::size_t max_blocks, Token eos) {
  if (block_size < 1) throw std::invalid_argument("block_decode: block size must be >= 1");
  validate(gate);
  DecodeResult out;
  std::vector<Token> seq(prompt.begin(), prompt.end());
  const std::size_t base = prompt.size();
  bool saw_eos = false;
  for (std::size_t block = 0; block < max_blocks && !saw_eos; ++block) {
    const std::size_t start = seq.size();
    seq.resize(start + block_size, kMaskToken);
    std::size_t iteration = 0;
    while (std::find(seq.begin() + static_cast<std::ptrdiff_t>(start), seq.end(), kMaskToken) != seq.end()) {
      if (iteration >= block_size) throw std::logic_error("block_decode: gate made no progress");
      const auto pred = predictor.predict(seq);
      if (pred.size() != seq.size()) throw std::runtime_error("block_decode: predictor returned wrong length");
      std::vector<std::size_t> masked;
      std::vector<double> conf;
      for (std::size_t i = start; i < seq.size(); ++i) {
        if (seq[i] != kMaskToken) continue;
        masked.push_back(i);
        conf.push_back(std::clamp(pred[i].confidence, 0.0, 1.0));
      }
      DecodeEvent ev{block, iteration, {}};
      for (std::size_t k : gate_unmask(conf, gate)) {
        const std::size_t pos = masked[k];
        if (pred[pos].token == kMaskToken) throw std::runtime_error("block_decode: predictor emitted the mask token");
        seq[pos] = pred[pos].token;
        ev.committed.push_back(pos - base);
      }
      std::sort(ev.committed.begin(), ev.committed.end());
      out.trace.push_back(std::move(ev));
      ++iteration;
    }
    out.iterations_per_block.push_back(iteration);
    saw_eos = std::find(seq.begin() + static_cast<std::ptrdiff_t>(start), seq.end(), eos) != seq.end();
  }
  auto response_begin = seq.begin() + static_cast<std::ptrdiff_t>(base);
  auto cut = std::find(response_begin, seq.end(), eos);
  out.tokens.assign(response_begin, cut);
  out.truncated = !saw_eos;
  return out;
}

}  // namespace ah
