// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ah {

// Commit schedules for masked-diffusion decoding. Schedulers consume the
// per-position confidence c_i = max_v p(v) and never see a model, so they
// are pure and tie-break by lowest position everywhere.

enum class GateMode { threshold, factor };

std::string_view to_string(GateMode m) noexcept;
std::optional<GateMode> parse_gate_mode(std::string_view s) noexcept;

struct GateConfig {
  GateMode mode = GateMode::threshold;
  double tau = 0.9;
  double gamma = 0.5;
};

/// Throws std::invalid_argument unless 0 < tau <= 1 and gamma > 0.
void validate(const GateConfig& cfg);

/// {i : c_i >= tau}, or the single argmax when that set is empty.
/// Positions are returned ascending.
std::vector<std::size_t> threshold_unmask(std::span<const double> confidences, double tau);

/// Top-K positions by confidence for the largest K with
/// (K + 1) * (1 - c_(K)) < gamma, c_(1) >= c_(2) >= ... ; the single argmax
/// when no K >= 1 qualifies. Returned in rank order.
std::vector<std::size_t> factor_unmask(std::span<const double> confidences, double gamma);

/// Dispatches on cfg.mode. Never returns an empty set for nonempty input.
std::vector<std::size_t> gate_unmask(std::span<const double> confidences, const GateConfig& cfg);

/// The r least confident committed positions (ties: lowest position first).
/// Throws std::invalid_argument when r exceeds the map size.
std::vector<std::size_t> low_confidence_remask(const std::map<std::size_t, double>& committed, std::size_t r);

/// Commit counts per reverse step: the first L mod T steps take ceil(L/T),
/// the rest floor(L/T). Requires 1 <= T <= L.
std::vector<std::size_t> plan_reverse_schedule(std::size_t length, std::size_t steps);

// ---- block decoding --------------------------------------------------------

using Token = std::int32_t;
inline constexpr Token kMaskToken = -1;

struct TokenPrediction {
  Token token = 0;
  double confidence = 0.0;
};

/// Predicts every masked position of `sequence` (prompt followed by the
/// response so far). The result is indexed like `sequence`; entries at
/// unmasked positions are ignored.
class MaskPredictor {
 public:
  virtual ~MaskPredictor() = default;
  virtual std::vector<TokenPrediction> predict(std::span<const Token> sequence) const = 0;
};

/// Deterministic test predictor. Response position p (0-based, after the
/// prompt) decodes to table[p], or `filler` past the table. Confidence is a
/// seeded hash of (p, masked count), or 1.0 when `certain` is set.
class LookupPredictor final : public MaskPredictor {
 public:
  LookupPredictor(std::vector<Token> table, std::size_t prompt_length, std::uint64_t seed, Token filler = 0,
                  bool certain = false);
  std::vector<TokenPrediction> predict(std::span<const Token> sequence) const override;

 private:
  std::vector<Token> table_;
  std::size_t prompt_length_;
  std::uint64_t seed_;
  Token filler_;
  bool certain_;
};

struct DecodeEvent {
  std::size_t block = 0;      // 0-based
  std::size_t iteration = 0;  // 0-based within the block
  std::vector<std::size_t> committed;  // response positions
};

struct DecodeResult {
  std::vector<Token> tokens;  // response, cut before the first EOS
  bool truncated = false;     // max_blocks reached without EOS
  std::vector<DecodeEvent> trace;
  std::vector<std::size_t> iterations_per_block;
};

/// Appends blocks of `block_size` masks and commits gate-selected positions
/// until each block is full; stops after the block holding the first EOS or
/// after max_blocks. The gate is applied per block.
DecodeResult block_decode(const MaskPredictor& predictor, std::span<const Token> prompt, std::size_t block_size,
                          const GateConfig& gate, std::size_t max_blocks, Token eos);

}  // namespace ah
