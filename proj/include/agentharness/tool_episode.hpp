// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "agentharness/core.hpp"
#include "agentharness/policy.hpp"
#include "agentharness/tool_schema.hpp"

namespace ah {

/// Null selector/editor handles disable the module.
struct ToolWiring {
  BackendHandle agent;
  BackendHandle selector;
  BackendHandle editor;
};

struct ToolEpisodeOptions {
  int max_batches_per_turn = 8;
  GenParams agent_params;
  GenParams module_params;
  std::string suite;
  std::string group;
};

/// Whether a category is judged on world state across turns.
bool is_multi_turn_category(std::string_view category) noexcept;

/// Multi-turn tool-calling loop. Within a turn the agent may emit up to
/// max_batches_per_turn call batches; the turn ends on `[]`, on output that
/// yields no calls, or at the cap. Results of each batch are fed back as a
/// user message. Relevance suites are judged on the first output only.
///
/// Turn judging:
///   multi_turn_*    judge_turn against the golden world threaded across turns
///   relevance       classify_relevance
///   everything else executed calls equal the golden calls as a multiset and
///                   every verdict is OK
EpisodeRecord run_tool_episode(const ToolSuite& suite, const ToolWiring& wiring,
                               const ToolEpisodeOptions& options, std::uint64_t seed);

}  // namespace ah
