// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "agentharness/denoise.hpp"

namespace ah {

// Batch kernels over independent items. Each has an OpenMP version and a
// serial reference; results are written by index, so both agree exactly.

/// Number of retry loops per action sequence.
std::vector<std::int64_t> retry_loop_counts(const std::vector<std::vector<std::string>>& sequences, int threshold);
std::vector<std::int64_t> retry_loop_counts_serial(const std::vector<std::vector<std::string>>& sequences,
                                                   int threshold);

/// Size of the gate's commit set per confidence vector.
std::vector<std::size_t> gate_commit_counts(const std::vector<std::vector<double>>& confidences,
                                            const GateConfig& cfg);
std::vector<std::size_t> gate_commit_counts_serial(const std::vector<std::vector<double>>& confidences,
                                                   const GateConfig& cfg);

/// Worker threads OpenMP would use (1 without OpenMP).
int kernel_threads() noexcept;

}  // namespace ah
