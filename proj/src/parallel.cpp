// SPDX-License-Identifier: Apache-2.0
#include "agentharness/parallel.hpp"

#include <stdexcept>

#include "agentharness/metrics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ah {

std::vector<std::int64_t> retry_loop_counts(const std::vector<std::vector<std::string>>& sequences, int threshold) {
  if (threshold < 2) throw std::invalid_argument("retry threshold must be >= 2");
  std::vector<std::int64_t> out(sequences.size(), 0);
  const auto n = static_cast<std::int64_t>(sequences.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        static_cast<std::int64_t>(detect_retry_loops(sequences[static_cast<std::size_t>(i)], threshold).size());
  return out;
}

std::vector<std::int64_t> retry_loop_counts_serial(const std::vector<std::vector<std::string>>& sequences,
                                                   int threshold) {
  std::vector<std::int64_t> out;
  out.reserve(sequences.size());
  for (const auto& s : sequences) out.push_back(static_cast<std::int64_t>(detect_retry_loops(s, threshold).size()));
  return out;
}

std::vector<std::size_t> gate_commit_counts(const std::vector<std::vector<double>>& confidences,
                                            const GateConfig& cfg) {
  validate(cfg);
  for (const auto& c : confidences)
    if (c.empty()) throw std::invalid_argument("gate_commit_counts: empty confidence vector");
  std::vector<std::size_t> out(confidences.size(), 0);
  const auto n = static_cast<std::int64_t>(confidences.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = gate_unmask(confidences[static_cast<std::size_t>(i)], cfg).size();
  return out;
}

std::vector<std::size_t> gate_commit_counts_serial(const std::vector<std::vector<double>>& confidences,
                                                   const GateConfig& cfg) {
  validate(cfg);
  std::vector<std::size_t> out;
  out.reserve(confidences.size());
  for (const auto& c : confidences) out.push_back(gate_unmask(c, cfg).size());
  return out;
}

int kernel_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace ah
