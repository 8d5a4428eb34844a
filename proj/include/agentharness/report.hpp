// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "agentharness/json_io.hpp"
#include "agentharness/metrics.hpp"

namespace ah {

struct LoadedRecords {
  std::vector<EpisodeRecord> records;
  std::int64_t skipped_lines = 0;   // unparseable or structurally invalid
  std::vector<std::string> skip_reasons;  // "line N: ..."
};

/// Blank lines are ignored; bad lines are counted, never fatal, so partial
/// files from an interrupted run still report.
LoadedRecords parse_records(std::string_view jsonl);
LoadedRecords load_records(const std::string& path);

MetricsReport build_report(const LoadedRecords& loaded, int retry_threshold);

Json to_json(const SuiteMetrics& m);
Json to_json(const MetricsReport& r);

/// Pretty JSON with a trailing newline.
std::string render_report_json(const MetricsReport& r);

/// Fixed-width table per group: Success/Progress (%) per suite plus an Avg
/// row, then retry loops, throughput, failure histogram and early-exit lines.
std::string render_report_text(const MetricsReport& r);

void write_text_file(const std::string& path, std::string_view content);

}  // namespace ah
