// SPDX-License-Identifier: Apache-2.0
#include "agentharness/report.hpp"

#include <cstdio>
#include <fstream>

namespace ah {

LoadedRecords parse_records(std::string_view jsonl) {
  LoadedRecords out;
  std::size_t line_no = 0, pos = 0;
  while (pos < jsonl.size()) {
    auto eol = jsonl.find('\n', pos);
    if (eol == std::string_view::npos) eol = jsonl.size();
    const auto line = jsonl.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto skip = [&](const std::string& why) {
      ++out.skipped_lines;
      out.skip_reasons.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    const auto doc = Json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      skip("not a JSON object");
      continue;
    }
    try {
      auto rec = record_from_json(doc);
      const auto issues = validate_record(rec);
      if (!issues.empty()) {
        skip(issues.front());
        continue;
      }
      out.records.push_back(std::move(rec));
    } catch (const std::exception& e) {
      skip(e.what());
    }
  }
  return out;
}

LoadedRecords load_records(const std::string& path) { return parse_records(read_text_file(path)); }

MetricsReport build_report(const LoadedRecords& loaded, int retry_threshold) {
  auto report = aggregate(loaded.records, retry_threshold);
  report.skipped_lines = loaded.skipped_lines;
  return report;
}

Json to_json(const SuiteMetrics& m) {
  Json failures = Json::object();
  for (const auto& [k, v] : m.failures.by_category) failures[k] = v;
  Json coarse = Json::object();
  for (const auto& [k, v] : m.failures.coarse) coarse[k] = v;
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"suite", m.suite},
              {"episodes", m.episodes},
              {"successes", m.successes},
              {"success_rate", m.success_rate},
              {"progress_rate", m.progress_rate},
              {"retry_loops", m.retry_loops},
              {"retry_loops_per_episode", m.retry_loops_per_episode},
              {"episodes_with_retry_loops", m.episodes_with_retry_loops},
              {"failure_histogram", failures},
              {"failure_coarse", coarse},
              {"generated_tokens", m.generated_tokens},
              {"wall_seconds", m.wall_seconds},
              {"tokens_per_second", opt(m.tokens_per_second)},
              {"backend_errors", m.backend_errors},
              {"audited_exits", m.audited_exits},
              {"redundancy_reduction", opt(m.redundancy_reduction)},
              {"progress_degradation", opt(m.progress_degradation)}};
}

Json to_json(const MetricsReport& r) {
  Json groups = Json::array();
  for (const auto& g : r.groups) {
    Json suites = Json::array();
    for (const auto& s : g.suites) suites.push_back(to_json(s));
    groups.push_back(Json{{"group", g.group}, {"suites", suites}, {"overall", to_json(g.overall)}});
  }
  return Json{{"retry_threshold", r.retry_threshold}, {"skipped_lines", r.skipped_lines}, {"groups", groups}};
}

std::string render_report_json(const MetricsReport& r) { return to_json(r).dump(2) + "\n"; }

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string pad_right(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string pad_left(std::string s, std::size_t w) {
  if (s.size() < w) s.insert(0, w - s.size(), ' ');
  return s;
}

std::string row(const SuiteMetrics& m, std::size_t name_w) {
  return pad_right(m.suite, name_w) + pad_left(std::to_string(m.episodes), 9) +
         pad_left(fixed(100.0 * m.success_rate, 1), 10) + pad_left(fixed(100.0 * m.progress_rate, 1), 10) +
         pad_left(std::to_string(m.retry_loops), 12) + pad_left(fixed(m.retry_loops_per_episode, 2), 10) +
         pad_left(m.tokens_per_second ? fixed(*m.tokens_per_second, 1) : "-", 10) + "\n";
}

}  // namespace

std::string render_report_text(const MetricsReport& r) {
  std::string out;
  std::size_t name_w = 5;
  for (const auto& g : r.groups)
    for (const auto& s : g.suites) name_w = std::max(name_w, s.suite.size() + 2);
  const std::string header = pad_right("Suite", name_w) + pad_left("Episodes", 9) + pad_left("Success", 10) +
                             pad_left("Progress", 10) + pad_left("RetryLoops", 12) + pad_left("Loops/ep", 10) +
                             pad_left("Tok/s", 10) + "\n";
  for (const auto& g : r.groups) {
    out += "== " + g.group + " ==\n";
    out += header;
    out += std::string(header.size() - 1, '-') + "\n";
    for (const auto& s : g.suites) out += row(s, name_w);
    out += row(g.overall, name_w);
    const auto& o = g.overall;
    if (o.failures.total() > 0) {
      out += "Failures:";
      for (const auto& [k, v] : o.failures.by_category) out += " " + k + "=" + std::to_string(v);
      out += " |";
      for (const auto& [k, v] : o.failures.coarse) out += " " + k + "=" + std::to_string(v);
      out += "\n";
    }
    if (o.audited_exits > 0) {
      out += "Early exit: " + std::to_string(o.audited_exits) + " audited, redundancy reduction " +
             fixed(100.0 * *o.redundancy_reduction, 1) + "%, progress degradation " +
             fixed(100.0 * *o.progress_degradation, 1) + "%\n";
    }
    if (o.backend_errors > 0) out += "Backend errors: " + std::to_string(o.backend_errors) + "\n";
    out += "\n";
  }
  out += "Retry loop threshold: " + std::to_string(r.retry_threshold) + "\n";
  if (r.skipped_lines > 0)
    out += std::to_string(r.skipped_lines) + (r.skipped_lines == 1 ? " line" : " lines") + " skipped\n";
  return out;
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace ah
