// SPDX-License-Identifier: Apache-2.0
// agent_harness: run | report | validate | sample | denoise-demo

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "agentharness/config.hpp"
#include "agentharness/denoise.hpp"
#include "agentharness/report.hpp"
#include "agentharness/runner.hpp"
#include "agentharness/sampling.hpp"
#include "agentharness/suite_io.hpp"

namespace {

int cmd_run(const std::string& config_path, int workers) {
  auto config = ah::load_config(config_path);
  if (workers > 0) config.workers = workers;
  const auto outcome = ah::run(config);
  for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << ah::read_text_file(outcome.report_text_path);
  std::cout << "episodes: " << outcome.episodes << "\nrecords: " << outcome.jsonl_path
            << "\nreport: " << outcome.report_json_path << "\n";
  if (outcome.backend_errors > 0) {
    std::cerr << outcome.backend_errors << " episode(s) ended with a backend error\n";
    return 2;
  }
  return 0;
}

int cmd_report(const std::string& records, int threshold, const std::string& json_out, const std::string& text_out) {
  const auto loaded = ah::load_records(records);
  for (const auto& why : loaded.skip_reasons) std::cerr << "skipped " << why << "\n";
  const auto report = ah::build_report(loaded, threshold);
  const auto text = ah::render_report_text(report);
  if (!json_out.empty()) ah::write_text_file(json_out, ah::render_report_json(report));
  if (!text_out.empty()) ah::write_text_file(text_out, text);
  std::cout << text;
  return 0;
}

int cmd_validate(const std::vector<std::string>& files) {
  int bad = 0;
  for (const auto& file : files) {
    std::vector<std::string> issues;
    try {
      const auto doc = ah::read_json_file(file);
      if (doc.is_object() && doc.contains("kind")) {
        issues = ah::validate_suite_file(ah::load_suite_file(file));
      } else {
        issues = ah::validate_suite(ah::tool_suite_from_json(doc, file));
      }
    } catch (const std::exception& e) {
      issues.push_back(e.what());
    }
    if (issues.empty()) {
      std::cout << file << ": ok\n";
    } else {
      ++bad;
      for (const auto& i : issues) std::cout << file << ": " << i << "\n";
    }
  }
  return bad == 0 ? 0 : 1;
}

int cmd_sample(const std::string& manifest_path, std::optional<std::size_t> cap, std::uint64_t seed) {
  const auto manifest = ah::load_manifest(manifest_path);
  std::vector<std::string> warnings;
  const auto sample = ah::sample_suite(manifest, cap.value_or(manifest.cap), seed, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  std::cout << ah::render_sample(sample);
  std::cerr << sample.size() << " instances\n";
  return 0;
}

int cmd_denoise(const std::string& mode, double tau, double gamma, std::size_t block, std::size_t max_blocks,
                std::size_t length, std::uint64_t seed) {
  ah::GateConfig gate;
  const auto m = ah::parse_gate_mode(mode);
  if (!m) throw std::invalid_argument("--mode must be threshold or factor");
  gate.mode = *m;
  gate.tau = tau;
  gate.gamma = gamma;
  // Tokens 1..length then EOS (0); the prompt is a single token.
  constexpr ah::Token kEos = 0;
  std::vector<ah::Token> table;
  for (std::size_t i = 0; i < length; ++i) table.push_back(static_cast<ah::Token>(i + 1));
  table.push_back(kEos);
  const std::vector<ah::Token> prompt{1000};
  const ah::LookupPredictor predictor(table, prompt.size(), seed, kEos);
  const auto result = ah::block_decode(predictor, prompt, block, gate, max_blocks, kEos);
  std::cout << "block,iteration,position\n";
  for (const auto& ev : result.trace)
    for (auto p : ev.committed) std::cout << ev.block << "," << ev.iteration << "," << p << "\n";
  std::cerr << "tokens=" << result.tokens.size() << " iterations=" << result.trace.size()
            << " truncated=" << (result.truncated ? "true" : "false") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluation harness for ReAct and tool-calling agents"};
  app.require_subcommand(1);

  std::string config_path;
  int workers = 0;
  auto* run = app.add_subcommand("run", "Run every episode in a config; exit 2 if any backend failed");
  run->add_option("config", config_path, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--workers", workers, "Override the config's worker count");

  std::string records, json_out, text_out;
  int threshold = 3;
  auto* report = app.add_subcommand("report", "Summarize an episodes.jsonl file");
  report->add_option("records", records, "JSONL episode records")->required()->check(CLI::ExistingFile);
  report->add_option("--retry-threshold", threshold, "Minimum retry loop length")->check(CLI::Range(2, 1000000));
  report->add_option("--json", json_out, "Also write the JSON report here");
  report->add_option("--text", text_out, "Also write the text report here");

  std::vector<std::string> suite_files;
  auto* validate = app.add_subcommand("validate", "Check suite or tool instance files");
  validate->add_option("suites", suite_files, "Suite files")->required()->check(CLI::ExistingFile);

  std::string manifest;
  std::optional<std::size_t> cap;
  std::uint64_t seed = 42;
  auto* sample = app.add_subcommand("sample", "Print the seeded per-category sample of a manifest");
  sample->add_option("manifest", manifest, "Manifest JSON")->required()->check(CLI::ExistingFile);
  sample->add_option("--cap", cap, "Instances per category (default: the manifest's cap)")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "Sampling seed");

  std::string mode = "threshold";
  double tau = 0.9, gamma = 0.5;
  std::size_t block = 8, max_blocks = 4, length = 20;
  std::uint64_t demo_seed = 42;
  auto* demo = app.add_subcommand("denoise-demo", "Block decoding commit trace as CSV");
  demo->add_option("--mode", mode, "threshold | factor");
  demo->add_option("--tau", tau, "Threshold gate confidence");
  demo->add_option("--gamma", gamma, "Factor gate bound");
  demo->add_option("--block-size", block, "Tokens per block")->check(CLI::PositiveNumber);
  demo->add_option("--max-blocks", max_blocks, "Block cap");
  demo->add_option("--length", length, "Tokens before EOS in the lookup table");
  demo->add_option("--seed", demo_seed, "Predictor seed");

  auto* keys = app.add_subcommand("keys", "List every config key with its meaning");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_path, workers);
    if (*report) return cmd_report(records, threshold, json_out, text_out);
    if (*validate) return cmd_validate(suite_files);
    if (*sample) return cmd_sample(manifest, cap, seed);
    if (*demo) return cmd_denoise(mode, tau, gamma, block, max_blocks, length, demo_seed);
    if (*keys) {
      for (const auto& [key, doc] : ah::config_keys()) std::cout << key << "\t" << doc << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
