// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <set>

#include "agentharness/config.hpp"
#include "agentharness/json_io.hpp"
#include "agentharness/sampling.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ah;

namespace {

RunConfig parse_config(const char* text) { return config_from_json(Json::parse(text), "cfg", "/base"); }

}  // namespace

TEST_CASE("config defaults and the implicit ablation cell") {
  auto c = parse_config(R"({"suites": ["a.json"], "backends": {"agent": {"type": "from_task"}}})");
  CHECK(c.seed == 42);
  CHECK(c.workers == 1);
  CHECK(c.k_mem == 5);
  CHECK(c.retain_last == 2);
  CHECK(c.k_earlyexit == 5);
  CHECK(c.retry_threshold == 3);
  REQUIRE(c.ablation.size() == 1);
  CHECK(c.ablation[0] == AblationCell{"default", true, true, true, true});
  CHECK(c.resolve("a.json") == "/base/a.json");
  CHECK(c.resolve("/abs/a.json") == "/abs/a.json");
}

TEST_CASE("explicit ablation cells default modules off") {
  auto c = parse_config(R"({"suites": ["a.json"], "backends": {"agent": {"type": "from_task"}},
                            "ablation": [{"label": "base"}, {"label": "mem", "memory": true}]})");
  CHECK(c.ablation[0] == AblationCell{"base", false, false, false, false});
  CHECK(c.ablation[1].memory);
}

TEST_CASE("config rejects mistakes with a path") {
  auto rejects = [](const char* text, const char* fragment) {
    CAPTURE(text);
    auto j = Json::parse(text);
    if (!j.contains("suites")) j["suites"] = Json::array({"a.json"});
    try {
      config_from_json(j, "cfg", "/base");
      FAIL("accepted");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  rejects(R"({"backends": {"agent": {"type": "from_task"}}, "workerz": 2})", "workerz");
  rejects(R"({"backends": {}})", "agent");
  rejects(R"({"backends": {"agent": {"type": "quantum"}}})", "type");
  rejects(R"({"backends": {"agent": {"type": "http"}}})", "model");
  rejects(R"({"backends": {"agent": {"type": "from_task"}, "selector": {"type": "rule_editor"}}})", "selector");
  rejects(R"({"backends": {"agent": {"type": "from_task"}}, "workers": 0})", "workers");
  rejects(R"({"backends": {"agent": {"type": "from_task"}}, "retry_threshold": 1})", "retry_threshold");
  rejects(R"({"backends": {"agent": {"type": "from_task"}}, "early_exit_mode": "later"})", "early_exit_mode");
  rejects(R"({"backends": {"agent": {"type": "from_task"}}, "gate": {"mode": "factor", "gamma": -1}})", "gate");
  rejects(R"({"backends": {"agent": {"type": "from_task"}}, "ablation": [{"label": "a"}, {"label": "a"}]})",
          "label");
  rejects(R"({"backends": {"agent": {"type": "scripted", "script": {"rules": [{"regex": "(", "response": "x"}]}}}})",
          "regex");
}

TEST_CASE("every documented config key is accepted") {
  const auto& keys = config_keys();
  std::set<std::string> top;
  for (const auto& [k, doc] : keys) {
    CHECK_FALSE(doc.empty());
    if (k.find('.') == std::string::npos) top.insert(k);
  }
  for (const char* k : {"suites", "seed", "workers", "backends", "ablation", "gate", "k_mem", "manifest"})
    CHECK(top.contains(k));
}

TEST_CASE("bundled configs load") {
  for (const char* f : {"golden.json", "ablation_2x2.json", "memory_cadence.json", "early_exit_audit.json",
                        "sampled_examples.json", "live_example.json"}) {
    CAPTURE(f);
    CHECK_NOTHROW(load_config(test::data_path(std::string("configs/") + f)));
  }
}

TEST_CASE("sample_indices is a seeded subset") {
  auto a = sample_indices(100, 10, 7);
  CHECK(a.size() == 10);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(std::adjacent_find(a.begin(), a.end()) == a.end());
  CHECK(a.back() < 100);
  CHECK(sample_indices(100, 10, 7) == a);
  CHECK(sample_indices(100, 10, 8) != a);
  CHECK(sample_indices(5, 10, 7) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(sample_indices(0, 3, 7).empty());
}

TEST_CASE("sampling is uniform enough") {
  std::vector<int> hits(20, 0);
  for (std::uint64_t s = 0; s < 4000; ++s)
    for (auto i : sample_indices(20, 5, s)) ++hits[i];
  for (int h : hits) CHECK(h == doctest::Approx(1000).epsilon(0.15));
}

TEST_CASE("category streams are independent") {
  SuiteManifest m;
  m.categories = {{"alpha", {}}, {"beta", {}}};
  for (int i = 0; i < 80; ++i) {
    m.categories[0].instances.push_back("a" + std::to_string(i));
    m.categories[1].instances.push_back("b" + std::to_string(i));
  }
  auto full = sample_suite(m, 10, 42);
  SuiteManifest only_beta;
  only_beta.categories = {m.categories[1]};
  auto beta = sample_suite(only_beta, 10, 42);
  std::vector<SampledInstance> beta_in_full;
  std::copy_if(full.begin(), full.end(), std::back_inserter(beta_in_full),
               [](const SampledInstance& s) { return s.category == "beta"; });
  CHECK(beta_in_full == beta);

  std::vector<std::string> warnings;
  m.categories.push_back({"empty", {}});
  sample_suite(m, 10, 42, &warnings);
  CHECK(warnings.size() == 1);
  CHECK(render_sample(beta).starts_with("beta\t"));
}

TEST_CASE("manifest loading") {
  auto m = load_manifest(test::data_path("manifests/bfcl_v3_counts.json"));
  CHECK(m.categories.size() == 17);
  CHECK(m.cap == 50);
  CHECK(m.categories[0].instances.at(3) == "simple_3");
  auto files = load_manifest(test::data_path("manifests/examples.json"));
  CHECK(files.categories.at(1).instances.at(0) == "../suites/toolcall/instances/java.json");
}
