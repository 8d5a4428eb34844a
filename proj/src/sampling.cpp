// SPDX-License-Identifier: Apache-2.0
#include "agentharness/sampling.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <set>

#include "agentharness/json_io.hpp"
#include "agentharness/prng.hpp"

namespace ah {

SuiteManifest load_manifest(const std::string& path) {
  const auto doc = read_json_file(path);
  if (!doc.is_object()) throw FormatError(path, "expected a manifest object");
  reject_unknown_keys(doc, {"cap", "categories"}, path);
  SuiteManifest m;
  m.base_dir = std::filesystem::path(path).parent_path().string();
  const auto cap = get_int(doc, "cap", path, 50);
  if (cap < 1) throw FormatError(join_path(path, "cap"), "must be >= 1");
  m.cap = static_cast<std::size_t>(cap);
  const auto& cats = require(doc, "categories", path);
  if (!cats.is_array() || cats.empty()) throw FormatError(join_path(path, "categories"), "expected a nonempty array");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < cats.size(); ++i) {
    const auto p = index_path(join_path(path, "categories"), i);
    if (!cats[i].is_object()) throw FormatError(p, "expected a category object");
    reject_unknown_keys(cats[i], {"name", "files", "count", "pattern"}, p);
    ManifestCategory c;
    c.name = require_string(cats[i], "name", p);
    if (!seen.insert(c.name).second) throw FormatError(p, "duplicate category '" + c.name + "'");
    if (cats[i].contains("files")) {
      if (cats[i].contains("count")) throw FormatError(p, "give either files or count, not both");
      c.instances = get_strings(cats[i], "files", p);
    } else {
      const auto count = get_int(cats[i], "count", p, -1);
      if (count < 0) throw FormatError(join_path(p, "count"), "required non-negative integer");
      const auto pattern = get_string(cats[i], "pattern", p, c.name + "_{index}");
      const auto slot = pattern.find("{index}");
      if (slot == std::string::npos) throw FormatError(join_path(p, "pattern"), "must contain {index}");
      for (std::int64_t k = 0; k < count; ++k) {
        auto id = pattern;
        id.replace(slot, 7, std::to_string(k));
        c.instances.push_back(std::move(id));
      }
    }
    m.categories.push_back(std::move(c));
  }
  return m;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k >= n) return idx;
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<SampledInstance> sample_suite(const SuiteManifest& manifest, std::size_t cap, std::uint64_t seed,
                                          std::vector<std::string>* warnings) {
  if (manifest.categories.empty()) throw std::invalid_argument("sample_suite: manifest has no categories");
  if (cap < 1) throw std::invalid_argument("sample_suite: cap must be >= 1");
  std::vector<SampledInstance> out;
  for (const auto& c : manifest.categories) {
    if (c.instances.empty()) {
      if (warnings) warnings->push_back("category '" + c.name + "' has no instances");
      continue;
    }
    for (auto i : sample_indices(c.instances.size(), cap, seed ^ fnv1a64(c.name)))
      out.push_back({c.name, i, c.instances[i]});
  }
  return out;
}

std::string render_sample(const std::vector<SampledInstance>& sample) {
  std::string out;
  for (const auto& s : sample) out += s.category + "\t" + std::to_string(s.index) + "\t" + s.instance + "\n";
  return out;
}

}  // namespace ah
