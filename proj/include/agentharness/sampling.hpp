// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ah {

struct ManifestCategory {
  std::string name;
  std::vector<std::string> instances;  // file paths or synthetic ids
};

/// Category -> instances. JSON form:
///   {"cap": 50, "categories": [
///      {"name": "simple", "files": ["simple/0001.json", ...]},
///      {"name": "java", "count": 100, "pattern": "java_{index}"}]}
/// `{index}` expands to 0..count-1. Files resolve against `base_dir`.
struct SuiteManifest {
  std::vector<ManifestCategory> categories;
  std::size_t cap = 50;
  std::string base_dir;
};

SuiteManifest load_manifest(const std::string& path);

struct SampledInstance {
  std::string category;
  std::size_t index = 0;  // position within the category
  std::string instance;

  friend bool operator==(const SampledInstance&, const SampledInstance&) = default;
};

/// k distinct indices from [0, n), ascending. Partial Fisher-Yates driven by
/// SplitMix64(seed); k >= n returns every index.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

/// Per category: everything when count <= cap, otherwise a seeded uniform
/// sample of `cap` kept in manifest order. Category c draws from the stream
/// seed ^ fnv1a64(c), so adding a category never perturbs the others.
/// Empty categories are skipped with a warning.
std::vector<SampledInstance> sample_suite(const SuiteManifest& manifest, std::size_t cap, std::uint64_t seed,
                                          std::vector<std::string>* warnings = nullptr);

/// "category<TAB>index<TAB>instance" per line.
std::string render_sample(const std::vector<SampledInstance>& sample);

}  // namespace ah
