// SPDX-License-Identifier: Apache-2.0
#include "agentharness/value.hpp"

#include <algorithm>
#include <stdexcept>

namespace ah {

double Value::as_number() const {
  if (is_int()) return static_cast<double>(as_int());
  return std::get<double>(data_);
}

const Value* Value::find(std::string_view key) const {
  if (!is_map()) return nullptr;
  for (const auto& [k, v] : as_map())
    if (k == key) return &v;
  return nullptr;
}

Value* Value::find(std::string_view key) {
  if (!is_map()) return nullptr;
  for (auto& [k, v] : as_map())
    if (k == key) return &v;
  return nullptr;
}

void Value::set(std::string_view key, Value v) {
  if (!is_map()) throw std::logic_error("Value::set on a non-map value");
  if (auto* slot = find(key)) {
    *slot = std::move(v);
    return;
  }
  as_map().emplace_back(std::string(key), std::move(v));
}

bool maps_equal(const Value::Map& a, const Value::Map& b) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](const auto& entry) {
    auto it = std::find_if(b.begin(), b.end(),
                           [&](const auto& other) { return other.first == entry.first; });
    return it != b.end() && it->second == entry.second;
  });
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return false;
  if (a.is_map()) return maps_equal(a.as_map(), b.as_map());
  return a.data_ == b.data_;
}

std::string_view kind_name(Value::Kind kind) noexcept {
  switch (kind) {
    case Value::Kind::null: return "null";
    case Value::Kind::boolean: return "boolean";
    case Value::Kind::integer: return "integer";
    case Value::Kind::floating: return "float";
    case Value::Kind::string: return "string";
    case Value::Kind::list: return "list";
    case Value::Kind::map: return "map";
  }
  return "unknown";
}

}  // namespace ah
