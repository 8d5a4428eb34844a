// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ah {

/// Argument value domain for tool calls and mock-world state.
///
/// Maps keep insertion order so a parsed call renders back in the order it
/// was written, but equality treats maps as unordered. Lists compare
/// element-wise. Integers and floats are distinct kinds: `2000` != `2000.0`.
class Value {
 public:
  using List = std::vector<Value>;
  using Map = std::vector<std::pair<std::string, Value>>;

  enum class Kind { null, boolean, integer, floating, string, list, map };

  Value() = default;
  Value(std::nullptr_t) {}
  Value(bool b) : data_(b) {}
  template <std::integral T>
    requires(!std::same_as<T, bool> && !std::same_as<T, char>)
  Value(T v) : data_(static_cast<std::int64_t>(v)) {}
  template <std::floating_point T>
  Value(T v) : data_(static_cast<double>(v)) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(std::string_view s) : data_(std::string(s)) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(List l) : data_(std::move(l)) {}
  Value(Map m) : data_(std::move(m)) {}

  static Value list(List l = {}) { return Value(std::move(l)); }
  static Value map(Map m = {}) { return Value(std::move(m)); }

  Kind kind() const noexcept { return static_cast<Kind>(data_.index()); }
  bool is_null() const noexcept { return kind() == Kind::null; }
  bool is_bool() const noexcept { return kind() == Kind::boolean; }
  bool is_int() const noexcept { return kind() == Kind::integer; }
  bool is_float() const noexcept { return kind() == Kind::floating; }
  bool is_number() const noexcept { return is_int() || is_float(); }
  bool is_string() const noexcept { return kind() == Kind::string; }
  bool is_list() const noexcept { return kind() == Kind::list; }
  bool is_map() const noexcept { return kind() == Kind::map; }

  // Accessors throw std::bad_variant_access on kind mismatch.
  bool as_bool() const { return std::get<bool>(data_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  /// Integers widen to double.
  double as_number() const;
  const std::string& as_string() const { return std::get<std::string>(data_); }
  const List& as_list() const { return std::get<List>(data_); }
  List& as_list() { return std::get<List>(data_); }
  const Map& as_map() const { return std::get<Map>(data_); }
  Map& as_map() { return std::get<Map>(data_); }

  const Value* find(std::string_view key) const;
  Value* find(std::string_view key);
  /// Inserts or replaces `key`; the value must be a map.
  void set(std::string_view key, Value v);

  friend bool operator==(const Value& a, const Value& b);

 private:
  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, List, Map> data_;
};

std::string_view kind_name(Value::Kind kind) noexcept;

/// Unordered comparison of two maps (keys assumed unique).
bool maps_equal(const Value::Map& a, const Value::Map& b);

}  // namespace ah
