// SPDX-License-Identifier: Apache-2.0
#include "agentharness/mock_world.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>

#include "agentharness/toolcall.hpp"
#include "json.hpp"

namespace ah {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kLitersPerGallon = 3.785411784;
constexpr double kKmPerLiter = 12.5;
const std::array<std::string_view, 4> kDoors{"driver", "passenger", "rear_left", "rear_right"};

ToolOutcome ok(const Json& payload) { return {true, payload.dump()}; }
ToolOutcome fail(std::string message) {
  Json j;
  j["error"] = std::move(message);
  return {false, j.dump()};
}

std::optional<double> number_arg(const ToolCall& call, std::string_view name) {
  const auto* v = call.argument(name);
  if (v == nullptr || !v->is_number()) return std::nullopt;
  return v->as_number();
}

std::optional<std::string> string_arg(const ToolCall& call, std::string_view name) {
  const auto* v = call.argument(name);
  if (v == nullptr || !v->is_string()) return std::nullopt;
  return v->as_string();
}

Value family_state(const MockWorld& world, std::string_view family) {
  // Partial initial worlds override only the keys they name.
  Value state = default_family_state(family);
  const auto* existing = world.find(family);
  if (existing == nullptr) return state;
  if (!existing->is_map() || !state.is_map()) return *existing;
  for (const auto& [key, v] : existing->as_map()) state.set(key, v);
  return state;
}

void store_family(MockWorld& world, std::string_view family, Value state) {
  world.set(family, std::move(state));
}

// ---- vehicle ---------------------------------------------------------------

ToolOutcome fill_fuel_tank(const ToolCall& call, MockWorld& world) {
  auto amount = number_arg(call, "fuelAmount");
  if (!amount) return fail("fuelAmount must be a number");
  if (*amount < 0) return fail("Fuel amount cannot be negative.");
  Value car = family_state(world, "vehicle");
  const double level = car.find("fuelLevel")->as_number();
  const double capacity = car.find("fuelCapacity")->as_number();
  const double next = level + *amount;
  if (next > capacity) return fail("Cannot fill gas above the tank capacity.");
  car.set("fuelLevel", next);
  store_family(world, "vehicle", std::move(car));
  return ok(Json{{"fuelLevel", next}});
}

ToolOutcome lock_doors(const ToolCall& call, MockWorld& world) {
  const auto* unlock = call.argument("unlock");
  const auto* doors = call.argument("door");
  if (unlock == nullptr || !unlock->is_bool()) return fail("unlock must be a boolean");
  if (doors == nullptr || !doors->is_list()) return fail("door must be a list");
  Value car = family_state(world, "vehicle");
  Value* state = car.find("doors");
  if (state == nullptr || !state->is_map()) return fail("vehicle has no door state");
  for (const auto& d : doors->as_list()) {
    if (!d.is_string() || std::find(kDoors.begin(), kDoors.end(), d.as_string()) == kDoors.end())
      return fail("unknown door " + render_value(d));
    state->set(d.as_string(), unlock->as_bool() ? "unlocked" : "locked");
  }
  std::int64_t remaining = 0;
  for (const auto& [name, s] : state->as_map())
    if (s.as_string() == "unlocked") ++remaining;
  store_family(world, "vehicle", std::move(car));
  return ok(Json{{"lockStatus", unlock->as_bool() ? "unlocked" : "locked"},
                 {"remainingUnlockedDoors", remaining}});
}

ToolOutcome activate_parking_brake(const ToolCall& call, MockWorld& world) {
  auto mode = string_arg(call, "mode");
  if (!mode || (*mode != "engage" && *mode != "release")) return fail("mode must be 'engage' or 'release'");
  Value car = family_state(world, "vehicle");
  const std::string status = *mode == "engage" ? "engaged" : "released";
  car.set("parkingBrake", status);
  store_family(world, "vehicle", std::move(car));
  return ok(Json{{"brakeStatus", status}});
}

ToolOutcome set_headlights(const ToolCall& call, MockWorld& world) {
  auto mode = string_arg(call, "mode");
  if (!mode || (*mode != "on" && *mode != "off" && *mode != "auto"))
    return fail("mode must be 'on', 'off' or 'auto'");
  Value car = family_state(world, "vehicle");
  car.set("headlights", *mode);
  store_family(world, "vehicle", std::move(car));
  return ok(Json{{"headlightStatus", *mode}});
}

ToolOutcome gallon_to_liter(const ToolCall& call, MockWorld&) {
  auto g = number_arg(call, "gallon");
  if (!g) return fail("gallon must be a number");
  return ok(Json{{"liter", *g * kLitersPerGallon}});
}

ToolOutcome liter_to_gallon(const ToolCall& call, MockWorld&) {
  auto l = number_arg(call, "liter");
  if (!l) return fail("liter must be a number");
  return ok(Json{{"gallon", *l / kLitersPerGallon}});
}

ToolOutcome drive_feasibility(const ToolCall& call, MockWorld& world) {
  auto distance = number_arg(call, "distance");
  if (!distance) return fail("distance must be a number");
  Value car = family_state(world, "vehicle");
  const double range = car.find("fuelLevel")->as_number() * kKmPerLiter;
  return ok(Json{{"canDrive", *distance <= range}});
}

// ---- trading ---------------------------------------------------------------

Json watchlist_json(const Value& trading) {
  Json list = Json::array();
  for (const auto& s : trading.find("watchlist")->as_list()) list.push_back(s.as_string());
  return list;
}

ToolOutcome add_to_watchlist(const ToolCall& call, MockWorld& world) {
  auto stock = string_arg(call, "stock");
  if (!stock || stock->empty()) return fail("stock must be a non-empty string");
  Value trading = family_state(world, "trading");
  auto& list = trading.find("watchlist")->as_list();
  if (std::find(list.begin(), list.end(), Value(*stock)) == list.end()) list.emplace_back(*stock);
  Json payload{{"watchlist", watchlist_json(trading)}};
  store_family(world, "trading", std::move(trading));
  return ok(payload);
}

ToolOutcome remove_from_watchlist(const ToolCall& call, MockWorld& world) {
  auto symbol = string_arg(call, "symbol");
  if (!symbol) return fail("symbol must be a string");
  Value trading = family_state(world, "trading");
  auto& list = trading.find("watchlist")->as_list();
  auto it = std::find(list.begin(), list.end(), Value(*symbol));
  if (it == list.end()) return fail("Stock " + *symbol + " not found in watchlist.");
  list.erase(it);
  store_family(world, "trading", std::move(trading));
  return ok(Json{{"status", "Stock " + *symbol + " removed from watchlist."}});
}

ToolOutcome get_watchlist(const ToolCall&, MockWorld& world) {
  return ok(Json{{"watchlist", watchlist_json(family_state(world, "trading"))}});
}

// ---- filesystem ------------------------------------------------------------

Value* walk(Value& root, const Value::List& cwd) {
  Value* dir = &root;
  for (const auto& part : cwd) {
    dir = dir->find(part.as_string());
    if (dir == nullptr || !dir->is_map()) return nullptr;
  }
  return dir;
}

std::string cwd_string(const Value::List& cwd) {
  std::string out;
  for (const auto& part : cwd) out += "/" + part.as_string();
  return out.empty() ? "/" : out;
}

ToolOutcome fs_pwd(const ToolCall&, MockWorld& world) {
  Value fs = family_state(world, "filesystem");
  return ok(Json{{"current_working_directory", cwd_string(fs.find("cwd")->as_list())}});
}

ToolOutcome fs_ls(const ToolCall&, MockWorld& world) {
  Value fs = family_state(world, "filesystem");
  Value* dir = walk(*fs.find("root"), fs.find("cwd")->as_list());
  if (dir == nullptr) return fail("current directory no longer exists");
  std::vector<std::string> names;
  for (const auto& [name, unused] : dir->as_map()) names.push_back(name);
  std::sort(names.begin(), names.end());
  return ok(Json{{"current_directory_content", names}});
}

ToolOutcome fs_cd(const ToolCall& call, MockWorld& world) {
  auto folder = string_arg(call, "folder");
  if (!folder) return fail("folder must be a string");
  Value fs = family_state(world, "filesystem");
  auto& cwd = fs.find("cwd")->as_list();
  if (*folder == "..") {
    if (!cwd.empty()) cwd.pop_back();
  } else if (*folder != ".") {
    Value* dir = walk(*fs.find("root"), cwd);
    const Value* child = dir ? dir->find(*folder) : nullptr;
    if (child == nullptr || !child->is_map()) return fail("cd: " + *folder + ": No such directory");
    cwd.emplace_back(*folder);
  }
  std::string now = cwd_string(cwd);
  store_family(world, "filesystem", std::move(fs));
  return ok(Json{{"current_working_directory", now}});
}

ToolOutcome fs_create(const ToolCall& call, MockWorld& world, const char* arg, bool directory) {
  auto name = string_arg(call, arg);
  if (!name || name->empty() || name->find('/') != std::string::npos)
    return fail(std::string(arg) + " must be a plain name");
  Value fs = family_state(world, "filesystem");
  Value* dir = walk(*fs.find("root"), fs.find("cwd")->as_list());
  if (dir == nullptr) return fail("current directory no longer exists");
  if (const Value* existing = dir->find(*name)) {
    if (directory || existing->is_map()) return fail(*name + ": already exists");
    return ok(Json{{"status", "touched " + *name}});
  }
  dir->set(*name, directory ? Value::map() : Value(""));
  store_family(world, "filesystem", std::move(fs));
  return ok(Json{{"status", std::string(directory ? "created directory " : "created file ") + *name}});
}

ToolOutcome fs_cat(const ToolCall& call, MockWorld& world) {
  auto name = string_arg(call, "file_name");
  if (!name) return fail("file_name must be a string");
  Value fs = family_state(world, "filesystem");
  Value* dir = walk(*fs.find("root"), fs.find("cwd")->as_list());
  const Value* file = dir ? dir->find(*name) : nullptr;
  if (file == nullptr || !file->is_string()) return fail("cat: " + *name + ": No such file");
  return ok(Json{{"file_content", file->as_string()}});
}

// ---- travel / math ---------------------------------------------------------

ToolOutcome zipcode(const ToolCall& call, MockWorld& world) {
  auto city = string_arg(call, "city");
  if (!city) return fail("city must be a string");
  Value travel = family_state(world, "travel");
  const Value* zip = travel.find("zipcodes")->find(*city);
  if (zip == nullptr) return ok(Json{{"zipcode", "00000"}});
  return ok(Json{{"zipcode", zip->as_string()}});
}

ToolOutcome estimate_distance(const ToolCall& call, MockWorld& world) {
  auto a = string_arg(call, "cityA");
  auto b = string_arg(call, "cityB");
  if (!a || !b) return fail("cityA and cityB must be strings");
  Value travel = family_state(world, "travel");
  const Value* table = travel.find("distances");
  const Value* d = table->find(*a + "|" + *b);
  if (d == nullptr) d = table->find(*b + "|" + *a);
  if (d == nullptr || !d->is_number()) return fail("distance not found in database.");
  return ok(Json{{"distance", d->as_number()}});
}

ToolOutcome logarithm(const ToolCall& call, MockWorld&) {
  auto value = number_arg(call, "value");
  auto base = number_arg(call, "base");
  if (!value || !base) return fail("value and base must be numbers");
  if (*value <= 0 || *base <= 0 || *base == 1.0) return fail("logarithm undefined for these arguments");
  double result = std::log(*value) / std::log(*base);
  if (auto precision = number_arg(call, "precision")) {
    const double scale = std::pow(10.0, std::clamp(*precision, 0.0, 15.0));
    result = std::round(result * scale) / scale;
  }
  return ok(Json{{"result", result}});
}

const std::map<std::string, BuiltinTool, std::less<>>& registry() {
  static const std::map<std::string, BuiltinTool, std::less<>> kTools{
      {"fillFuelTank", {"vehicle", true, fill_fuel_tank}},
      {"lockDoors", {"vehicle", true, lock_doors}},
      {"activateParkingBrake", {"vehicle", true, activate_parking_brake}},
      {"setHeadlights", {"vehicle", true, set_headlights}},
      {"estimate_drive_feasibility_by_mileage", {"vehicle", false, drive_feasibility}},
      {"gallon_to_liter", {"", false, gallon_to_liter}},
      {"liter_to_gallon", {"", false, liter_to_gallon}},
      {"add_to_watchlist", {"trading", true, add_to_watchlist}},
      {"remove_stock_from_watchlist", {"trading", true, remove_from_watchlist}},
      {"get_watchlist", {"trading", false, get_watchlist}},
      {"pwd", {"filesystem", false, fs_pwd}},
      {"ls", {"filesystem", false, fs_ls}},
      {"cd", {"filesystem", true, fs_cd}},
      {"mkdir", {"filesystem", true, [](const ToolCall& c, MockWorld& w) { return fs_create(c, w, "dir_name", true); }}},
      {"touch", {"filesystem", true, [](const ToolCall& c, MockWorld& w) { return fs_create(c, w, "file_name", false); }}},
      {"cat", {"filesystem", false, fs_cat}},
      {"get_zipcode_based_on_city", {"travel", false, zipcode}},
      {"estimate_distance", {"travel", false, estimate_distance}},
      {"logarithm", {"", false, logarithm}},
  };
  return kTools;
}

}  // namespace

const BuiltinTool* find_builtin(std::string_view name) {
  const auto& tools = registry();
  auto it = tools.find(name);
  return it == tools.end() ? nullptr : &it->second;
}

bool is_read_only_tool(std::string_view name) {
  const auto* b = find_builtin(name);
  return b == nullptr || !b->mutates;
}

Value default_family_state(std::string_view family) {
  if (family == "vehicle") {
    Value doors = Value::map();
    for (auto d : kDoors) doors.set(d, "unlocked");
    return Value(Value::Map{{"fuelLevel", 0.0},
                            {"fuelCapacity", 50.0},
                            {"doors", std::move(doors)},
                            {"parkingBrake", "released"},
                            {"headlights", "off"}});
  }
  if (family == "trading") return Value(Value::Map{{"watchlist", Value::list()}});
  if (family == "filesystem") return Value(Value::Map{{"cwd", Value::list()}, {"root", Value::map()}});
  if (family == "travel") return Value(Value::Map{{"zipcodes", Value::map()}, {"distances", Value::map()}});
  return Value::map();
}

ExecutionBatch execute_calls(std::span<const ToolCall> calls, std::span<const ToolSpec> tools,
                             MockWorld world) {
  if (!world.is_map()) world = Value::map();
  ExecutionBatch out;
  for (const auto& call : calls) {
    ExecutionResult r{call, Outcome::ok, ""};
    auto verdict = validate_call(call, tools);
    if (verdict.category == VerdictCategory::wrong_function) {
      r.outcome = Outcome::error;
      r.payload = "no such tool: " + call.function;
    } else if (verdict.category != VerdictCategory::ok) {
      r.outcome = Outcome::error;
      r.payload = std::string(to_string(verdict.category)) + ": " + verdict.detail;
    } else if (const auto* builtin = find_builtin(call.function)) {
      MockWorld scratch = world;
      auto outcome = builtin->run(call, scratch);
      r.outcome = outcome.ok ? Outcome::ok : Outcome::error;
      r.payload = std::move(outcome.payload);
      if (outcome.ok) world = std::move(scratch);
    } else {
      r.payload = Json{{"status", "ok"}, {"call", render_tool_call(call)}}.dump();
    }
    out.results.push_back(std::move(r));
  }
  out.world = std::move(world);
  return out;
}

ExecutionBatch execute_golden(const std::vector<std::string>& golden_batches,
                              std::span<const ToolSpec> tools, MockWorld world) {
  ExecutionBatch out;
  out.world = std::move(world);
  for (const auto& text : golden_batches) {
    auto calls = parse_tool_calls(text);
    auto batch = execute_calls(calls, tools, std::move(out.world));
    out.world = std::move(batch.world);
    for (auto& r : batch.results) out.results.push_back(std::move(r));
  }
  return out;
}

bool judge_turn(const MockWorld& executed_world, const MockWorld& golden_world,
                std::span<const ExecutionResult> executed, std::span<const ToolCall> golden_calls) {
  // Families untouched on one side compare against their defaults.
  auto normalized = [](const MockWorld& w, const MockWorld& other) {
    Value out = w.is_map() ? w : Value::map();
    if (other.is_map())
      for (const auto& [family, unused] : other.as_map())
        if (out.find(family) == nullptr) out.set(family, default_family_state(family));
    return out;
  };
  if (!(normalized(executed_world, golden_world) == normalized(golden_world, executed_world)))
    return false;
  std::vector<bool> used(executed.size(), false);
  for (const auto& golden : golden_calls) {
    if (!is_read_only_tool(golden.function)) continue;
    bool matched = false;
    for (std::size_t i = 0; i < executed.size() && !matched; ++i) {
      if (used[i] || executed[i].outcome != Outcome::ok) continue;
      if (executed[i].call == golden) {
        used[i] = true;
        matched = true;
      }
    }
    if (!matched) return false;
  }
  return true;
}

std::string render_result(const ExecutionResult& result) {
  return render_tool_call(result.call) + " -> " + (result.outcome == Outcome::ok ? "" : "error: ") +
         result.payload;
}

}  // namespace ah
