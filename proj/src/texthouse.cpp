// SPDX-License-Identifier: Apache-2.0
// ALFWorld-like household: named receptacles, some of them closable, a
// one-item inventory and a handful of verbs.
#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "agentharness/embodied.hpp"
#include "agentharness/prng.hpp"

namespace ah {

namespace {

using Json = nlohmann::ordered_json;

struct Item {
  std::string name;
  std::string article;  // "a", "an" or "" for plurals/mass nouns
};

struct Location {
  std::string name;
  bool container = false;
  bool open = true;
  std::vector<Item> items;
};

struct House {
  std::vector<Location> locations;
  std::set<std::string> usable;
  int at = -1;  // -1: middle of the room
  std::optional<Item> holding;
};

std::string default_article(const std::string& name) {
  if (name.empty()) return "a";
  const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(name[0])));
  return std::string("aeiou").find(c) != std::string::npos ? "an" : "a";
}

std::string with_article(const Item& item) {
  return item.article.empty() ? item.name : item.article + " " + item.name;
}

// "nothing" / "a x" / "a x, and a y" / "a x, a y, and a z"
std::string list_items(const std::vector<Item>& items) {
  if (items.empty()) return "nothing";
  if (items.size() == 1) return with_article(items[0]);
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    if (i + 1 == items.size()) out += "and ";
    out += with_article(items[i]);
  }
  return out;
}

std::string base_name(const std::string& name) {
  auto space = name.rfind(' ');
  if (space != std::string::npos && space + 1 < name.size() &&
      std::all_of(name.begin() + static_cast<long>(space) + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return name.substr(0, space);
  return name;
}

bool default_usable(const std::string& name) {
  const auto base = base_name(name);
  return base == "desklamp" || base == "floorlamp" || base == "lamp";
}

Item parse_item(const Json& j) {
  if (j.is_string()) {
    auto name = j.get<std::string>();
    return {name, default_article(name)};
  }
  if (!j.is_object() || !j.contains("name")) throw std::invalid_argument("texthouse: item must be a name or {name, article}");
  Item it;
  it.name = j.at("name").get<std::string>();
  it.article = j.contains("article") ? j.at("article").get<std::string>() : default_article(it.name);
  return it;
}

constexpr std::array<std::pair<std::string_view, bool>, 8> kLocationKinds{{
    {"desk", false}, {"sidetable", false}, {"countertop", false}, {"shelf", false},
    {"cabinet", true}, {"drawer", true}, {"dresser", false}, {"garbagecan", false}}};
constexpr std::array<std::string_view, 9> kDistractors{"book", "pen", "mug", "keychain", "cd",
                                                       "pencil", "alarmclock", "creditcard", "cellphone"};

class TextHouse final : public Environment {
 public:
  TextHouse(std::vector<Subgoal> subgoals, Json layout, std::string task_id)
      : Environment(std::move(subgoals)), layout_json_(std::move(layout)), task_id_(std::move(task_id)) {}

  std::string name() const override { return "texthouse"; }

  std::string state_fingerprint() const override {
    std::ostringstream out;
    out << h_.at << '|' << (h_.holding ? h_.holding->name : "-") << '|';
    for (const auto& l : h_.locations) {
      out << l.name << (l.open ? "+" : "-") << ':';
      for (const auto& i : l.items) out << i.name << ',';
      out << ';';
    }
    return out.str();
  }

 protected:
  std::string do_reset(std::uint64_t seed) override {
    h_ = layout_json_.is_null() ? generate(seed) : parse(layout_json_);
    seen_.clear();
    used_.clear();
    used_holding_.clear();
    std::vector<Item> locs;
    for (const auto& l : h_.locations) locs.push_back({l.name, default_article(l.name)});
    return "You are in the middle of a room. Looking quickly around you, you see " + list_items(locs) + ".";
  }

  std::string do_step(std::string_view raw) override {
    const auto action = normalize_action(raw);
    if (action.starts_with("go to ")) return go_to(action.substr(6));
    if (action.starts_with("open ")) return set_open(action.substr(5), true);
    if (action.starts_with("close ")) return set_open(action.substr(6), false);
    if (action.starts_with("take ")) return take(action.substr(5));
    if (action.starts_with("put ")) return put(action.substr(4));
    if (action.starts_with("examine ")) return examine(action.substr(8));
    if (action.starts_with("use ")) return use(action.substr(4));
    return "Nothing happens.";
  }

  std::vector<std::string> do_valid_actions() const override {
    std::vector<std::string> out;
    for (int i = 0; i < static_cast<int>(h_.locations.size()); ++i)
      if (i != h_.at) out.push_back("go to " + h_.locations[static_cast<std::size_t>(i)].name);
    if (h_.at >= 0) {
      const auto& here = h_.locations[static_cast<std::size_t>(h_.at)];
      out.push_back("examine " + here.name);
      if (here.container) out.push_back((here.open ? "close " : "open ") + here.name);
      if (here.open) {
        if (!h_.holding)
          for (const auto& it : here.items) out.push_back("take " + it.name + " from " + here.name);
        if (h_.holding) out.push_back("put " + h_.holding->name + " in/on " + here.name);
        for (const auto& it : here.items)
          if (h_.usable.contains(it.name)) out.push_back("use " + it.name);
      }
    }
    if (h_.holding && h_.usable.contains(h_.holding->name)) out.push_back("use " + h_.holding->name);
    return out;
  }

  bool holds(const Subgoal& g) const override {
    auto arg = [&](std::size_t i) -> const std::string& { return g.args.at(i); };
    if (g.kind == "seen") return seen_.contains(arg(0));
    if (g.kind == "holding") return h_.holding && h_.holding->name == arg(0);
    if (g.kind == "used") return used_.contains(arg(0));
    if (g.kind == "used_holding") return used_holding_.contains({arg(0), arg(1)});
    if (g.kind == "at") return h_.at >= 0 && h_.locations[static_cast<std::size_t>(h_.at)].name == arg(0);
    if (g.kind == "in") {
      const auto* l = find_location(arg(1));
      return l && std::any_of(l->items.begin(), l->items.end(), [&](const Item& i) { return i.name == arg(0); });
    }
    if (g.kind == "opened") {
      const auto* l = find_location(arg(0));
      return l && l->container && l->open;
    }
    return false;
  }

 private:
  House parse(const Json& j) const {
    House h;
    std::set<std::string> names;
    if (!j.contains("locations") || !j["locations"].is_array() || j["locations"].empty())
      throw std::invalid_argument("texthouse: layout needs a nonempty 'locations' array");
    for (const auto& lj : j["locations"]) {
      Location l;
      l.name = lj.at("name").get<std::string>();
      l.container = lj.value("container", false);
      l.open = l.container ? lj.value("open", false) : true;
      if (lj.contains("items"))
        for (const auto& ij : lj["items"]) l.items.push_back(parse_item(ij));
      if (!names.insert(l.name).second) throw std::invalid_argument("texthouse: duplicate name '" + l.name + "'");
      for (const auto& i : l.items)
        if (!names.insert(i.name).second) throw std::invalid_argument("texthouse: duplicate name '" + i.name + "'");
      h.locations.push_back(std::move(l));
    }
    if (j.contains("usable")) {
      for (const auto& u : j["usable"]) h.usable.insert(u.get<std::string>());
    } else {
      for (const auto& l : h.locations)
        for (const auto& i : l.items)
          if (default_usable(i.name)) h.usable.insert(i.name);
    }
    return h;
  }

  House generate(std::uint64_t seed) const {
    SplitMix64 rng(seed ^ fnv1a64(task_id_));
    House h;
    std::map<std::string, int> counts;
    auto add_location = [&](std::string_view kind, bool container) {
      Location l;
      l.name = std::string(kind) + " " + std::to_string(++counts[std::string(kind)]);
      l.container = container;
      l.open = !container || rng.below(2) == 0;
      h.locations.push_back(std::move(l));
    };
    const std::size_t n = 6 + rng.below(5);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& [kind, container] = kLocationKinds[rng.below(kLocationKinds.size())];
      add_location(kind, container);
    }
    // Locations and items that subgoals refer to must exist.
    std::vector<std::string> wanted_items;
    auto want_item = [&](const std::string& name) {
      if (std::find(wanted_items.begin(), wanted_items.end(), name) == wanted_items.end()) wanted_items.push_back(name);
    };
    auto want_location = [&](const std::string& name) {
      if (find_in(h, name) != nullptr) return;
      Location l;
      l.name = name;
      const auto base = base_name(name);
      l.container = base == "cabinet" || base == "drawer";
      l.open = !l.container;
      h.locations.push_back(std::move(l));
    };
    for (const auto& g : subgoals()) {
      if (g.kind == "at" || g.kind == "opened") want_location(g.args.at(0));
      if (g.kind == "in") {
        want_item(g.args.at(0));
        want_location(g.args.at(1));
      }
      if (g.kind == "seen" || g.kind == "holding" || g.kind == "used") want_item(g.args.at(0));
      if (g.kind == "used_holding") {
        want_item(g.args.at(0));
        want_item(g.args.at(1));
      }
    }
    std::set<std::string> taken;
    for (const auto& l : h.locations) taken.insert(l.name);
    auto place = [&](const std::string& name) {
      auto& loc = h.locations[rng.below(h.locations.size())];
      loc.items.push_back({name, default_article(name)});
      taken.insert(name);
    };
    for (const auto& w : wanted_items)
      if (!taken.contains(w)) place(w);
    const std::size_t extra = 2 + rng.below(3);
    for (std::size_t i = 0; i < extra; ++i) {
      std::string name = std::string(kDistractors[rng.below(kDistractors.size())]) + " " + std::to_string(1 + rng.below(3));
      if (!taken.contains(name)) place(name);
    }
    for (const auto& l : h.locations)
      for (const auto& i : l.items)
        if (default_usable(i.name)) h.usable.insert(i.name);
    return h;
  }

  static const Location* find_in(const House& h, const std::string& name) {
    for (const auto& l : h.locations)
      if (normalize_action(l.name) == name || l.name == name) return &l;
    return nullptr;
  }

  const Location* find_location(const std::string& name) const { return find_in(h_, name); }

  int location_index(const std::string& name) const {
    for (std::size_t i = 0; i < h_.locations.size(); ++i)
      if (normalize_action(h_.locations[i].name) == name) return static_cast<int>(i);
    return -1;
  }

  Location* here() { return h_.at >= 0 ? &h_.locations[static_cast<std::size_t>(h_.at)] : nullptr; }

  std::string describe(const Location& l) {
    if (l.container && !l.open) return "The " + l.name + " is closed.";
    for (const auto& i : l.items) seen_.insert(i.name);
    if (l.container) return "The " + l.name + " is open. In it, you see " + list_items(l.items) + ".";
    return "On the " + l.name + ", you see " + list_items(l.items) + ".";
  }

  std::string go_to(const std::string& target) {
    const int idx = location_index(target);
    if (idx < 0 || idx == h_.at) return "Nothing happens.";
    h_.at = idx;
    return describe(*here());
  }

  std::string set_open(const std::string& target, bool open) {
    auto* l = here();
    if (l == nullptr || normalize_action(l->name) != target || !l->container || l->open == open) return "Nothing happens.";
    l->open = open;
    if (!open) return "You close the " + l->name + ".";
    for (const auto& i : l->items) seen_.insert(i.name);
    return "You open the " + l->name + ". The " + l->name + " is open. In it, you see " + list_items(l->items) + ".";
  }

  std::string take(const std::string& rest) {
    auto sep = rest.find(" from ");
    auto* l = here();
    if (sep == std::string::npos || l == nullptr || h_.holding || !l->open) return "Nothing happens.";
    const auto object = rest.substr(0, sep);
    if (normalize_action(l->name) != rest.substr(sep + 6)) return "Nothing happens.";
    auto it = std::find_if(l->items.begin(), l->items.end(), [&](const Item& i) { return normalize_action(i.name) == object; });
    if (it == l->items.end()) return "Nothing happens.";
    h_.holding = *it;
    l->items.erase(it);
    return "You pick up the " + h_.holding->name + " from " + l->name + ".";
  }

  std::string put(const std::string& rest) {
    auto* l = here();
    if (l == nullptr || !h_.holding || !l->open) return "Nothing happens.";
    std::string object, target;
    for (std::string_view sep : {" in/on ", " in ", " on "}) {
      auto pos = rest.find(sep);
      if (pos == std::string::npos) continue;
      object = rest.substr(0, pos);
      target = rest.substr(pos + sep.size());
      break;
    }
    if (object != normalize_action(h_.holding->name) || target != normalize_action(l->name)) return "Nothing happens.";
    l->items.push_back(*h_.holding);
    const auto name = h_.holding->name;
    h_.holding.reset();
    return "You put the " + name + " in/on the " + l->name + ".";
  }

  std::string examine(const std::string& target) {
    auto* l = here();
    if (l != nullptr && normalize_action(l->name) == target) return describe(*l);
    if (h_.holding && normalize_action(h_.holding->name) == target)
      return "There's nothing special about " + h_.holding->name + ".";
    return "Nothing happens.";
  }

  std::string use(const std::string& target) {
    std::optional<std::string> found;
    if (h_.holding && normalize_action(h_.holding->name) == target) found = h_.holding->name;
    if (auto* l = here(); !found && l && l->open)
      for (const auto& i : l->items)
        if (normalize_action(i.name) == target) found = i.name;
    if (!found || !h_.usable.contains(*found)) return "Nothing happens.";
    used_.insert(*found);
    if (h_.holding) used_holding_.insert({*found, h_.holding->name});
    return "You turn on the " + *found + ".";
  }

  Json layout_json_;
  std::string task_id_;
  House h_;
  std::set<std::string> seen_;
  std::set<std::string> used_;
  std::set<std::pair<std::string, std::string>> used_holding_;
};

std::size_t arity(const std::string& kind) {
  return kind == "used_holding" || kind == "in" ? 2 : 1;
}

}  // namespace

std::unique_ptr<Environment> make_texthouse(const EmbodiedTask& task) {
  if (task.subgoals.empty()) throw std::invalid_argument("texthouse: task '" + task.spec.id + "' declares no subgoals");
  const auto kinds = subgoal_kinds("texthouse");
  for (const auto& g : task.subgoals) {
    if (std::find(kinds.begin(), kinds.end(), g.kind) == kinds.end())
      throw std::invalid_argument("texthouse: unknown subgoal kind '" + g.kind + "'");
    if (g.args.size() != arity(g.kind))
      throw std::invalid_argument("texthouse: subgoal '" + g.id + "' expects " + std::to_string(arity(g.kind)) + " argument(s)");
  }
  return std::make_unique<TextHouse>(task.subgoals, task.layout, task.spec.id);
}

}  // namespace ah
