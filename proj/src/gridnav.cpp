// SPDX-License-Identifier: Apache-2.0
// BabyAI-like single-room grid. Coordinates: x grows east, y grows south;
// the outer ring of cells is wall.
#include <algorithm>
#include <array>
#include <cstdlib>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "agentharness/embodied.hpp"
#include "agentharness/prng.hpp"

namespace ah {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kViewDepth = 6;   // forward cells visible beyond the agent's own row
constexpr int kViewHalfWidth = 3;

constexpr std::array<std::string_view, 4> kDirNames{"north", "east", "south", "west"};
constexpr std::array<int, 4> kDx{0, 1, 0, -1};
constexpr std::array<int, 4> kDy{-1, 0, 1, 0};

constexpr std::array<std::string_view, 6> kColors{"red", "green", "blue", "purple", "yellow", "grey"};
constexpr std::array<std::string_view, 3> kKinds{"ball", "box", "key"};

struct GridObject {
  std::string color;
  std::string kind;
  std::string name;  // "red ball 1"
  int x = 0;
  int y = 0;
  bool carried = false;
};

struct Layout {
  int width = 8;
  int height = 8;
  int ax = 1;
  int ay = 1;
  int dir = 0;
  std::vector<std::pair<int, int>> walls;
  std::vector<GridObject> objects;
};

int parse_dir(const std::string& s) {
  for (std::size_t i = 0; i < kDirNames.size(); ++i)
    if (kDirNames[i] == s) return static_cast<int>(i);
  throw std::invalid_argument("gridnav: unknown facing '" + s + "'");
}

std::pair<int, int> parse_pos(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw std::invalid_argument(std::string("gridnav: ") + what + " must be [x, y]");
  return {j[0].get<int>(), j[1].get<int>()};
}

void assign_names(std::vector<GridObject>& objects) {
  std::map<std::string, int> counts;
  for (auto& o : objects) o.name = o.color + " " + o.kind + " " + std::to_string(++counts[o.color + " " + o.kind]);
}

struct ObjectName {
  std::string color;
  std::string kind;
};

std::optional<ObjectName> split_name(const std::string& name) {
  std::istringstream in(name);
  std::string color, kind, index;
  if (!(in >> color >> kind)) return std::nullopt;
  return ObjectName{color, kind};
}

class GridNav final : public Environment {
 public:
  GridNav(std::vector<Subgoal> subgoals, Json layout, std::string task_id)
      : Environment(std::move(subgoals)), layout_json_(std::move(layout)), task_id_(std::move(task_id)) {}

  std::string name() const override { return "gridnav"; }

  std::string state_fingerprint() const override {
    std::ostringstream out;
    out << s_.ax << ',' << s_.ay << ',' << s_.dir << ';';
    for (const auto& o : s_.objects) out << o.name << '@' << o.x << ',' << o.y << (o.carried ? "c" : "") << ';';
    return out.str();
  }

 protected:
  std::string do_reset(std::uint64_t seed) override {
    s_ = layout_json_.is_null() ? generate(seed) : parse(layout_json_);
    return render();
  }

  std::string do_step(std::string_view raw) override {
    const auto action = normalize_action(raw);
    if (action == "move forward") {
      const int nx = s_.ax + kDx[s_.dir], ny = s_.ay + kDy[s_.dir];
      if (!free(nx, ny)) return "There is a barrier in front of you, you can't move forward.";
      s_.ax = nx;
      s_.ay = ny;
      return render();
    }
    if (action == "turn left") {
      s_.dir = (s_.dir + 3) % 4;
      return render();
    }
    if (action == "turn right") {
      s_.dir = (s_.dir + 1) % 4;
      return render();
    }
    if (action.starts_with("go to ")) return go_to(action.substr(6));
    if (action.starts_with("pick up ")) return pick_up(action.substr(8));
    if (action == "drop") return drop();
    return "Unknown action.";
  }

  std::vector<std::string> do_valid_actions() const override {
    std::vector<std::string> out{"turn left", "turn right", "move forward"};
    for (const auto& o : s_.objects)
      if (visible(o)) out.push_back("go to " + o.name);
    if (const auto* front = object_in_front(); front && carried() == nullptr) out.push_back("pick up " + front->name);
    if (carried() != nullptr) out.push_back("drop");
    return out;
  }

  bool holds(const Subgoal& g) const override {
    if (g.args.empty()) return false;
    const auto* o = find(g.args[0]);
    if (o == nullptr) return false;
    if (g.kind == "seen") return visible(*o);
    if (g.kind == "at") return object_in_front() == o;
    if (g.kind == "holding") return o->carried;
    return false;
  }

  std::string_view completion_suffix() const override { return " The task is completed."; }

 private:
  Layout parse(const Json& j) const {
    Layout l;
    l.width = j.value("width", 8);
    l.height = j.value("height", 8);
    if (l.width < 3 || l.height < 3) throw std::invalid_argument("gridnav: grid must be at least 3x3");
    std::tie(l.ax, l.ay) = parse_pos(j.at("agent"), "agent");
    l.dir = parse_dir(j.value("facing", std::string("north")));
    if (j.contains("walls"))
      for (const auto& w : j["walls"]) l.walls.push_back(parse_pos(w, "wall"));
    if (j.contains("objects")) {
      for (const auto& o : j["objects"]) {
        GridObject g;
        g.color = o.at("color").get<std::string>();
        g.kind = o.at("kind").get<std::string>();
        std::tie(g.x, g.y) = parse_pos(o.at("pos"), "object pos");
        l.objects.push_back(g);
      }
    }
    assign_names(l.objects);
    const auto inside = [&](int x, int y) { return x > 0 && y > 0 && x < l.width - 1 && y < l.height - 1; };
    if (!inside(l.ax, l.ay)) throw std::invalid_argument("gridnav: agent outside the room");
    for (const auto& o : l.objects) {
      if (!inside(o.x, o.y)) throw std::invalid_argument("gridnav: " + o.name + " outside the room");
      if (o.x == l.ax && o.y == l.ay) throw std::invalid_argument("gridnav: " + o.name + " on the agent");
    }
    for (std::size_t i = 0; i < l.objects.size(); ++i)
      for (std::size_t k = i + 1; k < l.objects.size(); ++k)
        if (l.objects[i].x == l.objects[k].x && l.objects[i].y == l.objects[k].y)
          throw std::invalid_argument("gridnav: " + l.objects[i].name + " and " + l.objects[k].name + " overlap");
    return l;
  }

  Layout generate(std::uint64_t seed) const {
    SplitMix64 rng(seed ^ fnv1a64(task_id_));
    Layout l;
    std::vector<std::pair<int, int>> cells;
    for (int y = 1; y < l.height - 1; ++y)
      for (int x = 1; x < l.width - 1; ++x) cells.emplace_back(x, y);
    // Shuffle interior cells; the first few become agent and objects.
    for (std::size_t i = 0; i < cells.size(); ++i)
      std::swap(cells[i], cells[i + rng.below(cells.size() - i)]);
    std::tie(l.ax, l.ay) = cells[0];
    l.dir = static_cast<int>(rng.below(4));
    std::vector<std::string> wanted;
    for (const auto& g : subgoals())
      if (!g.args.empty() && std::find(wanted.begin(), wanted.end(), g.args[0]) == wanted.end())
        wanted.push_back(g.args[0]);
    std::size_t next = 1;
    for (const auto& w : wanted) {
      auto n = split_name(w);
      if (!n) continue;
      l.objects.push_back({n->color, n->kind, "", cells[next].first, cells[next].second, false});
      ++next;
    }
    const std::size_t distractors = 2 + rng.below(2);
    for (std::size_t i = 0; i < distractors; ++i) {
      GridObject g;
      g.color = std::string(kColors[rng.below(kColors.size())]);
      g.kind = std::string(kKinds[rng.below(kKinds.size())]);
      std::tie(g.x, g.y) = cells[next++];
      l.objects.push_back(g);
    }
    // Targets come first so they keep index 1 within their color+kind.
    assign_names(l.objects);
    return l;
  }

  bool wall(int x, int y) const {
    if (x <= 0 || y <= 0 || x >= s_.width - 1 || y >= s_.height - 1) return true;
    return std::find(s_.walls.begin(), s_.walls.end(), std::make_pair(x, y)) != s_.walls.end();
  }

  const GridObject* object_at(int x, int y) const {
    for (const auto& o : s_.objects)
      if (!o.carried && o.x == x && o.y == y) return &o;
    return nullptr;
  }

  bool free(int x, int y) const { return !wall(x, y) && object_at(x, y) == nullptr; }

  const GridObject* find(const std::string& name) const {
    for (const auto& o : s_.objects)
      if (o.name == name) return &o;
    return nullptr;
  }

  const GridObject* carried() const {
    for (const auto& o : s_.objects)
      if (o.carried) return &o;
    return nullptr;
  }

  const GridObject* object_in_front() const { return object_at(s_.ax + kDx[s_.dir], s_.ay + kDy[s_.dir]); }

  // Egocentric offsets: forward along the facing, left perpendicular to it.
  std::pair<int, int> relative(int x, int y) const {
    const int rx = x - s_.ax, ry = y - s_.ay;
    const int forward = rx * kDx[s_.dir] + ry * kDy[s_.dir];
    const int left = rx * kDy[s_.dir] - ry * kDx[s_.dir];
    return {forward, left};
  }

  bool visible(const GridObject& o) const {
    if (o.carried) return false;
    auto [f, l] = relative(o.x, o.y);
    return f >= 0 && f <= kViewDepth && l >= -kViewHalfWidth && l <= kViewHalfWidth && !(f == 0 && l == 0);
  }

  std::string render() const {
    std::string out = "In front of you in this room, you can see several objects: ";
    for (const auto& o : s_.objects) {
      if (!visible(o)) continue;
      auto [f, l] = relative(o.x, o.y);
      out += "There is a " + o.name + " ";
      if (l == 0)
        out += "right in front of you " + std::to_string(f) + " steps away. ";
      else
        out += std::to_string(f) + " steps in front of you and " + std::to_string(std::abs(l)) + " steps to your " +
               (l > 0 ? "left" : "right") + ". ";
    }
    int dist = 1;
    while (!wall(s_.ax + dist * kDx[s_.dir], s_.ay + dist * kDy[s_.dir])) ++dist;
    out += "The room has walls around you. You are facing a wall " + std::to_string(dist) + " steps away. ";
    if (const auto* c = carried())
      out += "You are carrying a " + c->name + ".";
    else
      out += "You are not carrying anything.";
    return out;
  }

  std::string go_to(const std::string& target) {
    const auto* o = find(target);
    if (o == nullptr || !visible(*o)) return "Unknown action.";
    // BFS over free cells; neighbours expanded N, E, S, W so ties are stable.
    std::vector<int> dist(static_cast<std::size_t>(s_.width * s_.height), -1);
    auto idx = [&](int x, int y) { return static_cast<std::size_t>(y * s_.width + x); };
    std::deque<std::pair<int, int>> queue{{s_.ax, s_.ay}};
    dist[idx(s_.ax, s_.ay)] = 0;
    std::optional<std::pair<int, int>> goal;
    while (!queue.empty()) {
      auto [x, y] = queue.front();
      queue.pop_front();
      if (std::abs(x - o->x) + std::abs(y - o->y) == 1) {
        goal = {x, y};
        break;
      }
      for (int d = 0; d < 4; ++d) {
        const int nx = x + kDx[d], ny = y + kDy[d];
        if (!free(nx, ny) || dist[idx(nx, ny)] >= 0) continue;
        dist[idx(nx, ny)] = dist[idx(x, y)] + 1;
        queue.emplace_back(nx, ny);
      }
    }
    if (!goal) return "You can't reach the " + o->name + ".";
    s_.ax = goal->first;
    s_.ay = goal->second;
    for (int d = 0; d < 4; ++d)
      if (s_.ax + kDx[d] == o->x && s_.ay + kDy[d] == o->y) s_.dir = d;
    return render();
  }

  std::string pick_up(const std::string& target) {
    const auto* front = object_in_front();
    if (front == nullptr || front->name != target) return "Unknown action.";
    if (carried() != nullptr) return "You are already carrying something.";
    for (auto& o : s_.objects)
      if (&o == front) o.carried = true;
    return render();
  }

  std::string drop() {
    const int fx = s_.ax + kDx[s_.dir], fy = s_.ay + kDy[s_.dir];
    for (auto& o : s_.objects) {
      if (!o.carried) continue;
      if (!free(fx, fy)) return "There is no space to drop it.";
      o.carried = false;
      o.x = fx;
      o.y = fy;
      return render();
    }
    return "Unknown action.";
  }

  Json layout_json_;
  std::string task_id_;
  Layout s_;
};

std::vector<Subgoal> default_subgoals(const std::string& goal) {
  // "go to the red ball" / "pick up the grey key"
  auto g = normalize_action(goal);
  while (!g.empty() && g.back() == '.') g.pop_back();
  std::string verb, rest;
  if (g.starts_with("go to ")) {
    verb = "at";
    rest = g.substr(6);
  } else if (g.starts_with("pick up ")) {
    verb = "holding";
    rest = g.substr(8);
  } else {
    throw std::invalid_argument("gridnav: cannot derive subgoals from goal '" + goal + "'");
  }
  if (rest.starts_with("the ")) rest = rest.substr(4);
  if (rest.starts_with("a ")) rest = rest.substr(2);
  const std::string target = rest + " 1";
  return {{"seen", "seen", {target}, "see the " + rest}, {verb, verb, {target}, goal}};
}

}  // namespace

std::unique_ptr<Environment> make_gridnav(const EmbodiedTask& task) {
  auto subgoals = task.subgoals.empty() ? default_subgoals(task.spec.goal) : task.subgoals;
  for (const auto& g : subgoals) {
    if (g.kind != "seen" && g.kind != "at" && g.kind != "holding")
      throw std::invalid_argument("gridnav: unknown subgoal kind '" + g.kind + "'");
    if (g.args.size() != 1) throw std::invalid_argument("gridnav: subgoal '" + g.id + "' needs one object");
  }
  return std::make_unique<GridNav>(std::move(subgoals), task.layout, task.spec.id);
}

}  // namespace ah
