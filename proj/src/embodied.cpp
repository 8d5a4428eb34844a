// SPDX-License-Identifier: Apache-2.0
#include "agentharness/embodied.hpp"

#include <cctype>
#include <stdexcept>

namespace ah {

std::unique_ptr<Environment> make_gridnav(const EmbodiedTask& task);
std::unique_ptr<Environment> make_texthouse(const EmbodiedTask& task);

double progress(const std::set<std::string>& satisfied, const std::vector<Subgoal>& subgoals) {
  if (subgoals.empty()) throw std::invalid_argument("progress: subgoal list is empty");
  std::size_t hit = 0;
  for (const auto& g : subgoals)
    if (satisfied.contains(g.id)) ++hit;
  return static_cast<double>(hit) / static_cast<double>(subgoals.size());
}

EnvObservation Environment::reset(std::uint64_t seed) {
  satisfied_.clear();
  done_ = false;
  EnvObservation obs;
  obs.text = do_reset(seed);
  refresh();
  obs.done = done_;
  obs.satisfied = satisfied_;
  return obs;
}

EnvObservation Environment::step(std::string_view action) {
  EnvObservation obs;
  if (done_) {
    obs.text = "The task is already completed.";
  } else {
    obs.text = do_step(action);
    refresh();
    if (done_) obs.text += completion_suffix();
  }
  obs.done = done_;
  obs.satisfied = satisfied_;
  return obs;
}

std::vector<std::string> Environment::valid_actions() const {
  if (done_) return {};
  return do_valid_actions();
}

void Environment::refresh() {
  for (const auto& g : subgoals_)
    if (!satisfied_.contains(g.id) && holds(g)) satisfied_.insert(g.id);
  done_ = !subgoals_.empty() && satisfied_.size() == subgoals_.size();
}

std::unique_ptr<Environment> make_environment(const EmbodiedTask& task) {
  if (task.spec.env_name == "gridnav") return make_gridnav(task);
  if (task.spec.env_name == "texthouse") return make_texthouse(task);
  throw std::invalid_argument("unknown environment '" + task.spec.env_name + "'");
}

std::vector<std::string> environment_names() { return {"gridnav", "texthouse"}; }

std::vector<std::string> subgoal_kinds(std::string_view env_name) {
  if (env_name == "gridnav") return {"seen", "at", "holding"};
  if (env_name == "texthouse") return {"seen", "holding", "used", "used_holding", "at", "in", "opened"};
  return {};
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string normalize_action(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace ah
