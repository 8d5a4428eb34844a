// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "agentharness/core.hpp"
#include "json.hpp"

namespace ah {

/// Declarative subgoal: `kind` names a predicate the environment knows how to
/// evaluate over its own state, `args` are object/location names.
///
///   GridNav:   seen(obj) at(obj) holding(obj)
///   TextHouse: seen(obj) holding(obj) used(obj) used_holding(tool, obj)
///              at(loc) in(obj, loc) opened(loc)
struct Subgoal {
  std::string id;
  std::string kind;
  std::vector<std::string> args;
  std::string description;

  friend bool operator==(const Subgoal&, const Subgoal&) = default;
};

struct EnvObservation {
  std::string text;
  bool done = false;
  std::set<std::string> satisfied;
};

/// |satisfied ∩ subgoals| / |subgoals|. Throws std::invalid_argument when
/// `subgoals` is empty.
double progress(const std::set<std::string>& satisfied, const std::vector<Subgoal>& subgoals);

/// Everything an environment needs to build an episode.
struct EmbodiedTask {
  TaskSpec spec;
  std::vector<Subgoal> subgoals;
  nlohmann::ordered_json layout;  // null: procedurally generated from the seed
};

/// Partially observable text environment. Subclasses implement the action
/// semantics and predicates; the base class keeps satisfied subgoals
/// monotone and decides `done`.
class Environment {
 public:
  virtual ~Environment() = default;

  EnvObservation reset(std::uint64_t seed);
  /// Invalid actions are in-band: state unchanged, no-op message returned.
  EnvObservation step(std::string_view action);
  /// Empty once the episode is done.
  std::vector<std::string> valid_actions() const;

  const std::vector<Subgoal>& subgoals() const noexcept { return subgoals_; }
  const std::set<std::string>& satisfied() const noexcept { return satisfied_; }
  double progress() const { return ah::progress(satisfied_, subgoals_); }
  bool done() const noexcept { return done_; }

  /// Canonical dump of the mutable state; equal strings mean equal states.
  virtual std::string state_fingerprint() const = 0;
  virtual std::string name() const = 0;

 protected:
  explicit Environment(std::vector<Subgoal> subgoals) : subgoals_(std::move(subgoals)) {}

  virtual std::string do_reset(std::uint64_t seed) = 0;
  virtual std::string do_step(std::string_view action) = 0;
  virtual std::vector<std::string> do_valid_actions() const = 0;
  virtual bool holds(const Subgoal& goal) const = 0;
  /// Appended to the observation that completes the task ("" for none).
  virtual std::string_view completion_suffix() const { return ""; }

 private:
  void refresh();

  std::vector<Subgoal> subgoals_;
  std::set<std::string> satisfied_;
  bool done_ = false;
};

/// Registered names: "gridnav", "texthouse". Throws std::invalid_argument
/// for an unknown environment or a malformed layout.
std::unique_ptr<Environment> make_environment(const EmbodiedTask& task);

/// Environment names make_environment accepts.
std::vector<std::string> environment_names();

/// Predicate kinds valid for an environment (for suite validation).
std::vector<std::string> subgoal_kinds(std::string_view env_name);

std::string trim(std::string_view s);
/// Lowercase + collapse internal whitespace runs to one space + trim.
std::string normalize_action(std::string_view s);

}  // namespace ah
