#ifndef RELAXPLAN_TRANSITION_SYSTEM_HPP
#define RELAXPLAN_TRANSITION_SYSTEM_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relaxplan/error.hpp"
#include "relaxplan/symbol.hpp"

namespace relaxplan {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// A single invariant breach found by validate().
struct Violation {
  std::string location;
  std::string message;

  std::string str() const { return location + ": " + message; }
};

struct TsTransition {
  std::size_t from = 0;
  std::size_t to = 0;
  std::int64_t weight = 1;  // duration units
};

/// Weighted motion abstraction: states, initial state, transitions,
/// labelling h and integer durations.
class TransitionSystem {
public:
  ApSet ap;
  std::size_t initial = 0;
  std::vector<TsTransition> transitions;

  std::size_t add_state(const std::string& name, APSymbol label) {
    if (index_.count(name)) throw InvalidModel("duplicate TS state '" + name + "'");
    index_.emplace(name, names_.size());
    names_.push_back(name);
    labels_.push_back(std::move(label));
    return names_.size() - 1;
  }

  void add_transition(std::size_t from, std::size_t to, std::int64_t weight = 1) {
    transitions.push_back({from, to, weight});
  }
  void add_transition(const std::string& from, const std::string& to, std::int64_t weight = 1) {
    add_transition(index_of(from), index_of(to), weight);
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t x) const { return names_.at(x); }
  const APSymbol& label(std::size_t x) const { return labels_.at(x); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<APSymbol>& labels() const noexcept { return labels_; }

  std::size_t index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InvalidModel("unknown TS state '" + name + "'");
    return it->second;
  }
  bool has_state(const std::string& name) const { return index_.count(name) != 0; }

  /// Outgoing transition indices per state.
  std::vector<std::vector<std::size_t>> adjacency() const {
    std::vector<std::vector<std::size_t>> adj(size());
    for (std::size_t i = 0; i < transitions.size(); ++i) {
      if (transitions[i].from < size()) adj[transitions[i].from].push_back(i);
    }
    return adj;
  }

private:
  std::vector<std::string> names_;
  std::vector<APSymbol> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline std::vector<Violation> validate(const TransitionSystem& ts) {
  std::vector<Violation> out;
  if (ts.size() == 0) out.push_back({"ts", "no states"});
  if (ts.initial >= ts.size()) out.push_back({"ts.initial", "initial state is not a state"});
  for (std::size_t x = 0; x < ts.size(); ++x) {
    if (!ts.label(x).subset_of(ts.ap)) {
      out.push_back({"ts.state[" + ts.name(x) + "]",
                     "label " + ts.label(x).str() + " uses a proposition outside the AP set"});
    }
  }
  for (std::size_t i = 0; i < ts.transitions.size(); ++i) {
    const auto& t = ts.transitions[i];
    std::string where = "ts.transition[" + std::to_string(i) + "]";
    if (t.from >= ts.size() || t.to >= ts.size()) {
      out.push_back({where, "endpoint is not a state"});
      continue;
    }
    where += " (" + ts.name(t.from) + " -> " + ts.name(t.to) + ")";
    if (t.weight < 1) out.push_back({where, "weight " + std::to_string(t.weight) + " is not a positive integer"});
  }
  return out;
}

struct TsOutput {
  Word word;
  std::int64_t weight = 0;
};

/// Output word h(x) and trajectory weight of a run starting at the initial state.
inline TsOutput ts_output(const TransitionSystem& ts, std::span<const std::size_t> traj) {
  if (traj.empty()) throw NotARun("empty trajectory");
  if (traj[0] != ts.initial) throw NotARun("trajectory does not start at the initial state");
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> best;
  for (const auto& t : ts.transitions) {
    auto [it, inserted] = best.emplace(std::make_pair(t.from, t.to), t.weight);
    if (!inserted && t.weight < it->second) it->second = t.weight;
  }
  TsOutput out;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj[k] >= ts.size()) throw NotARun("trajectory visits unknown state index " + std::to_string(traj[k]));
    out.word.push_back(ts.label(traj[k]));
    if (k == 0) continue;
    auto it = best.find({traj[k - 1], traj[k]});
    if (it == best.end()) {
      throw NotARun("no transition " + ts.name(traj[k - 1]) + " -> " + ts.name(traj[k]) +
                    " at step " + std::to_string(k));
    }
    out.weight += it->second;
  }
  return out;
}

}  // namespace relaxplan

#endif  // RELAXPLAN_TRANSITION_SYSTEM_HPP
