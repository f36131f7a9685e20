#ifndef RELAXPLAN_EXTENDED_TS_HPP
#define RELAXPLAN_EXTENDED_TS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "relaxplan/error.hpp"
#include "relaxplan/transition_system.hpp"

namespace relaxplan {

/// Unit-duration TS plus the map back to the original states.
struct ExtendedTS {
  TransitionSystem ts;
  std::vector<std::size_t> origin;   // original state, or the source of the chain
  std::vector<bool> intermediate;

  /// Original trajectory with intermediate states dropped.
  std::vector<std::size_t> project(const std::vector<std::size_t>& traj) const {
    std::vector<std::size_t> out;
    for (auto x : traj) {
      if (!intermediate.at(x)) out.push_back(origin[x]);
    }
    return out;
  }
};

/// Replaces each edge of weight w by w unit edges through w-1 fresh states
/// labelled like the source.
inline ExtendedTS extend_ts(const TransitionSystem& ts) {
  ExtendedTS out;
  out.ts.ap = ts.ap;
  out.ts.initial = ts.initial;
  for (std::size_t x = 0; x < ts.size(); ++x) {
    out.ts.add_state(ts.name(x), ts.label(x));
    out.origin.push_back(x);
    out.intermediate.push_back(false);
  }
  for (std::size_t i = 0; i < ts.transitions.size(); ++i) {
    const auto& t = ts.transitions[i];
    if (t.weight < 1) throw InvalidModel("transition weights must be positive integers to extend the TS");
    std::size_t prev = t.from;
    for (std::int64_t k = 1; k < t.weight; ++k) {
      std::string name = ts.name(t.from) + "->" + ts.name(t.to) + "#" + std::to_string(k);
      if (out.ts.has_state(name)) name += "@" + std::to_string(i);
      auto fresh = out.ts.add_state(name, ts.label(t.from));
      out.origin.push_back(t.from);
      out.intermediate.push_back(true);
      out.ts.add_transition(prev, fresh, 1);
      prev = fresh;
    }
    out.ts.add_transition(prev, t.to, 1);
  }
  return out;
}

}  // namespace relaxplan

#endif  // RELAXPLAN_EXTENDED_TS_HPP
