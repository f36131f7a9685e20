#ifndef RELAXPLAN_TRIM_HPP
#define RELAXPLAN_TRIM_HPP

#include <cstddef>
#include <vector>

#include "relaxplan/dfa.hpp"
#include "relaxplan/edit_system.hpp"
#include "relaxplan/transition_system.hpp"

namespace relaxplan {

/// Which states survive trimming, and their new indices (npos if dropped).
struct TrimMap {
  std::vector<bool> keep;
  std::vector<std::size_t> new_index;
  std::size_t kept = 0;
};

/// Keeps exactly the states that lie on some initial -> accepting path.
/// `Edge` needs `from` and `to` members.
template <class Edge>
TrimMap trim_states(std::size_t num_states, const std::vector<Edge>& edges, std::size_t initial,
                    const std::vector<bool>& accepting) {
  std::vector<std::vector<std::size_t>> fwd(num_states), bwd(num_states);
  for (const auto& e : edges) {
    fwd[e.from].push_back(e.to);
    bwd[e.to].push_back(e.from);
  }
  auto sweep = [](const std::vector<std::vector<std::size_t>>& adj, std::vector<std::size_t> seeds,
                  std::size_t n) {
    std::vector<bool> seen(n, false);
    for (auto s : seeds) seen[s] = true;
    while (!seeds.empty()) {
      auto u = seeds.back();
      seeds.pop_back();
      for (auto v : adj[u]) {
        if (!seen[v]) {
          seen[v] = true;
          seeds.push_back(v);
        }
      }
    }
    return seen;
  };

  TrimMap map;
  map.keep.assign(num_states, false);
  map.new_index.assign(num_states, npos);
  if (initial >= num_states) return map;

  auto reach = sweep(fwd, {initial}, num_states);
  std::vector<std::size_t> finals;
  for (std::size_t s = 0; s < num_states; ++s) {
    if (accepting[s] && reach[s]) finals.push_back(s);
  }
  auto coreach = sweep(bwd, finals, num_states);
  for (std::size_t s = 0; s < num_states; ++s) {
    if (reach[s] && coreach[s]) {
      map.keep[s] = true;
      map.new_index[s] = map.kept++;
    }
  }
  return map;
}

namespace detail {
struct Arc {
  std::size_t from, to;
};
}  // namespace detail

/// Trimmed copy of a DFA. An empty result (no states) means no accepting
/// state is reachable.
inline SpecDFA trim(const SpecDFA& dfa) {
  std::vector<detail::Arc> arcs;
  std::vector<bool> acc(dfa.size());
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    acc[s] = dfa.accepting(s);
    for (const auto& [sym, to] : dfa.transitions_from(s)) arcs.push_back({s, to});
  }
  auto map = trim_states(dfa.size(), arcs, dfa.initial, acc);
  SpecDFA out;
  out.ap = dfa.ap;
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    if (map.keep[s]) out.add_state(dfa.name(s), dfa.accepting(s));
  }
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    if (!map.keep[s]) continue;
    for (const auto& [sym, to] : dfa.transitions_from(s)) {
      if (map.keep[to]) out.add_transition(map.new_index[s], sym, map.new_index[to]);
    }
  }
  out.initial = map.kept ? map.new_index[dfa.initial] : 0;
  return out;
}

inline EditSystem trim(const EditSystem& e) {
  std::vector<bool> acc(e.size());
  for (std::size_t z = 0; z < e.size(); ++z) acc[z] = e.accepting(z);
  auto map = trim_states(e.size(), e.transitions, e.initial, acc);
  EditSystem out;
  out.ap = e.ap;
  for (std::size_t z = 0; z < e.size(); ++z) {
    if (map.keep[z]) out.add_state(e.name(z), e.accepting(z), e.final_weight(z));
  }
  for (const auto& t : e.transitions) {
    if (map.keep[t.from] && map.keep[t.to]) {
      out.add_transition(map.new_index[t.from], t.exec, t.spec, t.weight, map.new_index[t.to]);
    }
  }
  out.initial = map.kept ? map.new_index[e.initial] : 0;
  return out;
}

}  // namespace relaxplan

#endif  // RELAXPLAN_TRIM_HPP
