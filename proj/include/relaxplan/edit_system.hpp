#ifndef RELAXPLAN_EDIT_SYSTEM_HPP
#define RELAXPLAN_EDIT_SYSTEM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "relaxplan/error.hpp"
#include "relaxplan/symbol.hpp"
#include "relaxplan/transition_system.hpp"

namespace relaxplan {

/// One weighted edit. `exec` is matched against what the robot emits,
/// `spec` is fed to the specification automaton.
struct EditTransition {
  std::size_t from = 0;
  EditSymbol exec;
  EditSymbol spec;
  double weight = 0.0;
  std::size_t to = 0;
};

/// Weighted finite-state edit system. Nondeterminism is allowed; accepting
/// states may carry a final (exit) weight.
class EditSystem {
public:
  ApSet ap;
  std::size_t initial = 0;
  std::vector<EditTransition> transitions;

  std::size_t add_state(const std::string& name, bool accepting = false, double final_weight = 0.0) {
    if (index_.count(name)) throw InvalidModel("duplicate WFSE state '" + name + "'");
    index_.emplace(name, names_.size());
    names_.push_back(name);
    accepting_.push_back(accepting);
    final_weight_.push_back(final_weight);
    return names_.size() - 1;
  }

  void add_transition(std::size_t from, EditSymbol exec, EditSymbol spec, double weight, std::size_t to) {
    transitions.push_back({from, std::move(exec), std::move(spec), weight, to});
  }

  void set_accepting(std::size_t z, bool value, double final_weight = 0.0) {
    accepting_.at(z) = value;
    final_weight_.at(z) = final_weight;
  }

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::string& name(std::size_t z) const { return names_.at(z); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  bool accepting(std::size_t z) const { return accepting_.at(z); }
  double final_weight(std::size_t z) const { return final_weight_.at(z); }

  std::size_t index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InvalidModel("unknown WFSE state '" + name + "'");
    return it->second;
  }
  bool has_state(const std::string& name) const { return index_.count(name) != 0; }

  std::vector<std::vector<std::size_t>> adjacency() const {
    std::vector<std::vector<std::size_t>> adj(size());
    for (std::size_t i = 0; i < transitions.size(); ++i) {
      if (transitions[i].from < size()) adj[transitions[i].from].push_back(i);
    }
    return adj;
  }

private:
  std::vector<std::string> names_;
  std::vector<bool> accepting_;
  std::vector<double> final_weight_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

// Zero-weight cycles made only of (ε/σ) edits let the planner insert spec
// symbols for free forever; report the states on one.
inline std::vector<std::size_t> zero_insertion_cycle(const EditSystem& e) {
  const std::size_t n = e.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& t : e.transitions) {
    if (t.from < n && t.to < n && t.exec.is_eps() && !t.spec.is_eps() && t.weight == 0.0) {
      adj[t.from].push_back(t.to);
    }
  }
  std::vector<int> color(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> found;
  auto dfs = [&](auto&& self, std::size_t u) -> bool {
    color[u] = 1;
    stack.push_back(u);
    for (std::size_t v : adj[u]) {
      if (color[v] == 1) {
        auto it = std::find(stack.begin(), stack.end(), v);
        found.assign(it, stack.end());
        return true;
      }
      if (color[v] == 0 && self(self, v)) return true;
    }
    stack.pop_back();
    color[u] = 2;
    return false;
  };
  for (std::size_t u = 0; u < n; ++u) {
    if (color[u] == 0 && dfs(dfs, u)) break;
  }
  return found;
}

}  // namespace detail

inline std::vector<Violation> validate(const EditSystem& e) {
  std::vector<Violation> out;
  if (e.size() == 0) out.push_back({"wfse", "no states"});
  if (e.initial >= e.size()) out.push_back({"wfse.initial", "initial state is not a state"});
  for (std::size_t z = 0; z < e.size(); ++z) {
    double f = e.final_weight(z);
    if (!std::isfinite(f) || f < 0) {
      out.push_back({"wfse.state[" + e.name(z) + "]", "final weight must be finite and nonnegative"});
    }
  }
  for (std::size_t i = 0; i < e.transitions.size(); ++i) {
    const auto& t = e.transitions[i];
    std::string where = "wfse.transition[" + std::to_string(i) + "]";
    if (t.from >= e.size() || t.to >= e.size()) {
      out.push_back({where, "endpoint is not a state"});
      continue;
    }
    where += " (" + e.name(t.from) + " -> " + e.name(t.to) + ")";
    if (t.exec.is_eps() && t.spec.is_eps()) {
      out.push_back({where, "pair (eps/eps) is not a legal edit"});
    }
    if (!std::isfinite(t.weight) || t.weight < 0) {
      out.push_back({where, "weight must be finite and nonnegative"});
    }
    for (const auto* s : {&t.exec, &t.spec}) {
      if (!s->is_eps() && !s->symbol().subset_of(e.ap)) {
        out.push_back({where, "symbol " + s->str() + " uses a proposition outside the AP set"});
      }
    }
  }
  auto cycle = detail::zero_insertion_cycle(e);
  if (!cycle.empty()) {
    std::string states;
    for (std::size_t z : cycle) states += (states.empty() ? "" : ", ") + e.name(z);
    out.push_back({"wfse", "zero-weight cycle of (eps/symbol) edits through " + states});
  }
  return out;
}

/// True iff no two transitions share (state, exec, spec).
inline bool is_deterministic(const EditSystem& e) {
  std::set<std::tuple<std::size_t, EditSymbol, EditSymbol>> seen;
  for (const auto& t : e.transitions) {
    if (!seen.emplace(t.from, t.exec, t.spec).second) return false;
  }
  return true;
}

/// Minimum cost with which `e` transforms exec_word into spec_word, final
/// weight included; nullopt when the pair is outside the relation.
inline std::optional<double> wfse_transduce(const EditSystem& e, const Word& exec_word, const Word& spec_word) {
  const std::size_t n = exec_word.size();
  const std::size_t m = spec_word.size();
  const std::size_t nz = e.size();
  if (nz == 0 || e.initial >= nz) return std::nullopt;
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto at = [&](std::size_t i, std::size_t j, std::size_t z) { return (i * (m + 1) + j) * nz + z; };
  std::vector<double> dist((n + 1) * (m + 1) * nz, inf);
  dist[at(0, 0, e.initial)] = 0.0;
  const auto adj = e.adjacency();

  // Every edit advances i, j or both, so row-major order is topological.
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      for (std::size_t z = 0; z < nz; ++z) {
        const double d = dist[at(i, j, z)];
        if (d == inf) continue;
        for (std::size_t ti : adj[z]) {
          const auto& t = e.transitions[ti];
          std::size_t ni = i, nj = j;
          if (!t.exec.is_eps()) {
            if (i == n || exec_word[i] != t.exec.symbol()) continue;
            ++ni;
          }
          if (!t.spec.is_eps()) {
            if (j == m || spec_word[j] != t.spec.symbol()) continue;
            ++nj;
          }
          if (ni == i && nj == j) continue;
          double& target = dist[at(ni, nj, t.to)];
          target = std::min(target, d + t.weight);
        }
      }
    }
  }
  double best = inf;
  for (std::size_t z = 0; z < nz; ++z) {
    if (e.accepting(z)) best = std::min(best, dist[at(n, m, z)] + e.final_weight(z));
  }
  if (best == inf) return std::nullopt;
  return best;
}

}  // namespace relaxplan

#endif  // RELAXPLAN_EDIT_SYSTEM_HPP
