#ifndef RELAXPLAN_ORACLE_HPP
#define RELAXPLAN_ORACLE_HPP

// Brute-force reference implementations for certifying small instances.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relaxplan/combiner.hpp"
#include "relaxplan/dfa.hpp"
#include "relaxplan/edit_system.hpp"
#include "relaxplan/error.hpp"
#include "relaxplan/symbol.hpp"
#include "relaxplan/transition_system.hpp"
#include "relaxplan/twtl.hpp"

namespace relaxplan {

struct OracleBudget {
  std::size_t max_trajectory_length = 8;  // states, x0 included
  std::size_t max_spec_length = 8;
  std::size_t max_candidates = 10000000;
};

struct OracleResult {
  std::optional<double> cost;
  std::vector<std::size_t> trajectory;
  Word spec_word;
  std::size_t candidates = 0;
};

namespace detail {

// Alignment of a trajectory with a spec word through the edit system, as a
// table over (exec symbols consumed, spec symbols consumed, edit state). One
// row holds every (spec position, edit state) cell for a fixed exec prefix,
// so trajectories that share a prefix share rows.
class Aligner {
public:
  Aligner(const Word& spec, const EditSystem& e, const WeightCombiner& combiner)
      : spec_(spec), e_(e), combiner_(combiner), width_((spec.size() + 1) * e.size()) {
    for (std::size_t i = 0; i < e.transitions.size(); ++i) {
      (e.transitions[i].exec.is_eps() ? inserts_ : moves_).push_back(i);
    }
  }

  std::size_t width() const noexcept { return width_; }

  void first_row(double* row) const {
    std::fill(row, row + width_, kInf);
    row[cell(0, e_.initial)] = 0.0;
    close(row);
  }

  // Row after one more exec symbol, the label of a TS state entered with
  // weight `ts_weight`.
  void next_row(const double* prev, double* row, const APSymbol& label, double ts_weight, bool virtual_start) const {
    std::fill(row, row + width_, kInf);
    const std::size_t m = spec_.size();
    for (auto ti : moves_) {
      const auto& t = e_.transitions[ti];
      if (t.exec.symbol() != label) continue;
      const double w = combiner_(EdgeContext{ts_weight, t.weight, virtual_start, true});
      for (std::size_t j = 0; j <= m; ++j) {
        const double cur = prev[cell(j, t.from)];
        if (cur == kInf) continue;
        std::size_t nj = j;
        if (!t.spec.is_eps()) {
          if (j == m || spec_[j] != t.spec.symbol()) continue;
          ++nj;
        }
        double& target = row[cell(nj, t.to)];
        target = std::min(target, cur + w);
      }
    }
    close(row);
  }

  std::optional<double> finish(const double* row) const {
    double best = kInf;
    for (std::size_t z = 0; z < e_.size(); ++z) {
      if (e_.accepting(z)) best = std::min(best, row[cell(spec_.size(), z)] + e_.final_weight(z));
    }
    if (best == kInf) return std::nullopt;
    return best;
  }

private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  std::size_t cell(std::size_t j, std::size_t z) const { return j * e_.size() + z; }

  // Insertions advance the spec position only, so one pass in increasing
  // spec position reaches every cell.
  void close(double* row) const {
    const std::size_t m = spec_.size();
    for (std::size_t j = 0; j < m; ++j) {
      for (auto ti : inserts_) {
        const auto& t = e_.transitions[ti];
        const double cur = row[cell(j, t.from)];
        if (cur == kInf || spec_[j] != t.spec.symbol()) continue;
        double& target = row[cell(j + 1, t.to)];
        target = std::min(target, cur + combiner_(EdgeContext{0.0, t.weight, false, false}));
      }
    }
  }

  const Word& spec_;
  const EditSystem& e_;
  const WeightCombiner& combiner_;
  std::size_t width_;
  std::vector<std::size_t> moves_, inserts_;
};

}  // namespace detail

/// Cheapest combined cost of aligning one trajectory with one spec word,
/// mirroring the product's edge weights. `step_weight[i]` is the weight of
/// the TS transition into `traj[i]` (1 for the initial state).
inline std::optional<double> aligned_cost(const TransitionSystem& ts, const std::vector<std::size_t>& traj,
                                          const std::vector<double>& step_weight, const Word& spec,
                                          const EditSystem& e, const WeightCombiner& combiner) {
  if (e.empty()) return std::nullopt;
  detail::Aligner al(spec, e, combiner);
  std::vector<double> a(al.width()), b(al.width());
  al.first_row(a.data());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    al.next_row(a.data(), b.data(), ts.label(traj[i]), step_weight[i], i == 0);
    std::swap(a, b);
  }
  return al.finish(a.data());
}

/// Enumerates every TS run and every accepted spec word within the budget
/// and returns the cheapest pair.
inline OracleResult brute_force_plan(const TransitionSystem& ts, const SpecDFA& dfa, const EditSystem& wfse,
                                     const WeightCombiner& combiner, const OracleBudget& budget = {}) {
  OracleResult out;
  if (ts.size() == 0 || dfa.empty() || wfse.empty()) return out;

  // Cheapest parallel edge per ordered pair.
  std::map<std::pair<std::size_t, std::size_t>, double> w;
  for (const auto& t : ts.transitions) {
    auto [it, fresh] = w.emplace(std::make_pair(t.from, t.to), static_cast<double>(t.weight));
    if (!fresh) it->second = std::min(it->second, static_cast<double>(t.weight));
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> succ(ts.size());
  for (const auto& [k, v] : w) succ[k.first].push_back({k.second, v});

  // Every run from the initial state, as a prefix tree in depth-first
  // order. Each node is itself a run.
  struct Node {
    std::size_t parent, state, depth;
    double weight;
  };
  constexpr auto none = static_cast<std::size_t>(-1);
  std::vector<Node> runs;
  {
    auto walk = [&](auto&& self, std::size_t parent, std::size_t x, double wx, std::size_t depth) -> void {
      const auto me = runs.size();
      runs.push_back({parent, x, depth, wx});
      if (runs.size() > budget.max_candidates) throw BudgetExceeded("too many trajectories for the oracle budget");
      if (depth >= budget.max_trajectory_length) return;
      for (const auto& [y, wy] : succ[x]) self(self, me, y, wy, depth + 1);
    };
    walk(walk, none, ts.initial, 1.0, 1);
  }

  // Accepted spec words are walked twice: once to count them against the
  // budget, then again to evaluate, so they are never held in memory.
  auto walk_words = [&](auto&& visit) {
    Word word;
    auto walk = [&](auto&& self, std::size_t s) -> void {
      if (dfa.accepting(s)) visit(word);
      if (word.size() >= budget.max_spec_length) return;
      for (const auto& [sym, to] : dfa.transitions_from(s)) {
        word.push_back(sym);
        self(self, to);
        word.pop_back();
      }
    };
    walk(walk, dfa.initial);
  };
  const std::size_t word_limit = budget.max_candidates / runs.size();
  std::size_t word_count = 0;
  walk_words([&](const Word&) {
    if (++word_count > word_limit) {
      throw BudgetExceeded("oracle would examine more than " + std::to_string(budget.max_candidates) +
                           " candidates (" + std::to_string(runs.size()) + " trajectories)");
    }
  });

  out.candidates = runs.size() * word_count;
  std::size_t best_run = none;
  std::vector<double> rows;
  walk_words([&](const Word& word) {
    detail::Aligner al(word, wfse, combiner);
    const std::size_t width = al.width();
    rows.resize((budget.max_trajectory_length + 1) * width);
    al.first_row(rows.data());
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const auto& n = runs[k];
      double* row = rows.data() + n.depth * width;
      al.next_row(row - width, row, ts.label(n.state), n.weight, n.depth == 1);
      auto c = al.finish(row);
      if (c && (!out.cost || *c < *out.cost - 1e-12)) {
        out.cost = c;
        out.spec_word = word;
        best_run = k;
      }
    }
  });
  for (auto k = best_run; k != none; k = runs[k].parent) out.trajectory.push_back(runs[k].state);
  std::reverse(out.trajectory.begin(), out.trajectory.end());
  return out;
}

struct WithinTiming {
  std::size_t start = 0;
  std::optional<std::size_t> completion;
};

struct TwtlVerdict {
  bool satisfied = false;
  std::optional<std::size_t> completion;
  std::map<int, WithinTiming> withins;  // by id, outermost withins only
};

/// Per-within deadline override: nullopt keeps b, a value v means b + v,
/// and `infinite` removes the deadline.
struct DeadlineRelaxation {
  bool infinite = false;
  std::vector<int> tau;  // by id - 1, missing entries mean 0
};

namespace detail {

class SemanticTwtl {
public:
  SemanticTwtl(const Word& w, const DeadlineRelaxation& r) : word_(w), relax_(r) {}

  std::optional<std::size_t> earliest(const TwtlFormula& f, std::size_t k, bool record) {
    using K = TwtlFormula::Kind;
    const std::size_t n = word_.size();
    switch (f.kind) {
      case K::Hold: {
        const std::size_t end = k + static_cast<std::size_t>(f.duration);
        if (end >= n) return std::nullopt;
        for (std::size_t i = k; i <= end; ++i) {
          const bool v = f.prop == "true" || word_[i].contains(f.prop);
          if (v == f.negated) return std::nullopt;
        }
        return end;
      }
      case K::And: {
        auto l = earliest(f.children[0], k, record);
        auto r = earliest(f.children[1], k, record);
        if (!l || !r) return std::nullopt;
        return std::max(*l, *r);
      }
      case K::Or: {
        auto l = earliest(f.children[0], k, record);
        auto r = earliest(f.children[1], k, record);
        if (!l) return r;
        if (!r) return l;
        return std::min(*l, *r);
      }
      case K::Concat: {
        auto l = earliest(f.children[0], k, record);
        if (!l) return std::nullopt;
        return earliest(f.children[1], *l + 1, record);
      }
      case K::Within: {
        std::optional<std::size_t> deadline;
        if (!relax_.infinite) {
          int extra = 0;
          const auto j = static_cast<std::size_t>(f.within_id - 1);
          if (f.within_id > 0 && j < relax_.tau.size()) extra = relax_.tau[j];
          deadline = k + static_cast<std::size_t>(std::max(0, f.upper + extra));
        }
        std::optional<std::size_t> best;
        for (std::size_t i = k + static_cast<std::size_t>(f.lower); i < n; ++i) {
          if (deadline && i > *deadline) break;
          if (best && i > *best) break;
          auto e = earliest(f.children[0], i, false);
          if (e && (!best || *e < *best)) best = e;
        }
        if (best && deadline && *best > *deadline) best.reset();
        if (record) withins_[f.within_id] = WithinTiming{k, best};
        return best;
      }
    }
    return std::nullopt;
  }

  std::map<int, WithinTiming> withins_;

private:
  const Word& word_;
  const DeadlineRelaxation& relax_;
};

}  // namespace detail

/// Direct recursive evaluation: φ holds on the word if it completes at some
/// step of the word when started at 0.
inline TwtlVerdict semantic_twtl_check(const TwtlFormula& phi, const Word& word, const DeadlineRelaxation& relax = {}) {
  TwtlFormula f = phi;
  number_formula(f);
  detail::SemanticTwtl eval(word, relax);
  TwtlVerdict v;
  v.completion = eval.earliest(f, 0, true);
  v.satisfied = v.completion.has_value();
  for (auto& [id, t] : eval.withins_) {
    if (t.completion && v.completion && *t.completion > *v.completion) t.completion.reset();
  }
  v.withins = std::move(eval.withins_);
  return v;
}

}  // namespace relaxplan

#endif  // RELAXPLAN_ORACLE_HPP
