#ifndef RELAXPLAN_TESTS_SUPPORT_HPP
#define RELAXPLAN_TESTS_SUPPORT_HPP

// Random instance generators and independent reference algorithms shared by
// the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "relaxplan/relaxplan.hpp"

namespace testing_support {

namespace rp = relaxplan;

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline rp::ApSet make_ap(std::size_t k) {
  static const char* names[] = {"a", "b", "c", "d", "e", "f"};
  std::vector<std::string> v(names, names + k);
  return rp::make_ap_set(v);
}

inline rp::APSymbol random_symbol(Rng& rng, const rp::ApSet& ap) {
  std::vector<std::string> props;
  for (const auto& p : ap) {
    if (coin(rng, 0.5)) props.push_back(p);
  }
  return rp::APSymbol(props);
}

inline rp::Word random_word(Rng& rng, const rp::ApSet& ap, std::size_t len) {
  rp::Word w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(random_symbol(rng, ap));
  return w;
}

/// Every word over 2^ap of length exactly `len`.
inline std::vector<rp::Word> all_words(const rp::ApSet& ap, std::size_t len) {
  const auto letters = rp::power_set(ap);
  std::vector<rp::Word> out{{}};
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<rp::Word> next;
    for (const auto& w : out) {
      for (const auto& l : letters) {
        auto v = w;
        v.push_back(l);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Every word of length 0..max_len.
inline std::vector<rp::Word> all_words_upto(const rp::ApSet& ap, std::size_t max_len) {
  std::vector<rp::Word> out;
  for (std::size_t n = 0; n <= max_len; ++n) {
    auto w = all_words(ap, n);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

inline rp::TransitionSystem random_ts(Rng& rng, std::size_t n, const rp::ApSet& ap, double density = 0.35,
                                      int max_weight = 4) {
  rp::TransitionSystem ts;
  ts.ap = ap;
  for (std::size_t i = 0; i < n; ++i) ts.add_state("x" + std::to_string(i), random_symbol(rng, ap));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (coin(rng, density)) ts.add_transition(i, j, uniform(rng, 1, max_weight));
    }
  }
  ts.initial = 0;
  return ts;
}

inline rp::SpecDFA random_dfa(Rng& rng, std::size_t n, const rp::ApSet& ap, double density = 0.5) {
  rp::SpecDFA dfa;
  dfa.ap = ap;
  for (std::size_t i = 0; i < n; ++i) dfa.add_state("s" + std::to_string(i), coin(rng, 0.35));
  if (std::none_of(dfa.names().begin(), dfa.names().end(),
                   [&](const std::string& s) { return dfa.accepting(dfa.index_of(s)); })) {
    dfa.set_accepting(static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(n) - 1)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& l : rp::power_set(ap)) {
      if (coin(rng, density)) dfa.add_transition(i, l, static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(n) - 1)));
    }
  }
  return dfa;
}

/// Random WFSE that keeps a pass-through loop on state 0 so many instances
/// stay feasible. Insertions of spec symbols always cost at least 1.
inline rp::EditSystem random_wfse(Rng& rng, std::size_t n, const rp::ApSet& ap, int extra = 6) {
  rp::EditSystem e;
  e.ap = ap;
  const auto letters = rp::power_set(ap);
  for (std::size_t i = 0; i < n; ++i) {
    const bool acc = i == 0 || coin(rng, 0.4);
    e.add_state("z" + std::to_string(i), acc, acc && coin(rng, 0.3) ? uniform(rng, 0, 3) : 0.0);
  }
  for (const auto& l : letters) e.add_transition(0, l, l, 0.0, 0);
  auto pick = [&] { return letters[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(letters.size()) - 1))]; };
  for (int k = 0; k < extra; ++k) {
    const auto from = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(n) - 1));
    const auto to = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(n) - 1));
    switch (uniform(rng, 0, 3)) {
      case 0: e.add_transition(from, pick(), pick(), uniform(rng, 0, 5), to); break;
      case 1: e.add_transition(from, rp::EditSymbol::eps(), pick(), uniform(rng, 1, 5), to); break;
      case 2: e.add_transition(from, pick(), rp::EditSymbol::eps(), uniform(rng, 0, 5), to); break;
      default: {
        auto s = pick();
        e.add_transition(from, s, s, uniform(rng, 0, 3), to);
      }
    }
  }
  return e;
}

/// Textbook Bellman-Ford on (primary) weights with per-vertex exits.
inline std::optional<double> bellman_ford(std::size_t n, std::size_t source, const std::vector<rp::WeightedArc>& arcs,
                                          const std::vector<std::optional<rp::ExitCost>>& exits) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n, inf);
  d[source] = 0;
  for (std::size_t round = 0; round + 1 < n + 1; ++round) {
    bool changed = false;
    for (const auto& a : arcs) {
      if (d[a.from] + a.primary < d[a.to]) {
        d[a.to] = d[a.from] + a.primary;
        changed = true;
      }
    }
    if (!changed) break;
  }
  double best = inf;
  for (std::size_t v = 0; v < n; ++v) {
    if (exits[v] && d[v] < inf) best = std::min(best, d[v] + exits[v]->primary);
  }
  if (best == inf) return std::nullopt;
  return best;
}

/// Random TWTL formula. `budget` bounds the horizon.
inline rp::TwtlFormula random_twtl(Rng& rng, const rp::ApSet& ap, int budget, int depth = 0) {
  auto hold = [&] {
    const int d = uniform(rng, 0, std::min(2, budget));
    const auto& p = ap[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(ap.size()) - 1))];
    return rp::TwtlFormula::hold(d, p, coin(rng, 0.3));
  };
  if (depth >= 3 || budget <= 1) return hold();
  switch (uniform(rng, 0, 4)) {
    case 0: return hold();
    case 1: {
      const int b = budget;
      auto l = random_twtl(rng, ap, b, depth + 1);
      auto r = random_twtl(rng, ap, b, depth + 1);
      return coin(rng, 0.5) ? rp::TwtlFormula::conj(l, r) : rp::TwtlFormula::disj(l, r);
    }
    case 2: {
      const int half = (budget - 1) / 2;
      if (half < 0) return hold();
      auto l = random_twtl(rng, ap, half, depth + 1);
      auto r = random_twtl(rng, ap, budget - 1 - rp::horizon(l), depth + 1);
      return rp::TwtlFormula::concat(l, r);
    }
    default: {
      const int b = uniform(rng, 1, budget);
      const int a = uniform(rng, 0, std::min(2, b));
      auto c = random_twtl(rng, ap, std::max(0, b - a), depth + 1);
      return rp::TwtlFormula::within(c, a, b);
    }
  }
}

struct BiInstance {
  rp::TransitionSystem ts;
  rp::TwtlFormula phi;
  rp::EditSystem wfse;
};

/// Three disjoint ways to satisfy [H^3 T1]^[0,5] from s: reach A and relabel
/// T5 as T1 (cost 6 per step), reach B and relabel T3 (cost 3), or travel
/// to C. Their (C_E, C_TR) are (29,5), (20,8) and (12,12).
inline BiInstance three_path_instance() {
  BiInstance in;
  auto& t = in.ts;
  t.ap = rp::make_ap_set({"T1", "T3", "T5"});
  const auto s = t.add_state("s", rp::APSymbol{});
  const auto a = t.add_state("A", rp::APSymbol{"T5"});
  const auto b = t.add_state("B", rp::APSymbol{"T3"});
  const auto c = t.add_state("C", rp::APSymbol{"T1"});
  t.add_transition(s, a, 2);
  t.add_transition(s, b, 5);
  t.add_transition(s, c, 9);
  for (auto x : {a, b, c}) t.add_transition(x, x, 1);
  in.phi = rp::parse_twtl("[H^3 T1]^[0,5]");
  auto& e = in.wfse;
  e.ap = t.ap;
  const auto z = e.add_state("z0", true);
  for (const auto& l : rp::power_set(t.ap)) e.add_transition(z, l, l, 0, z);
  e.add_transition(z, rp::APSymbol{"T5"}, rp::APSymbol{"T1"}, 6, z);
  e.add_transition(z, rp::APSymbol{"T3"}, rp::APSymbol{"T1"}, 3, z);
  return in;
}

/// Unit-weight line x0 .. x_k where only x_k carries `prop` and loops.
inline rp::TransitionSystem line_ts(std::size_t k, const std::string& prop) {
  rp::TransitionSystem t;
  t.ap = rp::make_ap_set({prop});
  for (std::size_t i = 0; i <= k; ++i) {
    t.add_state("x" + std::to_string(i), i == k ? rp::APSymbol{prop} : rp::APSymbol{});
  }
  for (std::size_t i = 0; i < k; ++i) t.add_transition(i, i + 1, 1);
  t.add_transition(k, k, 1);
  return t;
}

// Direct cost definitions of the relaxation problems, written against the
// words themselves rather than any automaton. `exec` is what was executed,
// `spec` the word the specification sees.
namespace direct {

inline std::optional<double> canonical(const rp::Word& exec, const rp::Word& spec) {
  if (exec == spec) return 0.0;
  return std::nullopt;
}

// exec is spec with some tasks dropped; each dropped task costs `per_task`.
inline std::optional<double> violation(const rp::Word& exec, const rp::Word& spec, double per_task) {
  std::size_t i = 0;
  for (std::size_t j = 0; j < spec.size() && i < exec.size(); ++j) {
    if (spec[j] == exec[i]) ++i;
  }
  if (i != exec.size()) return std::nullopt;
  return per_task * static_cast<double>(spec.size() - exec.size());
}

inline std::optional<double> revision(const rp::Word& exec, const rp::Word& spec, const rp::SubstitutionCostMatrix& c) {
  if (exec.size() != spec.size()) return std::nullopt;
  double total = 0;
  for (std::size_t k = 0; k < exec.size(); ++k) {
    auto ck = c.cost(spec[k], exec[k]);
    if (!ck) return std::nullopt;
    total += *ck;
  }
  return total;
}

inline std::optional<double> soft_constraint(const rp::Word& exec, const rp::Word& spec, const rp::SpecDFA& soft,
                                             double penalty) {
  if (exec != spec) return std::nullopt;
  return rp::dfa_accepts(soft, spec) ? 0.0 : penalty;
}

// exec is a prefix of spec; the rest is the continuation still to do.
inline std::optional<double> partial(const rp::Word& exec, const rp::Word& spec) {
  if (exec.size() > spec.size() || !std::equal(exec.begin(), exec.end(), spec.begin())) return std::nullopt;
  return static_cast<double>(spec.size() - exec.size());
}

}  // namespace direct

}  // namespace testing_support

#endif  // RELAXPLAN_TESTS_SUPPORT_HPP
