#ifndef RELAXPLAN_PLANNING_HPP
#define RELAXPLAN_PLANNING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relaxplan/builders.hpp"
#include "relaxplan/combiner.hpp"
#include "relaxplan/dfa.hpp"
#include "relaxplan/edit_system.hpp"
#include "relaxplan/error.hpp"
#include "relaxplan/extended_ts.hpp"
#include "relaxplan/product.hpp"
#include "relaxplan/shortest_path.hpp"
#include "relaxplan/transition_system.hpp"
#include "relaxplan/twtl.hpp"
#include "relaxplan/twtl_automaton.hpp"

namespace relaxplan {

struct PlanResult {
  bool feasible = false;
  std::optional<EmptyProduct> diagnosis;  // set when the product is empty

  std::vector<std::size_t> product_states;
  std::vector<std::size_t> product_edges;
  std::vector<std::size_t> trajectory;  // original TS states
  std::vector<std::string> trajectory_names;
  Word exec_word;
  Word spec_word;
  std::vector<EditLogEntry> edits;  // step indexes exec_word

  double task_cost = 0.0;      // C_E
  double temporal_cost = 0.0;  // C_TR, time steps
  double combined = 0.0;
  std::optional<double> lambda;
  std::optional<TemporalRelaxation> relaxation;

  std::size_t product_state_count = 0;
  std::size_t product_edge_count = 0;
};

struct ParetoEntry {
  double lambda_lo = 0.0;
  double lambda_hi = 1.0;
  PlanResult plan;
};

struct ParetoFront {
  bool feasible = false;
  std::optional<EmptyProduct> diagnosis;
  std::vector<ParetoEntry> entries;  // by increasing λ: decreasing C_E, increasing C_TR

  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < entries.size(); ++i) out.push_back(entries[i].lambda_lo);
    return out;
  }
};

namespace detail {

inline double temporal_weight(const ProductEdge& e) { return e.kind == ProductEdgeKind::Start ? 0.0 : 1.0; }

// Fills path, projection and per-objective costs. `ext` maps extended TS
// states back to the original ones when given.
inline PlanResult make_result(const ProductAutomaton& pa, const ProductPath& path, const TransitionSystem& ts,
                              const ExtendedTS* ext) {
  PlanResult r;
  r.feasible = true;
  r.product_state_count = pa.size();
  r.product_edge_count = pa.edges.size();
  r.product_states = path.states;
  r.product_edges = path.edges;
  auto proj = project(pa, path.edges);
  r.trajectory = ext ? ext->project(proj.trajectory) : proj.trajectory;
  for (auto x : r.trajectory) r.trajectory_names.push_back(ts.name(x));
  r.exec_word = std::move(proj.exec_word);
  r.spec_word = std::move(proj.spec_word);
  r.edits = std::move(proj.edits);
  for (auto ei : path.edges) {
    r.task_cost += pa.edges[ei].weight;
    r.temporal_cost += temporal_weight(pa.edges[ei]);
  }
  if (!path.states.empty()) r.task_cost += pa.exit_weight[path.states.back()];
  return r;
}

inline PlanResult infeasible(const ProductAutomaton& pa) {
  PlanResult r;
  r.diagnosis = pa.empty_reason;
  r.product_state_count = pa.size();
  r.product_edge_count = pa.edges.size();
  return r;
}

inline void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
}

// Blended search. At the endpoints the other objective breaks ties.
inline std::optional<ProductPath> solve_blend(const ProductAutomaton& pa, double lambda) {
  PathWeights w;
  for (const auto& e : pa.edges) {
    const double ce = e.weight, ctr = temporal_weight(e);
    if (lambda == 0.0) {
      w.primary.push_back(ctr);
      w.secondary.push_back(ce);
    } else if (lambda == 1.0) {
      w.primary.push_back(ce);
      w.secondary.push_back(ctr);
    } else {
      w.primary.push_back(lambda * ce + (1.0 - lambda) * ctr);
      w.secondary.push_back(ctr);
    }
  }
  for (std::size_t q = 0; q < pa.size(); ++q) {
    const double f = pa.exit_weight[q];
    if (lambda == 0.0) {
      w.exit_primary.push_back(0.0);
      w.exit_secondary.push_back(f);
    } else if (lambda == 1.0) {
      w.exit_primary.push_back(f);
      w.exit_secondary.push_back(0.0);
    } else {
      w.exit_primary.push_back(lambda * f);
      w.exit_secondary.push_back(0.0);
    }
  }
  return shortest_path(pa, w);
}

struct TemporalSetup {
  ExtendedTS ext;
  AnnotatedDFA automaton;
};

inline TemporalSetup temporal_setup(const TransitionSystem& ts, const TwtlFormula& phi, const ApSet& extra_ap) {
  TemporalSetup s{extend_ts(ts), {}};
  s.automaton = twtl_to_annotated_dfa(phi, ap_union(ts.ap, extra_ap));
  return s;
}

inline PlanResult bi_result(const ProductAutomaton& pa, const ProductPath& path, const TemporalSetup& setup,
                            const TransitionSystem& ts, double lambda) {
  auto r = make_result(pa, path, ts, &setup.ext);
  r.lambda = lambda;
  r.combined = lambda * r.task_cost + (1.0 - lambda) * r.temporal_cost;
  r.relaxation = ltr_of_run(setup.automaton, r.spec_word);
  return r;
}

}  // namespace detail

/// Minimum-relaxation plan: shortest accepting path of the product.
inline PlanResult plan(const TransitionSystem& ts, const SpecDFA& dfa, const EditSystem& wfse,
                       const WeightCombiner& combiner = WeightCombiner::additive()) {
  const auto pa = build_product(ts, wfse, dfa, combiner);
  auto path = shortest_path(pa);
  if (!path) return detail::infeasible(pa);
  auto r = detail::make_result(pa, *path, ts, nullptr);
  r.combined = r.task_cost;
  return r;
}

/// Pass-through edit system over the TS labels only.
inline EditSystem trivial_wfse(const TransitionSystem& ts, const ApSet& ap) {
  EditSystem e;
  e.ap = ap;
  auto z = e.add_state("z0", true);
  std::vector<APSymbol> labels(ts.labels());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  for (const auto& l : labels) e.add_transition(z, l, l, 0.0, z);
  return e;
}

/// Minimum deadline relaxation of a TWTL formula on a timed TS.
inline PlanResult plan_temporal(const TransitionSystem& ts, const TwtlFormula& phi) {
  const auto setup = detail::temporal_setup(ts, phi, {});
  const auto e0 = trivial_wfse(setup.ext.ts, setup.automaton.dfa.ap);
  const auto pa = build_product(setup.ext.ts, e0, setup.automaton.dfa, WeightCombiner::transition_count());
  auto path = shortest_path(pa);
  if (!path) return detail::infeasible(pa);
  auto r = detail::make_result(pa, *path, ts, &setup.ext);
  r.combined = r.temporal_cost;
  r.relaxation = ltr_of_run(setup.automaton, r.spec_word);
  return r;
}

/// λ·C_E + (1-λ)·C_TR on extended TS × WFSE × annotated DFA.
inline PlanResult plan_bi(const TransitionSystem& ts, const TwtlFormula& phi, const EditSystem& wfse, double lambda,
                          const WeightCombiner& combiner = WeightCombiner::additive()) {
  detail::check_lambda(lambda);
  const auto setup = detail::temporal_setup(ts, phi, wfse.ap);
  const auto pa = build_product(setup.ext.ts, wfse, setup.automaton.dfa, combiner);
  auto path = detail::solve_blend(pa, lambda);
  if (!path) return detail::infeasible(pa);
  return detail::bi_result(pa, *path, setup, ts, lambda);
}

/// Pareto front of (C_E, C_TR) by recursive splitting on the λ where the
/// optimal cost lines of two known points cross.
inline ParetoFront pareto(const TransitionSystem& ts, const TwtlFormula& phi, const EditSystem& wfse,
                          const WeightCombiner& combiner = WeightCombiner::additive()) {
  const auto setup = detail::temporal_setup(ts, phi, wfse.ap);
  const auto pa = build_product(setup.ext.ts, wfse, setup.automaton.dfa, combiner);
  ParetoFront front;
  auto solve = [&](double lambda) {
    auto path = detail::solve_blend(pa, lambda);
    if (!path) throw Error("internal error: feasible product lost its path");
    return detail::bi_result(pa, *path, setup, ts, lambda);
  };
  auto lo_path = detail::solve_blend(pa, 0.0);
  if (!lo_path) {
    front.diagnosis = pa.empty_reason;
    return front;
  }
  front.feasible = true;
  auto low = detail::bi_result(pa, *lo_path, setup, ts, 0.0);
  auto high = solve(1.0);

  auto same = [](const PlanResult& a, const PlanResult& b) {
    return detail::approx_equal(a.task_cost, b.task_cost) && detail::approx_equal(a.temporal_cost, b.temporal_cost);
  };
  std::vector<ParetoEntry> pieces;
  auto rec = [&](auto&& self, double lo, double hi, const PlanResult& l, const PlanResult& h) -> void {
    if (same(l, h)) {
      pieces.push_back({lo, hi, l});
      return;
    }
    const double dtr = h.temporal_cost - l.temporal_cost;
    const double de = l.task_cost - h.task_cost;
    const double star = std::clamp(dtr / (de + dtr), lo, hi);
    auto m = solve(star);
    const double at_star = star * l.task_cost + (1.0 - star) * l.temporal_cost;
    const double tol = kCostTolerance * std::max(1.0, std::fabs(at_star));
    if (m.combined < at_star - tol && !same(m, l) && !same(m, h)) {
      self(self, lo, star, l, m);
      self(self, star, hi, m, h);
    } else {
      pieces.push_back({lo, star, l});
      pieces.push_back({star, hi, h});
    }
  };
  rec(rec, 0.0, 1.0, low, high);

  for (auto& p : pieces) {
    if (!front.entries.empty() && same(front.entries.back().plan, p.plan)) {
      front.entries.back().lambda_hi = p.lambda_hi;
    } else {
      front.entries.push_back(std::move(p));
    }
  }
  // Degenerate zero-width intervals come from ties at an endpoint.
  std::vector<ParetoEntry> kept;
  for (auto& e : front.entries) {
    if (e.lambda_hi > e.lambda_lo || front.entries.size() == 1) kept.push_back(std::move(e));
  }
  front.entries = std::move(kept);
  for (std::size_t i = 1; i < front.entries.size(); ++i) front.entries[i].lambda_lo = front.entries[i - 1].lambda_hi;
  front.entries.front().lambda_lo = 0.0;
  front.entries.back().lambda_hi = 1.0;
  return front;
}

}  // namespace relaxplan

#endif  // RELAXPLAN_PLANNING_HPP
