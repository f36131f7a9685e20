#ifndef RELAXPLAN_BUILDERS_HPP
#define RELAXPLAN_BUILDERS_HPP

// Edit systems for the classic relaxation problems: canonical (no
// relaxation), minimum violation, minimum revision, hard/soft constraints
// and partial satisfaction.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "relaxplan/dfa.hpp"
#include "relaxplan/edit_system.hpp"
#include "relaxplan/error.hpp"
#include "relaxplan/symbol.hpp"

namespace relaxplan {

/// c(required, performed): the price of executing `performed` where the
/// specification asked for `required`. The diagonal is zero; pairs without
/// an entry are not permitted substitutions.
class SubstitutionCostMatrix {
public:
  ApSet ap;

  SubstitutionCostMatrix() = default;
  explicit SubstitutionCostMatrix(ApSet ap_set) : ap(std::move(ap_set)) {}

  /// Every off-diagonal pair over 2^ap costs `cost`.
  static SubstitutionCostMatrix uniform(const ApSet& ap_set, double cost) {
    SubstitutionCostMatrix m(ap_set);
    const auto letters = power_set(ap_set);
    for (const auto& a : letters) {
      for (const auto& b : letters) {
        if (a != b) m.set(a, b, cost);
      }
    }
    return m;
  }

  void set(const APSymbol& required, const APSymbol& performed, double cost) {
    if (!std::isfinite(cost) || cost < 0) {
      throw InvalidModel("substitution cost " + required.str() + " -> " + performed.str() + " must be finite and nonnegative");
    }
    if (required == performed) {
      if (cost != 0) throw InvalidModel("substitution cost of " + required.str() + " by itself must be 0");
      return;
    }
    entries_[{required, performed}] = cost;
  }

  std::optional<double> cost(const APSymbol& required, const APSymbol& performed) const {
    if (required == performed) return 0.0;
    auto it = entries_.find({required, performed});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::pair<APSymbol, APSymbol>, double>& entries() const noexcept { return entries_; }

private:
  std::map<std::pair<APSymbol, APSymbol>, double> entries_;
};

/// Pass-through: (σ/σ, 0) for every σ.
inline EditSystem build_cp(const ApSet& ap) {
  EditSystem e;
  e.ap = ap;
  auto z = e.add_state("z0", true);
  for (const auto& s : power_set(ap)) e.add_transition(z, s, s, 0.0, z);
  return e;
}

/// Pass-through plus skipping any spec symbol at `deletion_cost` each.
inline EditSystem build_mvp(const ApSet& ap, double deletion_cost) {
  if (!std::isfinite(deletion_cost) || deletion_cost < 0) throw InvalidModel("deletion cost must be finite and nonnegative");
  EditSystem e;
  e.ap = ap;
  auto z = e.add_state("z0", true);
  for (const auto& s : power_set(ap)) {
    e.add_transition(z, s, s, 0.0, z);
    e.add_transition(z, EditSymbol::eps(), s, deletion_cost, z);
  }
  return e;
}

/// Symbol-for-symbol substitutions; relates equal-length words only.
inline EditSystem build_mrp(const SubstitutionCostMatrix& matrix) {
  EditSystem e;
  e.ap = matrix.ap;
  auto z = e.add_state("z0", true);
  for (const auto& s : power_set(matrix.ap)) e.add_transition(z, s, s, 0.0, z);
  for (const auto& [pair, c] : matrix.entries()) {
    const auto& [required, performed] = pair;
    if (!required.subset_of(matrix.ap) || !performed.subset_of(matrix.ap)) {
      throw UnknownProposition("substitution " + required.str() + " -> " + performed.str() + " leaves the AP set");
    }
    e.add_transition(z, performed, required, c, z);
  }
  return e;
}

/// Tracks the soft constraint alongside the word; ending outside its
/// accepting set costs `penalty`. `ap` may extend the soft DFA's AP set.
inline EditSystem build_hsc(const SpecDFA& soft, double penalty, const ApSet& ap = {}) {
  if (!std::isfinite(penalty) || penalty < 0) throw InvalidModel("soft-constraint penalty must be finite and nonnegative");
  const SpecDFA dfa = ap.empty() || ap == soft.ap ? soft : widen(soft, ap);
  const auto letters = power_set(dfa.ap);
  EditSystem e;
  e.ap = dfa.ap;
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    e.add_state(dfa.name(s), true, dfa.accepting(s) ? 0.0 : penalty);
  }
  e.initial = dfa.initial;
  std::size_t sink = npos;
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    for (const auto& sym : letters) {
      auto to = dfa.step(s, sym);
      if (!to) {
        if (sink == npos) {
          std::string name = "reject";
          while (e.has_state(name)) name += "_";
          sink = e.add_state(name, true, penalty);
        }
        to = sink;
      }
      e.add_transition(s, sym, sym, 0.0, *to);
    }
  }
  if (sink != npos) {
    for (const auto& sym : letters) e.add_transition(sink, sym, sym, 0.0, sink);
  }
  return e;
}

/// Pass-through prefix, then any number of spec-only continuation symbols,
/// each costing 1.
inline EditSystem build_ps(const ApSet& ap) {
  EditSystem e;
  e.ap = ap;
  auto run = e.add_state("z0", true);
  auto cont = e.add_state("z1", true);
  for (const auto& s : power_set(ap)) {
    e.add_transition(run, s, s, 0.0, run);
    e.add_transition(run, EditSymbol::eps(), s, 1.0, cont);
    e.add_transition(cont, EditSymbol::eps(), s, 1.0, cont);
  }
  return e;
}

}  // namespace relaxplan

#endif  // RELAXPLAN_BUILDERS_HPP
