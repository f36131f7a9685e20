#ifndef RELAXPLAN_COMBINER_HPP
#define RELAXPLAN_COMBINER_HPP

#include <functional>
#include <string>
#include <utility>

#include "relaxplan/error.hpp"

namespace relaxplan {

/// Inputs to a per-edge weight combination.
struct EdgeContext {
  double ts_weight = 0.0;     // 0 when the TS stays put, 1 on the virtual start edge
  double edit_weight = 0.0;
  bool virtual_start = false;
  bool ts_moves = true;
};

/// f_w(w_T, w_E) for product edges.
///
/// Additive and TransitionCount treat the virtual start edge as free on the
/// TS side, so additive task cost is the trajectory weight plus edits and
/// transition count is the number of time steps.
class WeightCombiner {
public:
  enum class Kind { Additive, Multiplicative, Rate, TransitionCount, Custom };

  static WeightCombiner additive() { return WeightCombiner(Kind::Additive, "additive"); }
  static WeightCombiner multiplicative() { return WeightCombiner(Kind::Multiplicative, "multiplicative"); }
  static WeightCombiner rate() { return WeightCombiner(Kind::Rate, "rate"); }
  static WeightCombiner transition_count() { return WeightCombiner(Kind::TransitionCount, "count"); }
  static WeightCombiner custom(std::string name, std::function<double(const EdgeContext&)> fn) {
    WeightCombiner c(Kind::Custom, std::move(name));
    c.fn_ = std::move(fn);
    return c;
  }

  /// Parses additive, multiplicative, rate or count.
  static WeightCombiner from_name(const std::string& name) {
    if (name == "additive") return additive();
    if (name == "multiplicative") return multiplicative();
    if (name == "rate") return rate();
    if (name == "count") return transition_count();
    throw InvalidModel("unknown combiner '" + name + "'");
  }

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  double operator()(const EdgeContext& c) const {
    switch (kind_) {
      case Kind::Additive: return (c.virtual_start ? 0.0 : c.ts_weight) + c.edit_weight;
      case Kind::Multiplicative: return c.ts_weight * c.edit_weight;
      case Kind::Rate: return c.ts_weight * (1.0 + c.edit_weight);
      case Kind::TransitionCount: return c.virtual_start ? 0.0 : 1.0;
      case Kind::Custom: return fn_(c);
    }
    return 0.0;
  }

private:
  WeightCombiner(Kind k, std::string name) : kind_(k), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
  std::function<double(const EdgeContext&)> fn_;
};

}  // namespace relaxplan

#endif  // RELAXPLAN_COMBINER_HPP
