#ifndef RELAXPLAN_PRODUCT_HPP
#define RELAXPLAN_PRODUCT_HPP

// Three-way product of a transition system, an edit system and a
// specification DFA. Edges come in three modes:
//   match    (σ/σ')  TS moves onto a state labelled σ, DFA reads σ'
//   exec     (σ/ε)   TS moves, DFA stays
//   spec     (ε/σ')  TS stays with weight 0, DFA reads σ'
// The initial state sits on a virtual TS state before x0.

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "relaxplan/combiner.hpp"
#include "relaxplan/dfa.hpp"
#include "relaxplan/edit_system.hpp"
#include "relaxplan/error.hpp"
#include "relaxplan/symbol.hpp"
#include "relaxplan/transition_system.hpp"
#include "relaxplan/trim.hpp"

namespace relaxplan {

struct ProductState {
  std::size_t x = npos;  // npos is the virtual start
  std::size_t z = 0;
  std::size_t s = 0;

  bool virtual_start() const noexcept { return x == npos; }
  friend auto operator<=>(const ProductState&, const ProductState&) = default;
};

enum class ProductEdgeKind { Start, Match, ExecOnly, SpecOnly };

struct ProductEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  ProductEdgeKind kind = ProductEdgeKind::Match;
  std::size_t ts_transition = npos;  // npos on the start edge and when the TS stays
  std::size_t wfse_transition = 0;
  EditSymbol exec;
  EditSymbol spec;
  double ts_weight = 0.0;
  double edit_weight = 0.0;
  double weight = 0.0;  // combined

  bool ts_moves() const noexcept { return kind != ProductEdgeKind::SpecOnly; }
  EdgeContext context() const {
    return {ts_weight, edit_weight, kind == ProductEdgeKind::Start, ts_moves()};
  }
};

/// Why a product came out empty.
struct EmptyProduct {
  std::size_t reachable_states = 0;
  bool dfa_accepting_reached = false;
  bool wfse_accepting_reached = false;

  std::string describe() const {
    std::string msg = "no accepting product state is reachable (" + std::to_string(reachable_states) +
                      " reachable states";
    if (!dfa_accepting_reached) msg += "; the specification never reaches an accepting state";
    if (!wfse_accepting_reached) msg += "; the edit system never reaches an accepting state";
    return msg + ")";
  }
};

class ProductAutomaton {
public:
  std::vector<ProductState> states;
  std::vector<ProductEdge> edges;
  std::vector<bool> accepting;
  std::vector<double> exit_weight;
  std::size_t initial = 0;
  std::optional<EmptyProduct> empty_reason;  // set iff no states survive trimming

  std::size_t size() const noexcept { return states.size(); }
  bool empty() const noexcept { return states.empty(); }

  std::vector<std::vector<std::size_t>> out_edges() const {
    std::vector<std::vector<std::size_t>> adj(size());
    for (std::size_t i = 0; i < edges.size(); ++i) adj[edges[i].from].push_back(i);
    return adj;
  }
};

namespace detail {

inline void check_shared_alphabet(const TransitionSystem& ts, const EditSystem& wfse, const SpecDFA& dfa) {
  for (std::size_t x = 0; x < ts.size(); ++x) {
    if (!ts.label(x).subset_of(dfa.ap)) {
      throw UnknownProposition("TS state '" + ts.name(x) + "' label " + ts.label(x).str() +
                               " is outside the specification AP set");
    }
  }
  for (const auto& t : wfse.transitions) {
    for (const auto* s : {&t.exec, &t.spec}) {
      if (!s->is_eps() && !s->symbol().subset_of(dfa.ap)) {
        throw UnknownProposition("WFSE symbol " + s->str() + " is outside the specification AP set");
      }
    }
  }
}

}  // namespace detail

/// Reachable, trimmed product. Never throws for infeasibility; check
/// `empty()` and `empty_reason` instead.
inline ProductAutomaton build_product(const TransitionSystem& ts, const EditSystem& wfse, const SpecDFA& dfa,
                                      const WeightCombiner& combiner = WeightCombiner::additive()) {
  auto fail_on = [](const std::vector<Violation>& v, const char* what) {
    if (!v.empty()) throw InvalidModel(std::string(what) + ": " + v.front().str());
  };
  fail_on(validate(ts), "transition system");
  fail_on(validate(wfse), "edit system");
  fail_on(validate(dfa), "specification");
  detail::check_shared_alphabet(ts, wfse, dfa);

  // WFSE transitions per state, split by exec symbol.
  std::vector<std::map<APSymbol, std::vector<std::size_t>>> by_exec(wfse.size());
  std::vector<std::vector<std::size_t>> exec_eps(wfse.size());
  for (std::size_t i = 0; i < wfse.transitions.size(); ++i) {
    const auto& t = wfse.transitions[i];
    if (t.exec.is_eps()) {
      exec_eps[t.from].push_back(i);
    } else {
      by_exec[t.from][t.exec.symbol()].push_back(i);
    }
  }
  const auto ts_adj = ts.adjacency();

  ProductAutomaton raw;
  std::map<ProductState, std::size_t> index;
  auto intern = [&](const ProductState& q) {
    auto [it, fresh] = index.emplace(q, raw.states.size());
    if (fresh) raw.states.push_back(q);
    return it->second;
  };
  auto spec_step = [&](std::size_t s, const EditSymbol& spec) -> std::optional<std::size_t> {
    if (spec.is_eps()) return s;
    return dfa.step(s, spec.symbol());
  };
  auto add_edge = [&](std::size_t from, const ProductState& to_state, ProductEdgeKind kind, std::size_t ts_t,
                      std::size_t wt, double ts_w) {
    const auto& t = wfse.transitions[wt];
    const std::size_t to = intern(to_state);
    ProductEdge e;
    e.from = from;
    e.to = to;
    e.kind = kind;
    e.ts_transition = ts_t;
    e.wfse_transition = wt;
    e.exec = t.exec;
    e.spec = t.spec;
    e.ts_weight = ts_w;
    e.edit_weight = t.weight;
    e.weight = combiner(e.context());
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw NegativeWeight("combiner '" + combiner.name() + "' produced weight " + std::to_string(e.weight) +
                           " on a product edge");
    }
    raw.edges.push_back(std::move(e));
  };

  intern({npos, wfse.initial, dfa.initial});
  for (std::size_t qi = 0; qi < raw.states.size(); ++qi) {
    const ProductState q = raw.states[qi];
    // TS stays, DFA reads a spec symbol.
    for (std::size_t wt : exec_eps[q.z]) {
      const auto& t = wfse.transitions[wt];
      if (auto s2 = spec_step(q.s, t.spec)) add_edge(qi, {q.x, t.to, *s2}, ProductEdgeKind::SpecOnly, npos, wt, 0.0);
    }
    auto moves = [&](std::size_t x2, std::size_t ts_t, double ts_w, bool start) {
      auto it = by_exec[q.z].find(ts.label(x2));
      if (it == by_exec[q.z].end()) return;
      for (std::size_t wt : it->second) {
        const auto& t = wfse.transitions[wt];
        auto s2 = spec_step(q.s, t.spec);
        if (!s2) continue;
        const auto kind = start ? ProductEdgeKind::Start
                                : (t.spec.is_eps() ? ProductEdgeKind::ExecOnly : ProductEdgeKind::Match);
        add_edge(qi, {x2, t.to, *s2}, kind, ts_t, wt, ts_w);
      }
    };
    if (q.virtual_start()) {
      moves(ts.initial, npos, 1.0, true);
    } else {
      for (std::size_t ti : ts_adj[q.x]) {
        const auto& tr = ts.transitions[ti];
        moves(tr.to, ti, static_cast<double>(tr.weight), false);
      }
    }
  }

  std::vector<bool> acc(raw.states.size());
  EmptyProduct diag;
  diag.reachable_states = raw.states.size();
  for (std::size_t i = 0; i < raw.states.size(); ++i) {
    const auto& q = raw.states[i];
    const bool fa = dfa.accepting(q.s), fe = wfse.accepting(q.z);
    diag.dfa_accepting_reached = diag.dfa_accepting_reached || fa;
    diag.wfse_accepting_reached = diag.wfse_accepting_reached || fe;
    acc[i] = !q.virtual_start() && fa && fe;
  }
  const auto map = trim_states(raw.states.size(), raw.edges, 0, acc);

  ProductAutomaton out;
  for (std::size_t i = 0; i < raw.states.size(); ++i) {
    if (!map.keep[i]) continue;
    out.states.push_back(raw.states[i]);
    out.accepting.push_back(acc[i]);
    out.exit_weight.push_back(acc[i] ? wfse.final_weight(raw.states[i].z) : 0.0);
  }
  for (auto e : raw.edges) {
    if (!map.keep[e.from] || !map.keep[e.to]) continue;
    e.from = map.new_index[e.from];
    e.to = map.new_index[e.to];
    out.edges.push_back(std::move(e));
  }
  if (out.states.empty()) out.empty_reason = diag;
  return out;
}

enum class EditKind { Substitution, Deletion, Insertion, WeightedMatch, Final };

inline const char* to_string(EditKind k) {
  switch (k) {
    case EditKind::Substitution: return "substitution";
    case EditKind::Deletion: return "deletion";
    case EditKind::Insertion: return "insertion";
    case EditKind::WeightedMatch: return "weighted-match";
    case EditKind::Final: return "final";
  }
  return "";
}

/// One non-trivial edit on a plan. Deletion skips a spec symbol, insertion
/// executes a symbol the spec does not see.
struct EditLogEntry {
  EditKind kind = EditKind::Substitution;
  std::size_t step = 0;  // index into the TS trajectory
  EditSymbol exec;
  EditSymbol spec;
  double weight = 0.0;
};

struct Projection {
  std::vector<std::size_t> trajectory;
  Word exec_word;
  Word spec_word;
  std::vector<EditLogEntry> edits;
};

/// Projects a path given as product edge indices from the initial state.
/// An accepting final state with a positive exit weight adds a Final entry.
inline Projection project(const ProductAutomaton& pa, const std::vector<std::size_t>& edge_path) {
  Projection out;
  if (pa.empty()) throw NotAPath("the product is empty");
  std::size_t cur = pa.initial;
  for (std::size_t k = 0; k < edge_path.size(); ++k) {
    const std::size_t ei = edge_path[k];
    if (ei >= pa.edges.size()) throw NotAPath("edge index " + std::to_string(ei) + " is not a product edge");
    const auto& e = pa.edges[ei];
    if (e.from != cur) throw NotAPath("edge " + std::to_string(k) + " does not continue the path");
    if (e.ts_moves()) {
      out.trajectory.push_back(pa.states[e.to].x);
      out.exec_word.push_back(e.exec.symbol());
    }
    if (!e.spec.is_eps()) out.spec_word.push_back(e.spec.symbol());
    const std::size_t step = out.trajectory.empty() ? 0 : out.trajectory.size() - 1;
    std::optional<EditKind> kind;
    if (e.exec.is_eps()) {
      kind = EditKind::Deletion;
    } else if (e.spec.is_eps()) {
      kind = EditKind::Insertion;
    } else if (e.exec != e.spec) {
      kind = EditKind::Substitution;
    } else if (e.edit_weight != 0.0) {
      kind = EditKind::WeightedMatch;
    }
    if (kind) out.edits.push_back({*kind, step, e.exec, e.spec, e.edit_weight});
    cur = e.to;
  }
  if (pa.accepting[cur] && pa.exit_weight[cur] != 0.0) {
    out.edits.push_back({EditKind::Final, out.trajectory.empty() ? 0 : out.trajectory.size() - 1,
                         EditSymbol::eps(), EditSymbol::eps(), pa.exit_weight[cur]});
  }
  return out;
}

/// Same, for a path given as product state indices; parallel edges resolve
/// to the cheapest one.
inline Projection project_states(const ProductAutomaton& pa, const std::vector<std::size_t>& state_path) {
  if (state_path.empty() || state_path.front() != pa.initial) throw NotAPath("path does not start at the initial state");
  const auto adj = pa.out_edges();
  std::vector<std::size_t> edge_path;
  for (std::size_t k = 1; k < state_path.size(); ++k) {
    const std::size_t u = state_path[k - 1], v = state_path[k];
    if (u >= pa.size() || v >= pa.size()) throw NotAPath("state index out of range");
    std::size_t best = npos;
    for (std::size_t ei : adj[u]) {
      if (pa.edges[ei].to == v && (best == npos || pa.edges[ei].weight < pa.edges[best].weight)) best = ei;
    }
    if (best == npos) throw NotAPath("no product edge at step " + std::to_string(k));
    edge_path.push_back(best);
  }
  return project(pa, edge_path);
}

inline std::string state_label(const ProductAutomaton& pa, std::size_t q, const TransitionSystem& ts,
                               const EditSystem& wfse, const SpecDFA& dfa) {
  const auto& st = pa.states.at(q);
  return "(" + (st.virtual_start() ? std::string("start") : ts.name(st.x)) + ", " + wfse.name(st.z) + ", " +
         dfa.name(st.s) + ")";
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace detail

inline std::string product_to_dot(const ProductAutomaton& pa, const TransitionSystem& ts, const EditSystem& wfse,
                                  const SpecDFA& dfa) {
  std::ostringstream os;
  os << "digraph product {\n  rankdir=LR;\n";
  for (std::size_t q = 0; q < pa.size(); ++q) {
    os << "  q" << q << " [label=\"" << detail::dot_escape(state_label(pa, q, ts, wfse, dfa)) << "\"";
    if (pa.accepting[q]) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (const auto& e : pa.edges) {
    std::ostringstream w;
    w.precision(12);
    w << e.weight;
    os << "  q" << e.from << " -> q" << e.to << " [label=\""
       << detail::dot_escape(e.exec.str() + "/" + e.spec.str() + " : " + w.str()) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace relaxplan

#endif  // RELAXPLAN_PRODUCT_HPP
