#ifndef RELAXPLAN_TWTL_AUTOMATON_HPP
#define RELAXPLAN_TWTL_AUTOMATON_HPP

// TWTL formulas to DFAs by formula progression: each state is a residual
// obligation, each letter rewrites it. A state is accepting once the
// obligation is discharged (a sink that loops on every letter). Words are
// accepted at the earliest completion.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relaxplan/dfa.hpp"
#include "relaxplan/error.hpp"
#include "relaxplan/symbol.hpp"
#include "relaxplan/twtl.hpp"

namespace relaxplan {

/// Within operators that start / complete on one transition.
struct TransitionMarkers {
  std::vector<int> starts;
  std::vector<int> completes;

  bool empty() const noexcept { return starts.empty() && completes.empty(); }
  friend auto operator<=>(const TransitionMarkers&, const TransitionMarkers&) = default;
};

/// DFA of φ(∞) with start/completion markers for every within operator.
struct AnnotatedDFA {
  SpecDFA dfa;
  std::vector<WithinInfo> withins;
  std::map<std::pair<std::size_t, APSymbol>, TransitionMarkers> markers;

  const TransitionMarkers* markers_at(std::size_t s, const APSymbol& sym) const {
    auto it = markers.find({s, sym});
    return it == markers.end() ? nullptr : &it->second;
  }

  /// Ids of the within operators that appear on some transition.
  std::vector<int> marker_set() const {
    std::vector<int> ids;
    for (const auto& [key, m] : markers) {
      ids.insert(ids.end(), m.starts.begin(), m.starts.end());
      ids.insert(ids.end(), m.completes.begin(), m.completes.end());
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  }
};

struct TemporalRelaxation {
  std::vector<int> tau;  // per within operator, by id - 1
  int ltr = 0;
};

struct TwtlCompileOptions {
  std::size_t max_states = 200000;
};

namespace detail {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { True, False, Hold, And, Or, Concat, Within };
  Kind kind = Kind::True;
  int remaining = 0;  // Hold
  std::string prop;   // Hold
  bool negated = false;
  TermPtr left, right;                     // And, Or; Concat uses left
  const TwtlFormula* node = nullptr;       // Concat: pending right side; Within: the operator
  int a_rem = 0, b_rem = 0;                // Within; b_rem < 0 means no deadline
  bool started = false;                    // Within
  std::vector<TermPtr> active;             // Within: running child instances
  std::string key;
};

inline TermPtr make_true() {
  static const TermPtr t = [] {
    auto p = std::make_shared<Term>();
    p->kind = Term::Kind::True;
    p->key = "T";
    return p;
  }();
  return t;
}

inline TermPtr make_false() {
  static const TermPtr t = [] {
    auto p = std::make_shared<Term>();
    p->kind = Term::Kind::False;
    p->key = "F";
    return p;
  }();
  return t;
}

inline TermPtr make_hold(int remaining, const std::string& prop, bool negated) {
  auto p = std::make_shared<Term>();
  p->kind = Term::Kind::Hold;
  p->remaining = remaining;
  p->prop = prop;
  p->negated = negated;
  p->key = "H(" + std::to_string(remaining) + "," + (negated ? "!" : "") + prop + ")";
  return p;
}

inline TermPtr make_binary(Term::Kind k, TermPtr l, TermPtr r) {
  auto p = std::make_shared<Term>();
  p->kind = k;
  p->key = std::string(k == Term::Kind::And ? "&(" : "|(") + l->key + "," + r->key + ")";
  p->left = std::move(l);
  p->right = std::move(r);
  return p;
}

inline TermPtr make_concat(TermPtr l, const TwtlFormula* pending) {
  auto p = std::make_shared<Term>();
  p->kind = Term::Kind::Concat;
  p->key = ".(" + l->key + ",#" + std::to_string(pending->uid) + ")";
  p->left = std::move(l);
  p->node = pending;
  return p;
}

inline TermPtr make_within(const TwtlFormula* node, int a_rem, int b_rem, bool started, std::vector<TermPtr> active) {
  std::sort(active.begin(), active.end(), [](const TermPtr& x, const TermPtr& y) { return x->key < y->key; });
  active.erase(std::unique(active.begin(), active.end(),
                           [](const TermPtr& x, const TermPtr& y) { return x->key == y->key; }),
               active.end());
  auto p = std::make_shared<Term>();
  p->kind = Term::Kind::Within;
  p->node = node;
  p->a_rem = a_rem;
  p->b_rem = b_rem;
  p->started = started;
  p->key = "W#" + std::to_string(node->uid) + "(" + std::to_string(a_rem) + "," + std::to_string(b_rem) + "," +
           (started ? "s" : "-") + "{";
  for (const auto& t : active) p->key += t->key + ";";
  p->key += "})";
  p->active = std::move(active);
  return p;
}

inline TermPtr initial_term(const TwtlFormula& f, bool relaxed) {
  using K = TwtlFormula::Kind;
  switch (f.kind) {
    case K::Hold: return make_hold(f.duration, f.prop, f.negated);
    case K::And: return make_binary(Term::Kind::And, initial_term(f.children[0], relaxed), initial_term(f.children[1], relaxed));
    case K::Or: return make_binary(Term::Kind::Or, initial_term(f.children[0], relaxed), initial_term(f.children[1], relaxed));
    case K::Concat: return make_concat(initial_term(f.children[0], relaxed), &f.children[1]);
    case K::Within: return make_within(&f, f.lower, relaxed ? -1 : f.upper, false, {});
  }
  return make_false();
}

inline bool literal_holds(const Term& t, const APSymbol& sym) {
  const bool v = t.prop == "true" || sym.contains(t.prop);
  return v != t.negated;
}

struct Progressor {
  bool relaxed = false;
  TransitionMarkers* markers = nullptr;

  TermPtr step(const TermPtr& t, const APSymbol& sym) {
    using TK = Term::Kind;
    switch (t->kind) {
      case TK::True:
      case TK::False: return t;
      case TK::Hold:
        if (!literal_holds(*t, sym)) return make_false();
        return t->remaining == 0 ? make_true() : make_hold(t->remaining - 1, t->prop, t->negated);
      case TK::And: {
        auto l = step(t->left, sym);
        auto r = step(t->right, sym);
        if (l->kind == TK::False || r->kind == TK::False) return make_false();
        if (l->kind == TK::True) return r;
        if (r->kind == TK::True) return l;
        return make_binary(TK::And, l, r);
      }
      case TK::Or: {
        auto l = step(t->left, sym);
        auto r = step(t->right, sym);
        if (l->kind == TK::True || r->kind == TK::True) return make_true();
        if (l->kind == TK::False) return r;
        if (r->kind == TK::False) return l;
        return make_binary(TK::Or, l, r);
      }
      case TK::Concat: {
        auto l = step(t->left, sym);
        if (l->kind == TK::False) return l;
        if (l->kind == TK::True) return initial_term(*t->node, relaxed);
        return make_concat(l, t->node);
      }
      case TK::Within: return step_within(t, sym);
    }
    return make_false();
  }

  TermPtr step_within(const TermPtr& t, const APSymbol& sym) {
    const int id = t->node->within_id;
    if (!t->started && markers) markers->starts.push_back(id);
    const int b_next = t->b_rem < 0 ? -1 : t->b_rem - 1;
    if (t->a_rem > 0) return make_within(t->node, t->a_rem - 1, b_next, true, {});
    std::vector<TermPtr> instances = t->active;
    instances.push_back(initial_term(t->node->children[0], relaxed));
    std::vector<TermPtr> next;
    for (const auto& inst : instances) {
      auto n = step(inst, sym);
      if (n->kind == Term::Kind::True) {
        if (markers) markers->completes.push_back(id);
        return make_true();
      }
      if (n->kind != Term::Kind::False) next.push_back(std::move(n));
    }
    if (t->b_rem == 0) return make_false();
    return make_within(t->node, 0, b_next, true, std::move(next));
  }
};

inline void normalize(TransitionMarkers& m) {
  for (auto* v : {&m.starts, &m.completes}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
}

// Raw progression automaton before minimization.
struct RawTwtlDfa {
  std::vector<bool> accepting;
  std::vector<std::vector<long>> next;          // [state][letter], -1 if rejecting
  std::vector<std::vector<int>> marker_id;      // [state][letter]
  std::vector<TransitionMarkers> marker_table;  // interned, index 0 is empty
};

inline RawTwtlDfa explore(const TwtlFormula& f, const std::vector<APSymbol>& letters, bool relaxed,
                          const TwtlCompileOptions& opts) {
  RawTwtlDfa raw;
  raw.marker_table.push_back({});
  std::map<TransitionMarkers, int> marker_index{{TransitionMarkers{}, 0}};
  std::unordered_map<std::string, std::size_t> index;
  std::vector<TermPtr> states;
  auto intern = [&](const TermPtr& t) {
    auto [it, fresh] = index.emplace(t->key, states.size());
    if (fresh) {
      if (states.size() >= opts.max_states) {
        throw FragmentError("formula automaton exceeds " + std::to_string(opts.max_states) + " states");
      }
      states.push_back(t);
    }
    return it->second;
  };
  intern(initial_term(f, relaxed));
  for (std::size_t s = 0; s < states.size(); ++s) {
    const TermPtr cur = states[s];
    raw.accepting.push_back(cur->kind == Term::Kind::True);
    std::vector<long> row(letters.size(), -1);
    std::vector<int> mrow(letters.size(), 0);
    for (std::size_t l = 0; l < letters.size(); ++l) {
      TransitionMarkers m;
      Progressor p{relaxed, &m};
      auto n = p.step(cur, letters[l]);
      if (n->kind == Term::Kind::False) continue;
      row[l] = static_cast<long>(intern(n));
      normalize(m);
      auto [it, fresh] = marker_index.emplace(m, static_cast<int>(raw.marker_table.size()));
      if (fresh) raw.marker_table.push_back(m);
      mrow[l] = it->second;
    }
    raw.next.push_back(std::move(row));
    raw.marker_id.push_back(std::move(mrow));
  }
  return raw;
}

// Moore partition refinement that keeps markers on transitions.
// Returns block per state, with blocks numbered in BFS order from state 0
// and unreachable states mapped to -1.
inline std::vector<long> minimize_blocks(const RawTwtlDfa& raw, bool keep_markers) {
  const std::size_t n = raw.next.size();
  std::vector<long> block(n);
  for (std::size_t s = 0; s < n; ++s) block[s] = raw.accepting[s] ? 1 : 0;
  std::size_t count = 0;
  while (true) {
    std::map<std::vector<long>, long> sig_index;
    std::vector<long> nb(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<long> sig{block[s]};
      for (std::size_t l = 0; l < raw.next[s].size(); ++l) {
        const long t = raw.next[s][l];
        sig.push_back(t < 0 ? -1 : block[static_cast<std::size_t>(t)]);
        sig.push_back(keep_markers ? raw.marker_id[s][l] : 0);
      }
      auto [it, fresh] = sig_index.emplace(std::move(sig), static_cast<long>(sig_index.size()));
      nb[s] = it->second;
    }
    block = std::move(nb);
    if (sig_index.size() == count) break;
    count = sig_index.size();
  }
  // Renumber by BFS from the initial state.
  std::vector<long> renum(count, -1);
  std::vector<long> out(n, -1);
  std::vector<std::size_t> rep;  // representative state per new block
  std::queue<std::size_t> q;
  renum[block[0]] = 0;
  rep.push_back(0);
  q.push(0);
  while (!q.empty()) {
    auto s = q.front();
    q.pop();
    for (long t : raw.next[s]) {
      if (t < 0) continue;
      long b = block[static_cast<std::size_t>(t)];
      if (renum[b] < 0) {
        renum[b] = static_cast<long>(rep.size());
        rep.push_back(static_cast<std::size_t>(t));
        q.push(static_cast<std::size_t>(t));
      }
    }
  }
  for (std::size_t s = 0; s < n; ++s) out[s] = renum[block[s]];
  return out;
}

inline AnnotatedDFA assemble(const TwtlFormula& f, const ApSet& ap, bool relaxed, const TwtlCompileOptions& opts) {
  const auto letters = power_set(ap);
  const auto raw = explore(f, letters, relaxed, opts);
  const auto block = minimize_blocks(raw, relaxed);
  long nblocks = 0;
  for (long b : block) nblocks = std::max(nblocks, b + 1);

  AnnotatedDFA out;
  out.dfa.ap = ap;
  out.withins = withins_of(f);
  std::vector<std::size_t> rep(static_cast<std::size_t>(nblocks), npos);
  for (std::size_t s = 0; s < block.size(); ++s) {
    if (block[s] >= 0 && rep[static_cast<std::size_t>(block[s])] == npos) rep[static_cast<std::size_t>(block[s])] = s;
  }
  for (long b = 0; b < nblocks; ++b) {
    out.dfa.add_state("q" + std::to_string(b), raw.accepting[rep[static_cast<std::size_t>(b)]]);
  }
  out.dfa.initial = 0;
  for (long b = 0; b < nblocks; ++b) {
    const std::size_t s = rep[static_cast<std::size_t>(b)];
    for (std::size_t l = 0; l < letters.size(); ++l) {
      const long t = raw.next[s][l];
      if (t < 0) continue;
      out.dfa.add_transition(static_cast<std::size_t>(b), letters[l], static_cast<std::size_t>(block[static_cast<std::size_t>(t)]));
      const auto& m = raw.marker_table[static_cast<std::size_t>(raw.marker_id[s][l])];
      if (relaxed && !m.empty()) out.markers[{static_cast<std::size_t>(b), letters[l]}] = m;
    }
  }
  return out;
}

}  // namespace detail

/// DFA accepting exactly the words with a prefix that satisfies φ. The
/// alphabet is 2^(props(φ) ∪ extra_ap).
inline SpecDFA twtl_to_dfa(const TwtlFormula& phi, const ApSet& extra_ap = {},
                           const TwtlCompileOptions& opts = {}) {
  TwtlFormula f = phi;
  number_formula(f);
  return detail::assemble(f, ap_union(formula_props(f), extra_ap), false, opts).dfa;
}

/// DFA for φ with every within deadline removed, annotated with markers.
/// Nested within operators are rejected.
inline AnnotatedDFA twtl_to_annotated_dfa(const TwtlFormula& phi, const ApSet& extra_ap = {},
                                          const TwtlCompileOptions& opts = {}) {
  TwtlFormula f = phi;
  number_formula(f);
  for (const auto& w : withins_of(f)) {
    if (w.nested) throw FragmentError("nested within operators are not supported for deadline relaxation");
  }
  return detail::assemble(f, ap_union(formula_props(f), extra_ap), true, opts);
}

/// τ_j is how far operator j completed past its deadline, measured from the
/// step its window opened.
inline TemporalRelaxation ltr_of_run(const AnnotatedDFA& a, const Word& word) {
  check_word_alphabet(a.dfa.ap, word, "word");
  int max_id = 0;
  for (const auto& w : a.withins) max_id = std::max(max_id, w.id);
  std::vector<std::optional<std::size_t>> start(static_cast<std::size_t>(max_id) + 1), done(start.size());
  if (a.dfa.empty()) throw NotAccepted("word is not accepted by the annotated automaton");
  std::size_t s = a.dfa.initial;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (const auto* m = a.markers_at(s, word[k])) {
      for (int id : m->starts) {
        if (!start[static_cast<std::size_t>(id)]) start[static_cast<std::size_t>(id)] = k;
      }
      for (int id : m->completes) {
        if (!done[static_cast<std::size_t>(id)]) done[static_cast<std::size_t>(id)] = k;
      }
    }
    auto n = a.dfa.step(s, word[k]);
    if (!n) throw NotAccepted("word is not accepted by the annotated automaton (stuck at step " + std::to_string(k) + ")");
    s = *n;
  }
  if (!a.dfa.accepting(s)) throw NotAccepted("word is not accepted by the annotated automaton");
  TemporalRelaxation r;
  r.tau.assign(a.withins.size(), 0);
  for (std::size_t j = 0; j < a.withins.size(); ++j) {
    const auto id = static_cast<std::size_t>(a.withins[j].id);
    if (start[id] && done[id]) {
      const long late = static_cast<long>(*done[id]) - static_cast<long>(*start[id]) - a.withins[j].upper;
      r.tau[j] = static_cast<int>(std::max(0L, late));
    }
    r.ltr += r.tau[j];
  }
  return r;
}

}  // namespace relaxplan

#endif  // RELAXPLAN_TWTL_AUTOMATON_HPP
