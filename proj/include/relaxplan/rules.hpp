#ifndef RELAXPLAN_RULES_HPP
#define RELAXPLAN_RULES_HPP

// Relaxation-rule DSL: a regular expression over weighted edit atoms
// "(exec/spec, cost)", compiled to an EditSystem.
//
//   expr   := term ('|' term)*
//   term   := factor+
//   factor := ( atom | '(' expr ')' ) ['*']
//   atom   := '(' sym '/' sym ',' cost ')'
//   sym    := '.' | 'eps' | '{' name (',' name)* '}' | '{}'

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "relaxplan/detail/format.hpp"
#include "relaxplan/edit_system.hpp"
#include "relaxplan/error.hpp"
#include "relaxplan/symbol.hpp"
#include "relaxplan/trim.hpp"

namespace relaxplan {

/// One side of a rule atom: a concrete edit symbol or the wildcard '.'.
struct RuleSym {
  bool any = false;
  EditSymbol sym;

  static RuleSym wildcard() { return {true, EditSymbol::eps()}; }
  static RuleSym eps() { return {false, EditSymbol::eps()}; }
  static RuleSym of(APSymbol s) { return {false, EditSymbol(std::move(s))}; }

  bool is_eps() const { return !any && sym.is_eps(); }
  std::string str() const { return any ? "." : sym.str(); }

  friend bool operator==(const RuleSym&, const RuleSym&) = default;
};

struct RuleExpr {
  enum class Kind { Atom, Concat, Alt, Star };

  Kind kind = Kind::Atom;
  RuleSym exec;
  RuleSym spec;
  double cost = 0.0;
  std::vector<RuleExpr> children;

  static RuleExpr atom(RuleSym exec, RuleSym spec, double cost) {
    RuleExpr e;
    e.exec = std::move(exec);
    e.spec = std::move(spec);
    e.cost = cost;
    return e;
  }
  static RuleExpr concat(std::vector<RuleExpr> parts) { return node(Kind::Concat, std::move(parts)); }
  static RuleExpr alt(std::vector<RuleExpr> parts) { return node(Kind::Alt, std::move(parts)); }
  static RuleExpr star(RuleExpr child) { return node(Kind::Star, {std::move(child)}); }

  friend bool operator==(const RuleExpr&, const RuleExpr&) = default;

private:
  static RuleExpr node(Kind k, std::vector<RuleExpr> parts) {
    RuleExpr e;
    e.kind = k;
    e.children = std::move(parts);
    return e;
  }
};

namespace detail {

class RuleParser {
public:
  explicit RuleParser(std::string_view text) : text_(text) {}

  RuleExpr parse() {
    skip_ws();
    if (eof()) fail("empty rule expression");
    RuleExpr e = parse_expr();
    skip_ws();
    if (!eof()) fail(std::string("unexpected '") + peek() + "'");
    return e;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }

  std::pair<std::size_t, std::size_t> line_col(std::size_t at) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    auto [l, c] = line_col(at);
    throw SyntaxError(msg, l, c);
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) {
      fail(std::string("expected '") + c + "'" + (eof() ? " before end of input" : std::string(", found '") + peek() + "'"));
    }
    ++pos_;
  }

  RuleExpr parse_expr() {
    std::vector<RuleExpr> terms{parse_term()};
    skip_ws();
    while (peek() == '|') {
      ++pos_;
      terms.push_back(parse_term());
      skip_ws();
    }
    return terms.size() == 1 ? std::move(terms.front()) : RuleExpr::alt(std::move(terms));
  }

  RuleExpr parse_term() {
    std::vector<RuleExpr> factors;
    skip_ws();
    while (peek() == '(') {
      factors.push_back(parse_factor());
      skip_ws();
    }
    if (factors.empty()) fail(eof() ? "expected '(' before end of input" : std::string("expected '(', found '") + peek() + "'");
    return factors.size() == 1 ? std::move(factors.front()) : RuleExpr::concat(std::move(factors));
  }

  RuleExpr parse_factor() {
    const std::size_t open = pos_;
    expect('(');
    skip_ws();
    RuleExpr inner;
    if (peek() == '(') {
      inner = parse_expr();
      expect(')');
    } else {
      inner = parse_atom_body(open);
    }
    skip_ws();
    if (peek() == '*') {
      ++pos_;
      inner = RuleExpr::star(std::move(inner));
    }
    return inner;
  }

  // Called after the opening parenthesis of an atom.
  RuleExpr parse_atom_body(std::size_t open) {
    RuleSym exec = parse_sym();
    expect('/');
    RuleSym spec = parse_sym();
    expect(',');
    double cost = parse_cost();
    expect(')');
    if (exec.is_eps() && spec.is_eps()) fail_at(open, "atom (eps/eps) is not a legal edit");
    return RuleExpr::atom(std::move(exec), std::move(spec), cost);
  }

  RuleSym parse_sym() {
    skip_ws();
    if (peek() == '.') {
      ++pos_;
      return RuleSym::wildcard();
    }
    if (text_.substr(pos_, 3) == "eps") {
      pos_ += 3;
      return RuleSym::eps();
    }
    if (text_.substr(pos_, 2) == "\xCE\xB5") {
      pos_ += 2;
      return RuleSym::eps();
    }
    if (peek() != '{') fail("expected a symbol ('.', 'eps' or '{...}')");
    ++pos_;
    std::vector<std::string> names;
    skip_ws();
    if (peek() == '}') {
      ++pos_;
      return RuleSym::of(APSymbol{});
    }
    while (true) {
      skip_ws();
      const std::size_t start = pos_;
      while (!eof() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' && peek() != '}') ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (!is_valid_prop_name(name)) fail_at(start, "invalid proposition name '" + name + "'");
      names.push_back(std::move(name));
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == '}') {
        ++pos_;
        break;
      }
      fail("expected ',' or '}' in symbol");
    }
    return RuleSym::of(APSymbol(std::move(names)));
  }

  double parse_cost() {
    skip_ws();
    const std::size_t start = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == 'e' ||
                      peek() == 'E' || ((peek() == '-' || peek() == '+') && (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    std::string_view num = text_.substr(start, pos_ - start);
    if (!num.empty() && num.front() == '+') num.remove_prefix(1);
    double value = 0;
    auto res = std::from_chars(num.data(), num.data() + num.size(), value);
    if (num.empty() || res.ec != std::errc() || res.ptr != num.data() + num.size()) {
      fail_at(start, "malformed cost");
    }
    if (value < 0) {
      auto [l, c] = line_col(start);
      throw CostError("negative cost " + std::string(num), l, c);
    }
    return value;
  }
};

inline void print_rule(const RuleExpr& e, std::string& out) {
  using K = RuleExpr::Kind;
  auto grouped = [&](const RuleExpr& c) {
    out += '(';
    print_rule(c, out);
    out += ')';
  };
  switch (e.kind) {
    case K::Atom:
      out += "(" + e.exec.str() + "/" + e.spec.str() + ", " + shortest(e.cost) + ")";
      break;
    case K::Concat:
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += ' ';
        const auto& c = e.children[i];
        if (c.kind == K::Concat || c.kind == K::Alt) grouped(c); else print_rule(c, out);
      }
      break;
    case K::Alt:
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += " | ";
        const auto& c = e.children[i];
        if (c.kind == K::Alt) grouped(c); else print_rule(c, out);
      }
      break;
    case K::Star: {
      const auto& c = e.children.front();
      if (c.kind == K::Atom) print_rule(c, out); else grouped(c);
      out += '*';
      break;
    }
  }
}

}  // namespace detail

inline RuleExpr parse_rules(std::string_view text) { return detail::RuleParser(text).parse(); }

/// Canonical text; parse_rules(to_string(e)) == e.
inline std::string to_string(const RuleExpr& e) {
  std::string out;
  detail::print_rule(e, out);
  return out;
}

struct CompileOptions {
  std::size_t max_states = 100000;
  std::size_t max_transitions = 1000000;
};

namespace detail {

struct GlueNfa {
  struct Edge {
    std::size_t from, to;
    int atom;  // -1: unlabeled glue
  };
  std::size_t states = 0;
  std::vector<Edge> edges;
  std::vector<const RuleExpr*> atoms;

  std::size_t fresh() { return states++; }

  std::pair<std::size_t, std::size_t> build(const RuleExpr& e) {
    using K = RuleExpr::Kind;
    switch (e.kind) {
      case K::Atom: {
        auto s = fresh(), t = fresh();
        edges.push_back({s, t, static_cast<int>(atoms.size())});
        atoms.push_back(&e);
        return {s, t};
      }
      case K::Concat: {
        auto [s, t] = build(e.children.front());
        for (std::size_t i = 1; i < e.children.size(); ++i) {
          auto [s2, t2] = build(e.children[i]);
          edges.push_back({t, s2, -1});
          t = t2;
        }
        return {s, t};
      }
      case K::Alt: {
        auto s = fresh(), t = fresh();
        for (const auto& c : e.children) {
          auto [cs, ct] = build(c);
          edges.push_back({s, cs, -1});
          edges.push_back({ct, t, -1});
        }
        return {s, t};
      }
      case K::Star: {
        auto s = fresh(), t = fresh();
        auto [cs, ct] = build(e.children.front());
        edges.push_back({s, cs, -1});
        edges.push_back({s, t, -1});
        edges.push_back({ct, cs, -1});
        edges.push_back({ct, t, -1});
        return {s, t};
      }
    }
    return {0, 0};
  }
};

inline std::string atom_key(const RuleExpr& a) {
  return a.exec.str() + "/" + a.spec.str() + "," + shortest(a.cost);
}

inline void check_symbols(const RuleExpr& e, const ApSet& ap) {
  if (e.kind == RuleExpr::Kind::Atom) {
    for (const auto* s : {&e.exec, &e.spec}) {
      if (s->any || s->sym.is_eps()) continue;
      for (const auto& p : s->sym.symbol().props()) {
        if (!std::binary_search(ap.begin(), ap.end(), p)) {
          throw UnknownProposition("rule atom " + atom_key(e) + " uses undeclared proposition '" + p + "'");
        }
      }
    }
  }
  for (const auto& c : e.children) check_symbols(c, ap);
}

}  // namespace detail

/// Glue-edge construction, closure elimination, trimming and merging of
/// bisimilar states, then expansion of '.' over 2^ap.
inline EditSystem compile_rules(const RuleExpr& expr, const ApSet& ap, const CompileOptions& opts = {}) {
  detail::check_symbols(expr, ap);
  detail::GlueNfa nfa;
  auto [start, final_state] = nfa.build(expr);

  std::vector<std::vector<std::size_t>> glue(nfa.states);
  std::vector<std::vector<std::size_t>> labeled(nfa.states);
  for (std::size_t i = 0; i < nfa.edges.size(); ++i) {
    const auto& e = nfa.edges[i];
    (e.atom < 0 ? glue[e.from] : labeled[e.from]).push_back(e.atom < 0 ? e.to : i);
  }

  // Important states: the start state and every target of a labeled edge.
  std::vector<std::size_t> important{start};
  for (const auto& e : nfa.edges) {
    if (e.atom >= 0) important.push_back(e.to);
  }
  std::sort(important.begin() + 1, important.end());
  important.erase(std::unique(important.begin() + 1, important.end()), important.end());
  std::vector<std::size_t> slot(nfa.states, npos);
  for (std::size_t i = 0; i < important.size(); ++i) slot[important[i]] = i;

  struct Arc {
    std::size_t from, to;
    int atom;
  };
  std::vector<Arc> arcs;
  std::vector<bool> accepting(important.size(), false);
  for (std::size_t i = 0; i < important.size(); ++i) {
    std::vector<bool> seen(nfa.states, false);
    std::vector<std::size_t> todo{important[i]};
    seen[important[i]] = true;
    while (!todo.empty()) {
      auto q = todo.back();
      todo.pop_back();
      if (q == final_state) accepting[i] = true;
      for (auto ei : labeled[q]) arcs.push_back({i, slot[nfa.edges[ei].to], nfa.edges[ei].atom});
      for (auto r : glue[q]) {
        if (!seen[r]) {
          seen[r] = true;
          todo.push_back(r);
        }
      }
    }
  }

  auto tm = trim_states(important.size(), arcs, 0, accepting);
  EditSystem out;
  out.ap = ap;
  if (tm.kept == 0) {
    out.add_state("z0", false);
    return out;
  }

  // Partition refinement: states with equal acceptance and equal outgoing
  // (atom, block) sets accept the same weighted relation.
  std::vector<std::string> keys(nfa.atoms.size());
  for (std::size_t a = 0; a < nfa.atoms.size(); ++a) keys[a] = detail::atom_key(*nfa.atoms[a]);
  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < important.size(); ++i) {
    if (tm.keep[i]) alive.push_back(i);
  }
  std::vector<std::size_t> block(important.size(), 0);
  for (auto i : alive) block[i] = accepting[i] ? 1 : 0;
  std::size_t num_blocks = 0;
  while (true) {
    std::map<std::pair<std::size_t, std::set<std::pair<std::string, std::size_t>>>, std::size_t> sig_ids;
    std::vector<std::size_t> next(important.size(), 0);
    std::vector<std::set<std::pair<std::string, std::size_t>>> sigs(important.size());
    for (const auto& a : arcs) {
      if (tm.keep[a.from] && tm.keep[a.to]) sigs[a.from].emplace(keys[a.atom], block[a.to]);
    }
    for (auto i : alive) {
      auto [it, inserted] = sig_ids.emplace(std::make_pair(block[i], sigs[i]), sig_ids.size());
      next[i] = it->second;
    }
    const bool stable = sig_ids.size() == num_blocks;
    num_blocks = sig_ids.size();
    block = std::move(next);
    if (stable) break;
  }

  // Number blocks in BFS order from the start block for stable state names.
  std::vector<std::vector<std::pair<std::size_t, int>>> block_out(num_blocks);
  std::vector<bool> block_acc(num_blocks, false);
  for (auto i : alive) block_acc[block[i]] = accepting[i];
  std::set<std::tuple<std::size_t, std::string, std::size_t>> seen_arc;
  for (const auto& a : arcs) {
    if (!tm.keep[a.from] || !tm.keep[a.to]) continue;
    if (seen_arc.emplace(block[a.from], keys[a.atom], block[a.to]).second) {
      block_out[block[a.from]].push_back({block[a.to], a.atom});
    }
  }
  std::vector<std::size_t> order(num_blocks, npos);
  std::vector<std::size_t> bfs{block[0]};
  order[block[0]] = 0;
  std::size_t next_id = 1;
  for (std::size_t h = 0; h < bfs.size(); ++h) {
    for (const auto& [to, atom] : block_out[bfs[h]]) {
      if (order[to] == npos) {
        order[to] = next_id++;
        bfs.push_back(to);
      }
    }
  }
  if (num_blocks > opts.max_states) {
    throw AlphabetError("compiled edit system has " + std::to_string(num_blocks) + " states, budget is " +
                        std::to_string(opts.max_states));
  }

  std::size_t expanded = 0;
  const std::size_t sigma = std::size_t(1) << std::min<std::size_t>(ap.size(), 62);
  for (const auto& outs : block_out) {
    for (const auto& [to, atom] : outs) {
      const auto* a = nfa.atoms[atom];
      expanded += (a->exec.any || a->spec.any) ? sigma : 1;
    }
  }
  if (ap.size() >= 62 || expanded > opts.max_transitions) {
    throw AlphabetError("expanding '.' over " + std::to_string(ap.size()) + " propositions needs " +
                        std::to_string(expanded) + " transitions, budget is " + std::to_string(opts.max_transitions));
  }
  std::vector<APSymbol> letters;
  bool uses_any = false;
  for (const auto* a : nfa.atoms) uses_any = uses_any || a->exec.any || a->spec.any;
  if (uses_any) letters = power_set(ap);

  std::vector<std::size_t> by_order(num_blocks);
  for (std::size_t b = 0; b < num_blocks; ++b) by_order[order[b]] = b;
  for (std::size_t k = 0; k < num_blocks; ++k) {
    out.add_state("z" + std::to_string(k), block_acc[by_order[k]]);
  }
  out.initial = 0;

  std::map<std::tuple<std::size_t, EditSymbol, EditSymbol, std::size_t>, double> edges;
  auto put = [&](std::size_t from, EditSymbol x, EditSymbol y, double w, std::size_t to) {
    auto key = std::make_tuple(from, std::move(x), std::move(y), to);
    auto it = edges.find(key);
    if (it == edges.end()) edges.emplace(std::move(key), w);
    else it->second = std::min(it->second, w);
  };
  for (std::size_t k = 0; k < num_blocks; ++k) {
    for (const auto& [to_block, atom] : block_out[by_order[k]]) {
      const auto& a = *nfa.atoms[atom];
      const std::size_t to = order[to_block];
      if (a.exec.any && a.spec.any) {
        for (const auto& s : letters) put(k, s, s, a.cost, to);
      } else if (a.exec.any) {
        for (const auto& s : letters) put(k, s, a.spec.sym, a.cost, to);
      } else if (a.spec.any) {
        for (const auto& s : letters) put(k, a.exec.sym, s, a.cost, to);
      } else {
        put(k, a.exec.sym, a.spec.sym, a.cost, to);
      }
    }
  }
  for (const auto& [key, w] : edges) {
    const auto& [from, x, y, to] = key;
    out.add_transition(from, x, y, w, to);
  }
  return out;
}

/// Propositions mentioned by concrete symbols of the expression.
inline ApSet rule_props(const RuleExpr& e) {
  std::vector<std::string> names;
  auto walk = [&](auto&& self, const RuleExpr& n) -> void {
    if (n.kind == RuleExpr::Kind::Atom) {
      for (const auto* s : {&n.exec, &n.spec}) {
        if (!s->any && !s->sym.is_eps()) {
          for (const auto& p : s->sym.symbol().props()) names.push_back(p);
        }
      }
    }
    for (const auto& c : n.children) self(self, c);
  };
  walk(walk, e);
  return make_ap_set(std::move(names));
}

}  // namespace relaxplan

#endif  // RELAXPLAN_RULES_HPP
