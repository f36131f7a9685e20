#ifndef RELAXPLAN_DFA_HPP
#define RELAXPLAN_DFA_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "relaxplan/error.hpp"
#include "relaxplan/symbol.hpp"
#include "relaxplan/transition_system.hpp"

namespace relaxplan {

/// Specification acceptor over 2^AP with a partial transition function.
/// A missing entry rejects the word from that state.
class SpecDFA {
public:
  ApSet ap;
  std::size_t initial = 0;

  std::size_t add_state(const std::string& name, bool accepting = false) {
    if (index_.count(name)) throw InvalidModel("duplicate DFA state '" + name + "'");
    index_.emplace(name, names_.size());
    names_.push_back(name);
    accepting_.push_back(accepting);
    delta_.emplace_back();
    return names_.size() - 1;
  }

  void set_accepting(std::size_t s, bool value = true) { accepting_.at(s) = value; }

  void add_transition(std::size_t from, const APSymbol& sym, std::size_t to) {
    auto [it, inserted] = delta_.at(from).emplace(sym, to);
    if (!inserted && it->second != to) {
      throw InvalidModel("nondeterministic DFA transition from '" + names_[from] + "' on " + sym.str());
    }
  }

  std::optional<std::size_t> step(std::size_t s, const APSymbol& sym) const {
    const auto& row = delta_.at(s);
    auto it = row.find(sym);
    if (it == row.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::string& name(std::size_t s) const { return names_.at(s); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  bool accepting(std::size_t s) const { return accepting_.at(s); }
  const std::map<APSymbol, std::size_t>& transitions_from(std::size_t s) const { return delta_.at(s); }

  std::size_t transition_count() const {
    std::size_t n = 0;
    for (const auto& row : delta_) n += row.size();
    return n;
  }

  std::size_t index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InvalidModel("unknown DFA state '" + name + "'");
    return it->second;
  }
  bool has_state(const std::string& name) const { return index_.count(name) != 0; }

private:
  std::vector<std::string> names_;
  std::vector<bool> accepting_;
  std::vector<std::map<APSymbol, std::size_t>> delta_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline std::vector<Violation> validate(const SpecDFA& dfa) {
  std::vector<Violation> out;
  if (dfa.size() == 0) out.push_back({"dfa", "no states"});
  if (dfa.initial >= dfa.size()) out.push_back({"dfa.initial", "initial state is not a state"});
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    for (const auto& [sym, to] : dfa.transitions_from(s)) {
      std::string where = "dfa.transition(" + dfa.name(s) + ", " + sym.str() + ")";
      if (to >= dfa.size()) out.push_back({where, "target is not a state"});
      if (!sym.subset_of(dfa.ap)) out.push_back({where, "symbol uses a proposition outside the AP set"});
    }
  }
  return out;
}

inline void check_word_alphabet(const ApSet& ap, const Word& word, const char* who) {
  for (std::size_t i = 0; i < word.size(); ++i) {
    for (const auto& p : word[i].props()) {
      if (!std::binary_search(ap.begin(), ap.end(), p)) {
        throw UnknownProposition(std::string(who) + ": proposition '" + p + "' at position " +
                                 std::to_string(i) + " is not declared");
      }
    }
  }
}

/// Runs the word from the initial state.
inline std::optional<std::size_t> dfa_run(const SpecDFA& dfa, const Word& word) {
  check_word_alphabet(dfa.ap, word, "dfa");
  if (dfa.empty()) return std::nullopt;
  std::size_t s = dfa.initial;
  for (const auto& sym : word) {
    auto next = dfa.step(s, sym);
    if (!next) return std::nullopt;
    s = *next;
  }
  return s;
}

inline bool dfa_accepts(const SpecDFA& dfa, const Word& word) {
  auto end = dfa_run(dfa, word);
  return end && dfa.accepting(*end);
}

/// Re-declares the DFA over a larger AP set. Propositions the DFA did not
/// declare are ignored when reading a symbol.
inline SpecDFA widen(const SpecDFA& dfa, const ApSet& ap) {
  if (!std::includes(ap.begin(), ap.end(), dfa.ap.begin(), dfa.ap.end())) {
    throw InvalidModel("widen: target AP set must contain the DFA's AP set");
  }
  ApSet extra;
  std::set_difference(ap.begin(), ap.end(), dfa.ap.begin(), dfa.ap.end(), std::back_inserter(extra));
  const auto extensions = power_set(extra);
  SpecDFA out;
  out.ap = ap;
  for (std::size_t s = 0; s < dfa.size(); ++s) out.add_state(dfa.name(s), dfa.accepting(s));
  out.initial = dfa.initial;
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    for (const auto& [sym, to] : dfa.transitions_from(s)) {
      for (const auto& ext : extensions) {
        auto props = sym.props();
        props.insert(props.end(), ext.props().begin(), ext.props().end());
        out.add_transition(s, APSymbol(std::move(props)), to);
      }
    }
  }
  return out;
}

}  // namespace relaxplan

#endif  // RELAXPLAN_DFA_HPP
