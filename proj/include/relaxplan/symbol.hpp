#ifndef RELAXPLAN_SYMBOL_HPP
#define RELAXPLAN_SYMBOL_HPP

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relaxplan/error.hpp"

namespace relaxplan {

/// Sorted, duplicate-free list of atomic proposition names.
using ApSet = std::vector<std::string>;

inline bool is_valid_prop_name(std::string_view name) {
  if (name.empty()) return false;
  if (name.find("\xCE\xB5") != std::string_view::npos) return false;  // ε
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    switch (c) {
      case '/': case ',': case '(': case ')': case '*': case '|':
      case '{': case '}':
        return false;
      default:
        break;
    }
  }
  return true;
}

inline ApSet make_ap_set(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  for (const auto& n : names) {
    if (!is_valid_prop_name(n)) throw InvalidModel("invalid proposition name '" + n + "'");
  }
  return names;
}

inline ApSet ap_union(const ApSet& a, const ApSet& b) {
  ApSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// An element of 2^AP. Propositions are kept sorted so that equality, ordering
/// and hashing do not depend on insertion order.
class APSymbol {
public:
  APSymbol() = default;
  APSymbol(std::initializer_list<std::string> props) : APSymbol(std::vector<std::string>(props)) {}
  explicit APSymbol(std::vector<std::string> props) : props_(std::move(props)) {
    std::sort(props_.begin(), props_.end());
    props_.erase(std::unique(props_.begin(), props_.end()), props_.end());
    for (const auto& p : props_) {
      if (!is_valid_prop_name(p)) throw InvalidModel("invalid proposition name '" + p + "'");
    }
  }

  const std::vector<std::string>& props() const noexcept { return props_; }
  bool empty() const noexcept { return props_.empty(); }
  bool contains(std::string_view p) const {
    return std::binary_search(props_.begin(), props_.end(), p);
  }
  bool subset_of(const ApSet& ap) const {
    return std::includes(ap.begin(), ap.end(), props_.begin(), props_.end());
  }

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < props_.size(); ++i) {
      if (i) out += ',';
      out += props_[i];
    }
    return out + "}";
  }

  friend bool operator==(const APSymbol&, const APSymbol&) = default;
  friend auto operator<=>(const APSymbol& a, const APSymbol& b) { return a.props_ <=> b.props_; }

private:
  std::vector<std::string> props_;
};

/// Either an APSymbol or the empty edit symbol ε. ε differs from {}.
class EditSymbol {
public:
  EditSymbol() = default;  // ε
  EditSymbol(APSymbol s) : sym_(std::move(s)) {}  // NOLINT: implicit by intent

  static EditSymbol eps() { return EditSymbol(); }

  bool is_eps() const noexcept { return !sym_.has_value(); }
  const APSymbol& symbol() const { return *sym_; }
  std::string str() const { return sym_ ? sym_->str() : std::string("eps"); }

  friend bool operator==(const EditSymbol&, const EditSymbol&) = default;
  friend auto operator<=>(const EditSymbol& a, const EditSymbol& b) {
    if (a.is_eps() || b.is_eps()) return (!a.is_eps()) <=> (!b.is_eps());
    return *a.sym_ <=> *b.sym_;
  }

private:
  std::optional<APSymbol> sym_;
};

using Word = std::vector<APSymbol>;

inline std::string word_str(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += w[i].str();
  }
  return out;
}

/// All 2^|ap| symbols, ordered by bitmask over the sorted AP list.
inline std::vector<APSymbol> power_set(const ApSet& ap, std::size_t limit = std::size_t(1) << 20) {
  if (ap.size() >= 63 || (std::size_t(1) << ap.size()) > limit) {
    throw AlphabetError("power set of " + std::to_string(ap.size()) + " propositions exceeds budget");
  }
  std::vector<APSymbol> out;
  const std::size_t n = std::size_t(1) << ap.size();
  out.reserve(n);
  for (std::size_t mask = 0; mask < n; ++mask) {
    std::vector<std::string> props;
    for (std::size_t i = 0; i < ap.size(); ++i) {
      if (mask & (std::size_t(1) << i)) props.push_back(ap[i]);
    }
    out.emplace_back(std::move(props));
  }
  return out;
}

/// Parses "{a,b}", "{}" (and "eps" when allow_eps). Whitespace is ignored.
inline EditSymbol parse_edit_symbol(std::string_view text, bool allow_eps = true) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  }
  if (allow_eps && (t == "eps" || t == "\xCE\xB5")) return EditSymbol::eps();
  if (t.size() < 2 || t.front() != '{' || t.back() != '}') {
    throw InvalidModel("malformed symbol '" + std::string(text) + "'");
  }
  std::vector<std::string> props;
  std::string body = t.substr(1, t.size() - 2);
  std::size_t start = 0;
  while (!body.empty() && start <= body.size()) {
    std::size_t comma = body.find(',', start);
    if (comma == std::string::npos) comma = body.size();
    props.push_back(body.substr(start, comma - start));
    start = comma + 1;
  }
  return APSymbol(std::move(props));
}

}  // namespace relaxplan

template <>
struct std::hash<relaxplan::APSymbol> {
  std::size_t operator()(const relaxplan::APSymbol& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& p : s.props()) {
      h ^= std::hash<std::string>{}(p) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

#endif  // RELAXPLAN_SYMBOL_HPP
