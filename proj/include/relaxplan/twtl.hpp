#ifndef RELAXPLAN_TWTL_HPP
#define RELAXPLAN_TWTL_HPP

// Time-window temporal logic fragment:
//
//   formula := disj
//   disj    := conj ('||' conj)*
//   conj    := seq ('&&' seq)*
//   seq     := unit ('.' unit)*
//   unit    := 'H^' int ['!'] name | '[' formula ']^[' int ',' int ']' | '(' formula ')'
//
// `true` is the constant proposition. Negation of compound formulas is
// outside the fragment.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relaxplan/error.hpp"
#include "relaxplan/symbol.hpp"

namespace relaxplan {

struct TwtlFormula {
  enum class Kind { Hold, And, Or, Concat, Within };

  Kind kind = Kind::Hold;
  int duration = 0;       // Hold
  std::string prop;       // Hold; "true" is the constant
  bool negated = false;   // Hold
  int lower = 0;          // Within
  int upper = 0;          // Within
  int within_id = 0;      // Within: 1-based, textual order
  int uid = 0;            // unique node id, pre-order
  std::vector<TwtlFormula> children;

  static TwtlFormula hold(int d, std::string prop, bool negated = false) {
    TwtlFormula f;
    f.duration = d;
    f.prop = std::move(prop);
    f.negated = negated;
    return f;
  }
  static TwtlFormula conj(TwtlFormula l, TwtlFormula r) { return binary(Kind::And, std::move(l), std::move(r)); }
  static TwtlFormula disj(TwtlFormula l, TwtlFormula r) { return binary(Kind::Or, std::move(l), std::move(r)); }
  static TwtlFormula concat(TwtlFormula l, TwtlFormula r) { return binary(Kind::Concat, std::move(l), std::move(r)); }
  static TwtlFormula within(TwtlFormula child, int a, int b) {
    TwtlFormula f;
    f.kind = Kind::Within;
    f.lower = a;
    f.upper = b;
    f.children.push_back(std::move(child));
    return f;
  }

  /// Structural equality, ignoring numbering.
  friend bool operator==(const TwtlFormula& x, const TwtlFormula& y) {
    return x.kind == y.kind && x.duration == y.duration && x.prop == y.prop && x.negated == y.negated &&
           x.lower == y.lower && x.upper == y.upper && x.children == y.children;
  }

private:
  static TwtlFormula binary(Kind k, TwtlFormula l, TwtlFormula r) {
    TwtlFormula f;
    f.kind = k;
    f.children.push_back(std::move(l));
    f.children.push_back(std::move(r));
    return f;
  }
};

/// Assigns within ids (1..m) and node uids in pre-order. Returns m.
inline int number_formula(TwtlFormula& f) {
  int next_within = 0, next_uid = 0;
  auto walk = [&](auto&& self, TwtlFormula& n) -> void {
    n.uid = next_uid++;
    if (n.kind == TwtlFormula::Kind::Within) n.within_id = ++next_within;
    for (auto& c : n.children) self(self, c);
  };
  walk(walk, f);
  return next_within;
}

struct WithinInfo {
  int id = 0;
  int lower = 0;
  int upper = 0;
  bool nested = false;  // inside another within
};

inline std::vector<WithinInfo> withins_of(const TwtlFormula& f) {
  std::vector<WithinInfo> out;
  auto walk = [&](auto&& self, const TwtlFormula& n, bool inside) -> void {
    if (n.kind == TwtlFormula::Kind::Within) out.push_back({n.within_id, n.lower, n.upper, inside});
    for (const auto& c : n.children) self(self, c, inside || n.kind == TwtlFormula::Kind::Within);
  };
  walk(walk, f, false);
  return out;
}

/// Latest time step at which the formula can complete when started at 0.
inline int horizon(const TwtlFormula& f) {
  using K = TwtlFormula::Kind;
  switch (f.kind) {
    case K::Hold: return f.duration;
    case K::And:
    case K::Or: return std::max(horizon(f.children[0]), horizon(f.children[1]));
    case K::Concat: return horizon(f.children[0]) + horizon(f.children[1]) + 1;
    case K::Within: return f.upper;
  }
  return 0;
}

inline ApSet formula_props(const TwtlFormula& f) {
  std::vector<std::string> names;
  auto walk = [&](auto&& self, const TwtlFormula& n) -> void {
    if (n.kind == TwtlFormula::Kind::Hold && n.prop != "true") names.push_back(n.prop);
    for (const auto& c : n.children) self(self, c);
  };
  walk(walk, f);
  return make_ap_set(std::move(names));
}

inline std::string to_string(const TwtlFormula& f) {
  using K = TwtlFormula::Kind;
  switch (f.kind) {
    case K::Hold:
      return "H^" + std::to_string(f.duration) + " " + (f.negated ? "!" : "") + f.prop;
    case K::And:
      return "(" + to_string(f.children[0]) + " && " + to_string(f.children[1]) + ")";
    case K::Or:
      return "(" + to_string(f.children[0]) + " || " + to_string(f.children[1]) + ")";
    case K::Concat:
      return "(" + to_string(f.children[0]) + " . " + to_string(f.children[1]) + ")";
    case K::Within:
      return "[" + to_string(f.children[0]) + "]^[" + std::to_string(f.lower) + "," + std::to_string(f.upper) + "]";
  }
  return {};
}

namespace detail {

class TwtlParser {
public:
  explicit TwtlParser(std::string_view text) : text_(text) {}

  TwtlFormula parse() {
    skip_ws();
    if (eof()) fail("empty formula");
    auto f = parse_disj();
    skip_ws();
    if (!eof()) fail(std::string("unexpected '") + peek() + "'");
    return f;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(msg, line, col);
  }

  int parse_int() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a nonnegative integer");
    long long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      if (v > 1000000) fail("integer too large");
      ++pos_;
    }
    return static_cast<int>(v);
  }

  std::string parse_name() {
    skip_ws();
    const std::size_t start = pos_;
    if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) fail("expected a proposition name");
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  TwtlFormula parse_disj() {
    auto f = parse_conj();
    while (accept("||")) f = TwtlFormula::disj(std::move(f), parse_conj());
    return f;
  }

  TwtlFormula parse_conj() {
    auto f = parse_seq();
    while (accept("&&")) f = TwtlFormula::conj(std::move(f), parse_seq());
    return f;
  }

  TwtlFormula parse_seq() {
    auto f = parse_unit();
    while (accept(".")) f = TwtlFormula::concat(std::move(f), parse_unit());
    return f;
  }

  TwtlFormula parse_unit() {
    skip_ws();
    if (peek() == '!') {
      ++pos_;
      skip_ws();
      if (peek() == '(' || peek() == '[') {
        throw FragmentError("negation of a compound formula is outside the supported fragment");
      }
      fail("negation must follow a hold operator, e.g. 'H^0 !a'");
    }
    if (accept("H^")) {
      int d = parse_int();
      skip_ws();
      bool neg = false;
      if (peek() == '!') {
        ++pos_;
        neg = true;
        skip_ws();
        if (peek() == '(' || peek() == '[') {
          throw FragmentError("negation of a compound formula is outside the supported fragment");
        }
      }
      return TwtlFormula::hold(d, parse_name(), neg);
    }
    if (accept("[")) {
      auto child = parse_disj();
      expect("]");
      expect("^");
      expect("[");
      int a = parse_int();
      expect(",");
      int b = parse_int();
      expect("]");
      if (a > b) fail("window lower bound exceeds upper bound");
      return TwtlFormula::within(std::move(child), a, b);
    }
    if (accept("(")) {
      auto f = parse_disj();
      expect(")");
      return f;
    }
    fail(eof() ? "unexpected end of formula" : std::string("unexpected '") + peek() + "'");
  }
};

}  // namespace detail

/// Parses and numbers a formula.
inline TwtlFormula parse_twtl(std::string_view text) {
  auto f = detail::TwtlParser(text).parse();
  number_formula(f);
  return f;
}

}  // namespace relaxplan

#endif  // RELAXPLAN_TWTL_HPP
