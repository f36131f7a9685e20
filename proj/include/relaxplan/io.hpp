#ifndef RELAXPLAN_IO_HPP
#define RELAXPLAN_IO_HPP

// JSON model files, run reports, and DOT/CSV/SVG export.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "relaxplan/detail/format.hpp"
#include "relaxplan/dfa.hpp"
#include "relaxplan/edit_system.hpp"
#include "relaxplan/error.hpp"
#include "relaxplan/planning.hpp"
#include "relaxplan/product.hpp"
#include "relaxplan/rules.hpp"
#include "relaxplan/symbol.hpp"
#include "relaxplan/transition_system.hpp"
#include "relaxplan/twtl.hpp"
#include "relaxplan/twtl_automaton.hpp"

namespace relaxplan {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

struct RulesModel {
  ApSet ap;
  std::string text;
  RuleExpr expr;
};

struct TwtlModel {
  ApSet ap;
  std::string text;
  TwtlFormula formula;
};

using Model = std::variant<TransitionSystem, SpecDFA, AnnotatedDFA, EditSystem, RulesModel, TwtlModel>;

inline const char* model_kind(const Model& m) {
  static constexpr const char* kinds[] = {"ts", "dfa", "annotated_dfa", "wfse", "rules", "twtl"};
  return kinds[m.index()];
}

namespace detail {

class Reader {
public:
  Reader(std::string source, bool strict) : source_(std::move(source)), strict_(strict) {}

  [[noreturn]] void fail(const std::string& where, const std::string& msg) const {
    throw InvalidModel(source_ + ": " + where + ": " + msg);
  }

  const Json& field(const Json& obj, const std::string& where, const char* key) const {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
    return *it;
  }

  const Json* optional_field(const Json& obj, const char* key) const {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  void allow(const Json& obj, const std::string& where, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(where, "expected an object");
    if (!strict_) return;
    for (const auto& [k, v] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        fail(where, "unknown field '" + k + "'");
      }
    }
  }

  std::string str(const Json& obj, const std::string& where, const char* key) const {
    const auto& v = field(obj, where, key);
    if (!v.is_string()) fail(where + "." + key, "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const Json& obj, const std::string& where, const char* key, bool def) const {
    const auto* v = optional_field(obj, key);
    if (!v) return def;
    if (!v->is_boolean()) fail(where + "." + key, "expected true or false");
    return v->get<bool>();
  }

  double number(const Json& obj, const std::string& where, const char* key, std::optional<double> def) const {
    const auto* v = optional_field(obj, key);
    if (!v) {
      if (def) return *def;
      fail(where, std::string("missing field '") + key + "'");
    }
    if (!v->is_number()) fail(where + "." + key, "expected a number");
    return v->get<double>();
  }

  std::int64_t integer(const Json& obj, const std::string& where, const char* key, std::optional<std::int64_t> def) const {
    const auto* v = optional_field(obj, key);
    if (!v) {
      if (def) return *def;
      fail(where, std::string("missing field '") + key + "'");
    }
    if (!v->is_number_integer()) fail(where + "." + key, "expected an integer");
    return v->get<std::int64_t>();
  }

  const Json& array(const Json& obj, const std::string& where, const char* key) const {
    const auto& v = field(obj, where, key);
    if (!v.is_array()) fail(where + "." + key, "expected an array");
    return v;
  }

  APSymbol symbol(const Json& v, const std::string& where) const {
    if (!v.is_array()) fail(where, "expected an array of proposition names");
    std::vector<std::string> props;
    for (const auto& p : v) {
      if (!p.is_string()) fail(where, "proposition names must be strings");
      props.push_back(p.get<std::string>());
    }
    try {
      return APSymbol(std::move(props));
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }

  EditSymbol edit_symbol(const Json& v, const std::string& where) const {
    if (v.is_string() && v.get<std::string>() == "eps") return EditSymbol::eps();
    return symbol(v, where);
  }

  ApSet ap(const Json& doc) const {
    const auto& v = array(doc, "model", "ap");
    std::vector<std::string> names;
    for (const auto& p : v) {
      if (!p.is_string()) fail("model.ap", "proposition names must be strings");
      names.push_back(p.get<std::string>());
    }
    try {
      return make_ap_set(std::move(names));
    } catch (const Error& e) {
      fail("model.ap", e.what());
    }
  }

private:
  std::string source_;
  bool strict_;
};

inline Json symbol_json(const APSymbol& s) { return Json(s.props()); }
inline Json symbol_json(const EditSymbol& s) { return s.is_eps() ? Json("eps") : symbol_json(s.symbol()); }

inline Json word_json(const Word& w) {
  Json out = Json::array();
  for (const auto& s : w) out.push_back(symbol_json(s));
  return out;
}

inline void check_violations(const std::vector<Violation>& v, const std::string& source) {
  if (!v.empty()) throw InvalidModel(source + ": " + v.front().str());
}

inline TransitionSystem read_ts(const Json& doc, const Reader& r) {
  TransitionSystem ts;
  ts.ap = r.ap(doc);
  const auto& states = r.array(doc, "model", "states");
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    r.allow(states[i], where, {"name", "label"});
    const auto name = r.str(states[i], where, "name");
    if (ts.has_state(name)) r.fail(where, "duplicate state '" + name + "'");
    ts.add_state(name, r.symbol(r.field(states[i], where, "label"), where + ".label"));
  }
  const auto init = r.str(doc, "model", "initial");
  if (!ts.has_state(init)) r.fail("initial", "unknown state '" + init + "'");
  ts.initial = ts.index_of(init);
  const auto& trans = r.array(doc, "model", "transitions");
  for (std::size_t i = 0; i < trans.size(); ++i) {
    const std::string where = "transitions[" + std::to_string(i) + "]";
    r.allow(trans[i], where, {"from", "to", "weight"});
    const auto from = r.str(trans[i], where, "from"), to = r.str(trans[i], where, "to");
    if (!ts.has_state(from)) r.fail(where, "unknown state '" + from + "'");
    if (!ts.has_state(to)) r.fail(where, "unknown state '" + to + "'");
    ts.add_transition(ts.index_of(from), ts.index_of(to), r.integer(trans[i], where, "weight", 1));
  }
  return ts;
}

inline Json write_ts(const TransitionSystem& ts) {
  Json states = Json::array(), trans = Json::array();
  for (std::size_t x = 0; x < ts.size(); ++x) states.push_back({{"name", ts.name(x)}, {"label", symbol_json(ts.label(x))}});
  for (const auto& t : ts.transitions) {
    trans.push_back({{"from", ts.name(t.from)}, {"to", ts.name(t.to)}, {"weight", t.weight}});
  }
  return {{"format_version", kFormatVersion}, {"kind", "ts"},     {"ap", ts.ap},
          {"states", states},                 {"transitions", trans}, {"initial", ts.size() ? ts.name(ts.initial) : ""}};
}

inline SpecDFA read_dfa(const Json& doc, const Reader& r, AnnotatedDFA* annotated) {
  SpecDFA dfa;
  dfa.ap = r.ap(doc);
  const auto& states = r.array(doc, "model", "states");
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    r.allow(states[i], where, {"name", "accepting"});
    const auto name = r.str(states[i], where, "name");
    if (dfa.has_state(name)) r.fail(where, "duplicate state '" + name + "'");
    dfa.add_state(name, r.boolean(states[i], where, "accepting", false));
  }
  const auto init = r.str(doc, "model", "initial");
  if (!dfa.has_state(init)) r.fail("initial", "unknown state '" + init + "'");
  dfa.initial = dfa.index_of(init);
  const auto& trans = r.array(doc, "model", "transitions");
  for (std::size_t i = 0; i < trans.size(); ++i) {
    const std::string where = "transitions[" + std::to_string(i) + "]";
    if (annotated) {
      r.allow(trans[i], where, {"from", "symbol", "to", "starts", "completes"});
    } else {
      r.allow(trans[i], where, {"from", "symbol", "to"});
    }
    const auto from = r.str(trans[i], where, "from"), to = r.str(trans[i], where, "to");
    if (!dfa.has_state(from)) r.fail(where, "unknown state '" + from + "'");
    if (!dfa.has_state(to)) r.fail(where, "unknown state '" + to + "'");
    const auto sym = r.symbol(r.field(trans[i], where, "symbol"), where + ".symbol");
    try {
      dfa.add_transition(dfa.index_of(from), sym, dfa.index_of(to));
    } catch (const Error& e) {
      r.fail(where, e.what());
    }
    if (annotated) {
      TransitionMarkers m;
      for (auto [key, vec] : {std::pair{"starts", &m.starts}, std::pair{"completes", &m.completes}}) {
        if (const auto* v = r.optional_field(trans[i], key)) {
          if (!v->is_array()) r.fail(where + "." + key, "expected an array of within ids");
          for (const auto& id : *v) {
            if (!id.is_number_integer()) r.fail(where + "." + key, "within ids must be integers");
            vec->push_back(id.get<int>());
          }
        }
      }
      detail::normalize(m);
      if (!m.empty()) annotated->markers[{dfa.index_of(from), sym}] = m;
    }
  }
  return dfa;
}

inline Json write_dfa(const SpecDFA& dfa, const AnnotatedDFA* annotated) {
  Json states = Json::array(), trans = Json::array();
  for (std::size_t s = 0; s < dfa.size(); ++s) states.push_back({{"name", dfa.name(s)}, {"accepting", dfa.accepting(s)}});
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    for (const auto& [sym, to] : dfa.transitions_from(s)) {
      Json t = {{"from", dfa.name(s)}, {"symbol", symbol_json(sym)}, {"to", dfa.name(to)}};
      if (annotated) {
        if (const auto* m = annotated->markers_at(s, sym)) {
          if (!m->starts.empty()) t["starts"] = m->starts;
          if (!m->completes.empty()) t["completes"] = m->completes;
        }
      }
      trans.push_back(std::move(t));
    }
  }
  Json doc = {{"format_version", kFormatVersion},
              {"kind", annotated ? "annotated_dfa" : "dfa"},
              {"ap", dfa.ap},
              {"states", states},
              {"transitions", trans},
              {"initial", dfa.size() ? dfa.name(dfa.initial) : ""}};
  if (annotated) {
    Json w = Json::array();
    for (const auto& info : annotated->withins) {
      w.push_back({{"id", info.id}, {"lower", info.lower}, {"upper", info.upper}});
    }
    doc["withins"] = w;
  }
  return doc;
}

inline EditSystem read_wfse(const Json& doc, const Reader& r) {
  EditSystem e;
  e.ap = r.ap(doc);
  const auto& states = r.array(doc, "model", "states");
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    r.allow(states[i], where, {"name", "accepting", "final_weight"});
    const auto name = r.str(states[i], where, "name");
    if (e.has_state(name)) r.fail(where, "duplicate state '" + name + "'");
    e.add_state(name, r.boolean(states[i], where, "accepting", false), r.number(states[i], where, "final_weight", 0.0));
  }
  const auto init = r.str(doc, "model", "initial");
  if (!e.has_state(init)) r.fail("initial", "unknown state '" + init + "'");
  e.initial = e.index_of(init);
  const auto& trans = r.array(doc, "model", "transitions");
  for (std::size_t i = 0; i < trans.size(); ++i) {
    const std::string where = "transitions[" + std::to_string(i) + "]";
    r.allow(trans[i], where, {"from", "exec", "spec", "weight", "to"});
    const auto from = r.str(trans[i], where, "from"), to = r.str(trans[i], where, "to");
    if (!e.has_state(from)) r.fail(where, "unknown state '" + from + "'");
    if (!e.has_state(to)) r.fail(where, "unknown state '" + to + "'");
    e.add_transition(e.index_of(from), r.edit_symbol(r.field(trans[i], where, "exec"), where + ".exec"),
                     r.edit_symbol(r.field(trans[i], where, "spec"), where + ".spec"),
                     r.number(trans[i], where, "weight", 0.0), e.index_of(to));
  }
  return e;
}

inline Json write_wfse(const EditSystem& e) {
  Json states = Json::array(), trans = Json::array();
  for (std::size_t z = 0; z < e.size(); ++z) {
    states.push_back({{"name", e.name(z)}, {"accepting", e.accepting(z)}, {"final_weight", e.final_weight(z)}});
  }
  for (const auto& t : e.transitions) {
    trans.push_back({{"from", e.name(t.from)},
                     {"exec", symbol_json(t.exec)},
                     {"spec", symbol_json(t.spec)},
                     {"weight", t.weight},
                     {"to", e.name(t.to)}});
  }
  return {{"format_version", kFormatVersion}, {"kind", "wfse"},       {"ap", e.ap},
          {"states", states},                 {"transitions", trans}, {"initial", e.size() ? e.name(e.initial) : ""}};
}

}  // namespace detail

/// Canonical JSON form of a model.
inline Json model_to_json(const Model& m) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TransitionSystem>) {
          return detail::write_ts(v);
        } else if constexpr (std::is_same_v<T, SpecDFA>) {
          return detail::write_dfa(v, nullptr);
        } else if constexpr (std::is_same_v<T, AnnotatedDFA>) {
          return detail::write_dfa(v.dfa, &v);
        } else if constexpr (std::is_same_v<T, EditSystem>) {
          return detail::write_wfse(v);
        } else if constexpr (std::is_same_v<T, RulesModel>) {
          return {{"format_version", kFormatVersion}, {"kind", "rules"}, {"ap", v.ap}, {"text", v.text}};
        } else {
          return {{"format_version", kFormatVersion}, {"kind", "twtl"}, {"ap", v.ap}, {"formula", v.text}};
        }
      },
      m);
}

inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

inline std::string save_model(const Model& m) { return dump_canonical(model_to_json(m)); }

/// Parses a JSON model document. `source` prefixes error messages. Strict
/// mode rejects unknown fields.
inline Model load_model(const std::string& text, const std::string& source = "<model>", bool strict = false) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidModel(source + ": malformed JSON at byte " + std::to_string(e.byte));
  }
  detail::Reader r(source, strict);
  if (!doc.is_object()) r.fail("model", "expected a JSON object");
  const auto version = r.integer(doc, "model", "format_version", std::nullopt);
  if (version != kFormatVersion) r.fail("format_version", "unsupported version " + std::to_string(version));
  const auto kind = r.str(doc, "model", "kind");
  if (kind == "ts") {
    r.allow(doc, "model", {"format_version", "kind", "ap", "states", "initial", "transitions"});
    auto ts = detail::read_ts(doc, r);
    detail::check_violations(validate(ts), source);
    return ts;
  }
  if (kind == "dfa") {
    r.allow(doc, "model", {"format_version", "kind", "ap", "states", "initial", "transitions"});
    auto dfa = detail::read_dfa(doc, r, nullptr);
    detail::check_violations(validate(dfa), source);
    return dfa;
  }
  if (kind == "annotated_dfa") {
    r.allow(doc, "model", {"format_version", "kind", "ap", "states", "initial", "transitions", "withins"});
    AnnotatedDFA a;
    a.dfa = detail::read_dfa(doc, r, &a);
    const auto& w = r.array(doc, "model", "withins");
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::string where = "withins[" + std::to_string(i) + "]";
      r.allow(w[i], where, {"id", "lower", "upper"});
      a.withins.push_back({static_cast<int>(r.integer(w[i], where, "id", std::nullopt)),
                           static_cast<int>(r.integer(w[i], where, "lower", 0)),
                           static_cast<int>(r.integer(w[i], where, "upper", std::nullopt)), false});
    }
    detail::check_violations(validate(a.dfa), source);
    return a;
  }
  if (kind == "wfse") {
    r.allow(doc, "model", {"format_version", "kind", "ap", "states", "initial", "transitions"});
    auto e = detail::read_wfse(doc, r);
    detail::check_violations(validate(e), source);
    return e;
  }
  if (kind == "rules") {
    r.allow(doc, "model", {"format_version", "kind", "ap", "text"});
    RulesModel m{r.ap(doc), r.str(doc, "model", "text"), {}};
    try {
      m.expr = parse_rules(m.text);
    } catch (const SyntaxError& e) {
      throw e.in_source(source + ": text");
    }
    return m;
  }
  if (kind == "twtl") {
    r.allow(doc, "model", {"format_version", "kind", "ap", "formula"});
    TwtlModel m{r.ap(doc), r.str(doc, "model", "formula"), {}};
    try {
      m.formula = parse_twtl(m.text);
    } catch (const SyntaxError& e) {
      throw e.in_source(source + ": formula");
    }
    return m;
  }
  r.fail("kind", "unknown model kind '" + kind + "'");
}

/// 64-bit FNV-1a, as 16 hex digits.
inline std::string fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidModel(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temporary file in the same directory, then renames.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(path + ": cannot write file");
    out << content;
    out.flush();
    if (!out) throw Error(path + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(path + ": cannot replace file");
  }
}

// ---------------------------------------------------------------- reports

struct ReportInput {
  std::string role;  // "ts", "spec", "wfse", ...
  Json model;
};

struct Provenance {
  std::string command;
  std::string combiner;
  std::optional<double> lambda;
  std::vector<ReportInput> inputs;
  std::map<std::string, std::string> parameters;
  double wall_clock_ms = 0.0;
};

inline Json provenance_json(const Provenance& p) {
  Json inputs = Json::object();
  for (const auto& in : p.inputs) {
    inputs[in.role] = {{"digest", fnv1a64(dump_canonical(in.model))}, {"model", in.model}};
  }
  Json j = {{"command", p.command},
            {"combiner", p.combiner},
            {"inputs", inputs},
            {"parameters", p.parameters},
            {"wall_clock_ms", p.wall_clock_ms}};
  j["lambda"] = p.lambda ? Json(*p.lambda) : Json(nullptr);
  return j;
}

inline Json relaxation_json(const std::optional<TemporalRelaxation>& r) {
  if (!r) return nullptr;
  return {{"tau", r->tau}, {"ltr", r->ltr}};
}

inline Json plan_to_json(const PlanResult& r) {
  Json j;
  j["feasible"] = r.feasible;
  if (!r.feasible) {
    if (r.diagnosis) {
      j["diagnosis"] = {{"message", r.diagnosis->describe()},
                        {"reachable_states", r.diagnosis->reachable_states},
                        {"dfa_accepting_reached", r.diagnosis->dfa_accepting_reached},
                        {"wfse_accepting_reached", r.diagnosis->wfse_accepting_reached}};
    }
    return j;
  }
  j["trajectory"] = r.trajectory_names;
  j["exec_word"] = detail::word_json(r.exec_word);
  j["spec_word"] = detail::word_json(r.spec_word);
  Json edits = Json::array();
  for (const auto& e : r.edits) {
    edits.push_back({{"kind", to_string(e.kind)},
                     {"step", e.step},
                     {"exec", detail::symbol_json(e.exec)},
                     {"spec", detail::symbol_json(e.spec)},
                     {"weight", e.weight}});
  }
  j["edits"] = edits;
  j["cost"] = {{"task_cost", r.task_cost}, {"temporal_cost", r.temporal_cost}, {"combined", r.combined}};
  j["relaxation"] = relaxation_json(r.relaxation);
  j["product"] = {{"states", r.product_state_count}, {"edges", r.product_edge_count}};
  return j;
}

inline Json pareto_to_json(const ParetoFront& f) {
  Json j;
  j["feasible"] = f.feasible;
  Json entries = Json::array();
  for (const auto& e : f.entries) {
    entries.push_back({{"lambda_lo", e.lambda_lo},
                       {"lambda_hi", e.lambda_hi},
                       {"C_E", e.plan.task_cost},
                       {"C_TR", e.plan.temporal_cost},
                       {"trajectory", e.plan.trajectory_names},
                       {"relaxation", relaxation_json(e.plan.relaxation)}});
  }
  j["entries"] = entries;
  j["breakpoints"] = f.breakpoints();
  if (!f.feasible && f.diagnosis) j["diagnosis"] = {{"message", f.diagnosis->describe()}};
  return j;
}

inline Json run_report(const Json& result, const Provenance& p) {
  return {{"format_version", kFormatVersion}, {"kind", "report"}, {"result", result}, {"provenance", provenance_json(p)}};
}

// ---------------------------------------------------------------- CSV / SVG

namespace detail {
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}
}  // namespace detail

inline std::string pareto_to_csv(const ParetoFront& f) {
  std::string out = "lambda_lo,lambda_hi,C_E,C_TR,trajectory\r\n";
  for (const auto& e : f.entries) {
    out += detail::general6(e.lambda_lo) + "," + detail::general6(e.lambda_hi) + "," +
           detail::general6(e.plan.task_cost) + "," + detail::general6(e.plan.temporal_cost) + "," +
           detail::csv_field(detail::join(e.plan.trajectory_names, " ")) + "\r\n";
  }
  return out;
}

/// Two panels: the lower envelope of C_bi over λ, and the (C_TR, C_E) front.
inline std::string pareto_to_svg(const ParetoFront& f) {
  const double W = 360, H = 280, pad = 40;
  double cmax = 1.0, ce_min = 0, ce_max = 1, tr_min = 0, tr_max = 1;
  if (!f.entries.empty()) {
    ce_min = ce_max = f.entries.front().plan.task_cost;
    tr_min = tr_max = f.entries.front().plan.temporal_cost;
  }
  for (const auto& e : f.entries) {
    cmax = std::max({cmax, e.plan.task_cost, e.plan.temporal_cost});
    ce_min = std::min(ce_min, e.plan.task_cost);
    ce_max = std::max(ce_max, e.plan.task_cost);
    tr_min = std::min(tr_min, e.plan.temporal_cost);
    tr_max = std::max(tr_max, e.plan.temporal_cost);
  }
  auto num = [](double v) { return detail::general6(v); };
  auto span = [](double lo, double hi) { return hi > lo ? hi - lo : 1.0; };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(2 * W) << "\" height=\"" << num(H)
     << "\" viewBox=\"0 0 " << num(2 * W) << " " << num(H) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Left panel: C_bi(λ) = λ C_E + (1-λ) C_TR on each entry's interval.
  auto lx = [&](double lambda) { return pad + lambda * (W - 2 * pad); };
  auto ly = [&](double c) { return H - pad - c / cmax * (H - 2 * pad); };
  os << "<g class=\"envelope\">\n";
  os << "<line x1=\"" << num(pad) << "\" y1=\"" << num(H - pad) << "\" x2=\"" << num(W - pad) << "\" y2=\""
     << num(H - pad) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << num(pad) << "\" y1=\"" << num(pad) << "\" x2=\"" << num(pad) << "\" y2=\"" << num(H - pad)
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << num(W / 2) << "\" y=\"" << num(H - 8) << "\" text-anchor=\"middle\">lambda</text>\n";
  os << "<text x=\"12\" y=\"" << num(pad - 12) << "\">C_bi</text>\n";
  for (const auto& e : f.entries) {
    auto c = [&](double l) { return l * e.plan.task_cost + (1 - l) * e.plan.temporal_cost; };
    os << "<line class=\"envelope-segment\" data-lambda-lo=\"" << num(e.lambda_lo) << "\" data-lambda-hi=\""
       << num(e.lambda_hi) << "\" x1=\"" << num(lx(e.lambda_lo)) << "\" y1=\"" << num(ly(c(e.lambda_lo)))
       << "\" x2=\"" << num(lx(e.lambda_hi)) << "\" y2=\"" << num(ly(c(e.lambda_hi)))
       << "\" stroke=\"steelblue\" stroke-width=\"2\"/>\n";
  }
  for (double b : f.breakpoints()) {
    os << "<text class=\"breakpoint\" data-lambda=\"" << num(b) << "\" x=\"" << num(lx(b)) << "\" y=\""
       << num(H - pad + 14) << "\" text-anchor=\"middle\" font-size=\"10\">" << num(b) << "</text>\n";
  }
  os << "</g>\n";

  // Right panel: front points.
  auto px = [&](double tr) { return W + pad + (tr - tr_min) / span(tr_min, tr_max) * (W - 2 * pad); };
  auto py = [&](double ce) { return H - pad - (ce - ce_min) / span(ce_min, ce_max) * (H - 2 * pad); };
  os << "<g class=\"front\">\n";
  os << "<line x1=\"" << num(W + pad) << "\" y1=\"" << num(H - pad) << "\" x2=\"" << num(2 * W - pad) << "\" y2=\""
     << num(H - pad) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << num(W + pad) << "\" y1=\"" << num(pad) << "\" x2=\"" << num(W + pad) << "\" y2=\""
     << num(H - pad) << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << num(W + W / 2) << "\" y=\"" << num(H - 8) << "\" text-anchor=\"middle\">C_TR</text>\n";
  os << "<text x=\"" << num(W + 12) << "\" y=\"" << num(pad - 12) << "\">C_E</text>\n";
  for (const auto& e : f.entries) {
    os << "<circle class=\"front-point\" data-lambda-lo=\"" << num(e.lambda_lo) << "\" data-lambda-hi=\""
       << num(e.lambda_hi) << "\" cx=\"" << num(px(e.plan.temporal_cost)) << "\" cy=\""
       << num(py(e.plan.task_cost)) << "\" r=\"4\" fill=\"firebrick\"/>\n";
    os << "<text x=\"" << num(px(e.plan.temporal_cost) + 6) << "\" y=\"" << num(py(e.plan.task_cost) - 6)
       << "\" font-size=\"10\">(" << num(e.plan.temporal_cost) << ", " << num(e.plan.task_cost) << ")</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------- DOT

inline std::string dfa_to_dot(const SpecDFA& dfa, const AnnotatedDFA* annotated = nullptr) {
  std::ostringstream os;
  os << "digraph dfa {\n  rankdir=LR;\n  init [shape=point];\n";
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    os << "  s" << s << " [label=\"" << detail::dot_escape(dfa.name(s)) << "\", shape="
       << (dfa.accepting(s) ? "doublecircle" : "circle") << "];\n";
  }
  if (!dfa.empty()) os << "  init -> s" << dfa.initial << ";\n";
  for (std::size_t s = 0; s < dfa.size(); ++s) {
    for (const auto& [sym, to] : dfa.transitions_from(s)) {
      std::string label = sym.str();
      if (annotated) {
        if (const auto* m = annotated->markers_at(s, sym)) {
          for (int id : m->starts) label += " start" + std::to_string(id);
          for (int id : m->completes) label += " done" + std::to_string(id);
        }
      }
      os << "  s" << s << " -> s" << to << " [label=\"" << detail::dot_escape(label) << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

inline std::string wfse_to_dot(const EditSystem& e) {
  std::ostringstream os;
  os << "digraph wfse {\n  rankdir=LR;\n  init [shape=point];\n";
  for (std::size_t z = 0; z < e.size(); ++z) {
    std::string label = e.name(z);
    if (e.accepting(z) && e.final_weight(z) != 0.0) label += " / " + detail::shortest(e.final_weight(z));
    os << "  z" << z << " [label=\"" << detail::dot_escape(label) << "\", shape="
       << (e.accepting(z) ? "doublecircle" : "circle") << "];\n";
  }
  if (!e.empty()) os << "  init -> z" << e.initial << ";\n";
  for (const auto& t : e.transitions) {
    os << "  z" << t.from << " -> z" << t.to << " [label=\""
       << detail::dot_escape(t.exec.str() + "/" + t.spec.str() + ", " + detail::shortest(t.weight)) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace relaxplan

#endif  // RELAXPLAN_IO_HPP
