// relaxplan command-line front end.
//
// Exit codes: 0 ok, 1 usage or invalid input, 2 infeasible, 3 oracle budget
// exceeded, 4 planner and oracle disagree.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relaxplan/relaxplan.hpp"

namespace rp = relaxplan;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInfeasible = 2, kBudget = 3, kDisagree = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string ts, spec, twtl, rules, wfse, builder, soft, out, svg, csv, dot, ap_list, budget;
  std::string combine = "additive";
  std::vector<std::string> subst;
  std::optional<double> subst_default;
  double deletion_cost = 1.0;
  double penalty = 1.0;
  std::optional<double> lambda;
  bool relax = false;
  bool annotated = false;
};

bool strict_mode() {
  const char* v = std::getenv("RELAXPLAN_STRICT");
  return v && std::string(v) == "1";
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) return c == '{';
  }
  return false;
}

template <class T>
T load_as(const std::string& path, const char* kind) {
  auto m = rp::load_model(rp::read_file(path), path, strict_mode());
  if (auto* v = std::get_if<T>(&m)) return std::move(*v);
  if constexpr (std::is_same_v<T, rp::SpecDFA>) {
    if (auto* a = std::get_if<rp::AnnotatedDFA>(&m)) return a->dfa;
  }
  throw rp::InvalidModel(path + ": expected a '" + kind + "' model, found '" + rp::model_kind(m) + "'");
}

rp::ApSet parse_ap_list(const std::string& list) {
  std::vector<std::string> names;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) names.push_back(item);
  }
  return rp::make_ap_set(names);
}

rp::TwtlModel load_twtl(const std::string& path) {
  const auto text = rp::read_file(path);
  if (looks_like_json(text)) return load_as<rp::TwtlModel>(path, "twtl");
  try {
    auto f = rp::parse_twtl(text);
    return {rp::formula_props(f), text, f};
  } catch (const rp::SyntaxError& e) {
    throw e.in_source(path);
  }
}

rp::RulesModel load_rules(const std::string& path, const std::string& ap_list) {
  const auto text = rp::read_file(path);
  if (looks_like_json(text)) return load_as<rp::RulesModel>(path, "rules");
  try {
    auto expr = rp::parse_rules(text);
    auto ap = ap_list.empty() ? rp::rule_props(expr) : parse_ap_list(ap_list);
    return {ap, text, expr};
  } catch (const rp::SyntaxError& e) {
    throw e.in_source(path);
  }
}

// The spec side: a DFA, or a TWTL formula.
struct SpecInput {
  std::optional<rp::SpecDFA> dfa;
  std::optional<rp::TwtlModel> twtl;
  rp::Json json;
  rp::ApSet ap;
};

SpecInput load_spec(const Options& o) {
  if (o.spec.empty() == o.twtl.empty()) throw UsageError("exactly one of --spec or --twtl is required");
  SpecInput s;
  if (!o.spec.empty()) {
    s.dfa = load_as<rp::SpecDFA>(o.spec, "dfa");
    s.json = rp::model_to_json(*s.dfa);
    s.ap = s.dfa->ap;
  } else {
    s.twtl = load_twtl(o.twtl);
    s.json = rp::model_to_json(*s.twtl);
    s.ap = rp::ap_union(s.twtl->ap, rp::formula_props(s.twtl->formula));
  }
  return s;
}

int count_wfse_sources(const Options& o) {
  return static_cast<int>(!o.rules.empty()) + static_cast<int>(!o.wfse.empty()) + static_cast<int>(!o.builder.empty());
}

std::pair<rp::APSymbol, rp::APSymbol> parse_subst(const std::string& text, double& cost) {
  auto eq = text.rfind('=');
  auto slash = text.find("}/{");
  if (eq == std::string::npos || slash == std::string::npos || slash > eq) {
    throw UsageError("--subst expects EXEC/SPEC=COST, e.g. '{T2}/{T1}=5', got '" + text + "'");
  }
  auto exec = rp::parse_edit_symbol(text.substr(0, slash + 1), false);
  auto spec = rp::parse_edit_symbol(text.substr(slash + 2, eq - slash - 2), false);
  try {
    cost = std::stod(text.substr(eq + 1));
  } catch (const std::exception&) {
    throw UsageError("--subst cost is not a number in '" + text + "'");
  }
  return {exec.symbol(), spec.symbol()};
}

// Edit system from --rules, --wfse or --builder (default: pass-through).
rp::EditSystem load_wfse(const Options& o, const rp::ApSet& ap, std::map<std::string, std::string>& params) {
  if (count_wfse_sources(o) > 1) throw UsageError("use at most one of --rules, --wfse, --builder");
  if (!o.rules.empty()) {
    auto r = load_rules(o.rules, o.ap_list);
    try {
      return rp::compile_rules(r.expr, rp::ap_union(ap, r.ap));
    } catch (const rp::SyntaxError& e) {
      throw e.in_source(o.rules);
    }
  }
  if (!o.wfse.empty()) return load_as<rp::EditSystem>(o.wfse, "wfse");
  const std::string b = o.builder.empty() ? "cp" : o.builder;
  params["builder"] = b;
  if (b == "cp") return rp::build_cp(ap);
  if (b == "mvp") {
    params["deletion_cost"] = rp::detail::shortest(o.deletion_cost);
    return rp::build_mvp(ap, o.deletion_cost);
  }
  if (b == "mrp") {
    auto m = o.subst_default ? rp::SubstitutionCostMatrix::uniform(ap, *o.subst_default) : rp::SubstitutionCostMatrix(ap);
    if (o.subst_default) params["subst_default"] = rp::detail::shortest(*o.subst_default);
    for (std::size_t i = 0; i < o.subst.size(); ++i) {
      double c = 0;
      auto [exec, spec] = parse_subst(o.subst[i], c);
      m.set(spec, exec, c);
      params["subst[" + std::to_string(i) + "]"] = o.subst[i];
    }
    return rp::build_mrp(m);
  }
  if (b == "hsc") {
    if (o.soft.empty()) throw UsageError("--builder hsc requires --soft FILE");
    params["penalty"] = rp::detail::shortest(o.penalty);
    auto soft = load_as<rp::SpecDFA>(o.soft, "dfa");
    return rp::build_hsc(soft, o.penalty, rp::ap_union(ap, soft.ap));
  }
  if (b == "ps") return rp::build_ps(ap);
  throw UsageError("unknown builder '" + b + "'");
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void emit(const Options& o, const rp::Json& report) {
  const auto text = rp::dump_canonical(report);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    rp::write_file_atomic(o.out, text);
  }
}

int cmd_plan(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.ts.empty()) throw UsageError("--ts is required");
  auto ts = load_as<rp::TransitionSystem>(o.ts, "ts");
  auto spec = load_spec(o);
  const auto combiner = rp::WeightCombiner::from_name(o.combine);
  rp::Provenance prov{"plan", combiner.name(), o.lambda, {}, {}, 0.0};
  prov.inputs.push_back({"ts", rp::model_to_json(ts)});
  prov.inputs.push_back({"spec", spec.json});

  rp::PlanResult result;
  const bool temporal = o.relax || o.lambda;
  if (temporal) {
    if (!spec.twtl) throw UsageError("--relax-deadlines and --lambda need --twtl");
    if (o.lambda) {
      const auto ap = rp::ap_union(ts.ap, spec.ap);
      auto wfse = load_wfse(o, ap, prov.parameters);
      prov.inputs.push_back({"wfse", rp::model_to_json(wfse)});
      result = rp::plan_bi(ts, spec.twtl->formula, wfse, *o.lambda, combiner);
    } else {
      if (count_wfse_sources(o)) throw UsageError("--relax-deadlines without --lambda takes no edit system");
      prov.combiner = "count";
      result = rp::plan_temporal(ts, spec.twtl->formula);
    }
  } else {
    auto ap = rp::ap_union(ts.ap, spec.ap);
    auto wfse = load_wfse(o, ap, prov.parameters);
    ap = rp::ap_union(ap, wfse.ap);
    const auto dfa = spec.dfa ? rp::widen(*spec.dfa, ap) : rp::twtl_to_dfa(spec.twtl->formula, ap);
    prov.inputs.push_back({"wfse", rp::model_to_json(wfse)});
    result = rp::plan(ts, dfa, wfse, combiner);
  }
  prov.wall_clock_ms = elapsed_ms(t0);
  emit(o, rp::run_report(rp::plan_to_json(result), prov));
  if (!result.feasible) {
    std::cerr << "relaxplan: infeasible: " << (result.diagnosis ? result.diagnosis->describe() : "no plan") << "\n";
    return kInfeasible;
  }
  return kOk;
}

int cmd_pareto(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.ts.empty()) throw UsageError("--ts is required");
  if (o.twtl.empty()) throw UsageError("--twtl is required");
  auto ts = load_as<rp::TransitionSystem>(o.ts, "ts");
  auto spec = load_spec(o);
  const auto combiner = rp::WeightCombiner::from_name(o.combine);
  rp::Provenance prov{"pareto", combiner.name(), std::nullopt, {}, {}, 0.0};
  auto wfse = load_wfse(o, rp::ap_union(ts.ap, spec.ap), prov.parameters);
  prov.inputs.push_back({"ts", rp::model_to_json(ts)});
  prov.inputs.push_back({"spec", spec.json});
  prov.inputs.push_back({"wfse", rp::model_to_json(wfse)});
  const auto front = rp::pareto(ts, spec.twtl->formula, wfse, combiner);
  prov.wall_clock_ms = elapsed_ms(t0);
  if (!o.csv.empty()) rp::write_file_atomic(o.csv, rp::pareto_to_csv(front));
  if (!o.svg.empty()) rp::write_file_atomic(o.svg, rp::pareto_to_svg(front));
  emit(o, rp::run_report(rp::pareto_to_json(front), prov));
  if (!front.feasible) {
    std::cerr << "relaxplan: infeasible: " << (front.diagnosis ? front.diagnosis->describe() : "no plan") << "\n";
    return kInfeasible;
  }
  return kOk;
}

int cmd_compile(const Options& o) {
  if (o.rules.empty() == o.twtl.empty()) throw UsageError("exactly one of --rules or --twtl is required");
  if (o.out.empty()) throw UsageError("--out is required");
  rp::Model model;
  std::string dot;
  if (!o.rules.empty()) {
    auto r = load_rules(o.rules, o.ap_list);
    rp::EditSystem e;
    try {
      e = rp::compile_rules(r.expr, r.ap);
    } catch (const rp::SyntaxError& err) {
      throw err.in_source(o.rules);
    }
    dot = rp::wfse_to_dot(e);
    model = std::move(e);
  } else {
    auto t = load_twtl(o.twtl);
    const auto ap = rp::ap_union(t.ap, o.ap_list.empty() ? rp::ApSet{} : parse_ap_list(o.ap_list));
    if (o.annotated) {
      auto a = rp::twtl_to_annotated_dfa(t.formula, ap);
      dot = rp::dfa_to_dot(a.dfa, &a);
      model = std::move(a);
    } else {
      auto d = rp::twtl_to_dfa(t.formula, ap);
      dot = rp::dfa_to_dot(d);
      model = std::move(d);
    }
  }
  rp::write_file_atomic(o.out, rp::save_model(model));
  if (!o.dot.empty()) rp::write_file_atomic(o.dot, dot);
  return kOk;
}

int cmd_certify(const Options& o) {
  if (o.ts.empty()) throw UsageError("--ts is required");
  auto ts = load_as<rp::TransitionSystem>(o.ts, "ts");
  auto spec = load_spec(o);
  std::map<std::string, std::string> params;
  auto ap = rp::ap_union(ts.ap, spec.ap);
  auto wfse = load_wfse(o, ap, params);
  ap = rp::ap_union(ap, wfse.ap);
  const auto dfa = spec.dfa ? rp::widen(*spec.dfa, ap) : rp::twtl_to_dfa(spec.twtl->formula, ap);
  const auto combiner = rp::WeightCombiner::from_name(o.combine);

  rp::OracleBudget budget;
  if (!o.budget.empty()) {
    std::size_t n = 0, m = 0;
    char comma = 0;
    std::istringstream in(o.budget);
    if (!(in >> n >> comma >> m) || comma != ',' || n == 0 || m == 0) {
      throw UsageError("--budget expects N,M with positive trajectory and spec-word lengths");
    }
    budget.max_trajectory_length = n;
    budget.max_spec_length = m;
  }

  auto planner_wfse = wfse;
  const char* corrupt = std::getenv("RELAXPLAN_TEST_CORRUPT_WEIGHTS");
  if (corrupt && std::string(corrupt) == "1") {
    for (auto& t : planner_wfse.transitions) t.weight += 1.0;
  }
  const auto planned = rp::plan(ts, dfa, planner_wfse, combiner);
  if (planned.feasible && (planned.trajectory.size() > budget.max_trajectory_length ||
                           planned.spec_word.size() > budget.max_spec_length)) {
    throw rp::BudgetExceeded("the planner's witness is longer than the oracle budget");
  }
  const auto oracle = rp::brute_force_plan(ts, dfa, wfse, combiner, budget);

  auto show = [](bool ok, double c) { return ok ? rp::detail::shortest(c) : std::string("infeasible"); };
  std::cout << "planner: " << show(planned.feasible, planned.task_cost) << "\n";
  std::cout << "oracle:  " << show(oracle.cost.has_value(), oracle.cost.value_or(0.0)) << "\n";
  std::cout << "candidates: " << oracle.candidates << "\n";
  bool agree = planned.feasible == oracle.cost.has_value();
  if (agree && planned.feasible) {
    agree = std::fabs(planned.task_cost - *oracle.cost) <= 1e-9;
  }
  std::cout << (agree ? "agree" : "DISAGREE") << "\n";
  return agree ? kOk : kDisagree;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-relaxation planning for transition systems against automaton specifications"};
  app.require_subcommand(1);
  Options o;

  auto model_flags = [&](CLI::App* c) {
    c->add_option("--ts", o.ts, "transition system model (JSON)");
    c->add_option("--spec", o.spec, "specification DFA model (JSON)");
    c->add_option("--twtl", o.twtl, "TWTL formula (text or JSON)");
    c->add_option("--rules", o.rules, "relaxation rules (text or JSON)");
    c->add_option("--wfse", o.wfse, "weighted edit system model (JSON)");
    c->add_option("--builder", o.builder, "edit system builder")
        ->check(CLI::IsMember({"cp", "mvp", "mrp", "hsc", "ps"}));
    c->add_option("--deletion-cost", o.deletion_cost, "mvp: cost per skipped spec symbol");
    c->add_option("--subst", o.subst, "mrp: substitution EXEC/SPEC=COST, repeatable");
    c->add_option("--subst-default", o.subst_default, "mrp: cost of every other substitution");
    c->add_option("--soft", o.soft, "hsc: soft-constraint DFA model (JSON)");
    c->add_option("--penalty", o.penalty, "hsc: penalty for violating the soft constraint");
    c->add_option("--ap", o.ap_list, "comma-separated AP set for text rules");
    c->add_option("--combine", o.combine, "weight combiner")
        ->check(CLI::IsMember({"additive", "multiplicative", "rate", "count"}));
  };

  auto* plan = app.add_subcommand("plan", "compute a minimum-relaxation plan");
  model_flags(plan);
  plan->add_option("--out", o.out, "report file (default: stdout)");
  plan->add_flag("--relax-deadlines", o.relax, "minimize deadline relaxation of --twtl");
  plan->add_option("--lambda", o.lambda, "blend task and temporal cost (needs --twtl)");

  auto* pareto = app.add_subcommand("pareto", "Pareto front of task cost against temporal relaxation");
  model_flags(pareto);
  pareto->add_option("--out", o.out, "report file (default: stdout)");
  pareto->add_option("--csv", o.csv, "CSV output");
  pareto->add_option("--svg", o.svg, "SVG output");

  auto* compile = app.add_subcommand("compile", "compile rules or TWTL into a model file");
  compile->add_option("--rules", o.rules, "relaxation rules (text or JSON)");
  compile->add_option("--twtl", o.twtl, "TWTL formula (text or JSON)");
  compile->add_flag("--annotated", o.annotated, "annotated DFA with deadlines removed");
  compile->add_option("--ap", o.ap_list, "comma-separated AP set");
  compile->add_option("--out", o.out, "output model file");
  compile->add_option("--dot", o.dot, "DOT graph output");

  auto* certify = app.add_subcommand("certify", "check the planner against brute-force enumeration");
  model_flags(certify);
  certify->add_option("--budget", o.budget, "N,M: max trajectory length and spec-word length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*plan) return cmd_plan(o);
    if (*pareto) return cmd_pareto(o);
    if (*compile) return cmd_compile(o);
    if (*certify) return cmd_certify(o);
  } catch (const UsageError& e) {
    std::cerr << "relaxplan: " << e.what() << "\n" << app.get_subcommands().front()->help();
    return kUsage;
  } catch (const rp::BudgetExceeded& e) {
    std::cerr << "relaxplan: budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const rp::Error& e) {
    std::cerr << "relaxplan: error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
