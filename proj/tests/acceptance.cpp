// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and time limits are fixed here.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli_cases.hpp"
#include "support.hpp"

namespace rp = relaxplan;
namespace ts = testing_support;

namespace {

constexpr double kCostTolerance = 1e-9;
constexpr double kBreakpointTolerance = 1e-9;
constexpr double kOracleSeconds = 60.0;
constexpr double kParetoSeconds = 1.0;
constexpr double kScalingSeconds = 120.0;
constexpr double kMinR2 = 0.9;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  // Records the first few failures only.
  void fail(const std::string& why) {
    if (pass || failures < 3) detail << (failures ? "; " : "") << why;
    pass = false;
    ++failures;
  }
  int failures = 0;
};

int g_passed = 0;

void report(int n, const char* title, const Verdict& v, const std::string& summary) {
  g_passed += v.pass;
  std::cout << "criterion " << n << ": " << (v.pass ? "PASS" : "FAIL") << "  " << title << "  (" << summary;
  if (!v.pass) std::cout << "; " << v.detail.str();
  std::cout << ")" << std::endl;
}

// Product edges may never exceed |delta_T| * |delta_E| * |delta_A|.
struct EdgeBound {
  std::size_t checked = 0;
  std::size_t violations = 0;

  void check(const rp::TransitionSystem& t, const rp::EditSystem& e, const rp::SpecDFA& d,
             const rp::ProductAutomaton& pa) {
    ++checked;
    if (pa.edges.size() > t.transitions.size() * e.transitions.size() * d.transition_count()) ++violations;
  }
};

struct Instance {
  rp::TransitionSystem t;
  rp::SpecDFA d;
  rp::EditSystem e;
};

// |X| <= 8, |S| <= 5, |Z| <= 4 over one or two propositions.
Instance random_instance(ts::Rng& rng) {
  const auto ap = ts::make_ap(static_cast<std::size_t>(ts::uniform(rng, 1, 2)));
  const auto nx = static_cast<std::size_t>(ts::uniform(rng, 1, 8));
  Instance in;
  in.t = ts::random_ts(rng, nx, ap, 2.0 / static_cast<double>(nx) + 0.05);
  in.d = ts::random_dfa(rng, static_cast<std::size_t>(ts::uniform(rng, 1, 5)), ap, ap.size() == 1 ? 0.8 : 0.6);
  in.e = ts::random_wfse(rng, static_cast<std::size_t>(ts::uniform(rng, 1, 4)), ap, 5);
  return in;
}

// Weight of the cheapest transition between consecutive states, or nothing
// when the sequence is not a run of the TS.
std::optional<std::vector<double>> run_weights(const rp::TransitionSystem& t, const std::vector<std::size_t>& traj) {
  if (traj.empty() || traj.front() != t.initial) return std::nullopt;
  std::vector<double> w{1.0};
  for (std::size_t i = 1; i < traj.size(); ++i) {
    std::optional<double> best;
    for (const auto& tr : t.transitions) {
      if (tr.from == traj[i - 1] && tr.to == traj[i] && (!best || tr.weight < *best)) best = tr.weight;
    }
    if (!best) return std::nullopt;
    w.push_back(*best);
  }
  return w;
}

// A witness is valid when the trajectory is a run, the spec word is
// accepted and aligning the two costs what was claimed.
std::string witness_problem(const rp::TransitionSystem& t, const rp::SpecDFA& d, const rp::EditSystem& e,
                            const rp::WeightCombiner& combiner, const std::vector<std::size_t>& traj,
                            const rp::Word& spec, double claimed) {
  const auto w = run_weights(t, traj);
  if (!w) return "trajectory is not a run";
  if (!rp::dfa_accepts(d, spec)) return "spec word is not accepted";
  const auto c = rp::aligned_cost(t, traj, *w, spec, e, combiner);
  if (!c) return "trajectory and spec word are not related";
  if (std::fabs(*c - claimed) > kCostTolerance) {
    return "witness costs " + rp::detail::shortest(*c) + ", claimed " + rp::detail::shortest(claimed);
  }
  return "";
}

rp::WeightCombiner combiner_for(int i) {
  switch (i % 8) {
    case 5: return rp::WeightCombiner::multiplicative();
    case 6: return rp::WeightCombiner::rate();
    case 7: return rp::WeightCombiner::transition_count();
    default: return rp::WeightCombiner::additive();
  }
}

void criterion_oracle(EdgeBound& bound) {
  Verdict v;
  const auto t0 = Clock::now();
  ts::Rng rng(20240601);
  const rp::OracleBudget budget;  // trajectories and spec words up to 8 symbols
  int feasible = 0, redrawn = 0;
  for (int i = 0; i < 200; ++i) {
    const auto [t, d, e] = random_instance(rng);
    const auto combiner = combiner_for(i);
    rp::OracleResult o;
    try {
      o = rp::brute_force_plan(t, d, e, combiner, budget);
    } catch (const rp::BudgetExceeded&) {
      // Too many candidates to enumerate; draw another instance of the same shape.
      ++redrawn;
      --i;
      continue;
    }
    const auto r = rp::plan(t, d, e, combiner);
    bound.check(t, e, d, rp::build_product(t, e, d, combiner));
    const std::string tag = "instance " + std::to_string(i) + ": ";
    if (r.feasible != o.cost.has_value()) {
      v.fail(tag + "planner " + (r.feasible ? "feasible" : "infeasible") + ", oracle " +
             (o.cost ? "feasible" : "infeasible"));
      continue;
    }
    if (!r.feasible) continue;
    ++feasible;
    if (std::fabs(r.task_cost - *o.cost) > kCostTolerance) {
      v.fail(tag + "planner " + rp::detail::shortest(r.task_cost) + " vs oracle " + rp::detail::shortest(*o.cost));
    }
    if (r.trajectory.size() > budget.max_trajectory_length || r.spec_word.size() > budget.max_spec_length) {
      v.fail(tag + "planner witness is longer than the oracle budget");
    }
    if (auto p = witness_problem(t, d, e, combiner, r.trajectory, r.spec_word, r.task_cost); !p.empty()) {
      v.fail(tag + "planner witness: " + p);
    }
    if (auto p = witness_problem(t, d, e, combiner, o.trajectory, o.spec_word, r.task_cost); !p.empty()) {
      v.fail(tag + "oracle witness under the planner's cost: " + p);
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= kOracleSeconds) v.fail("took " + std::to_string(elapsed) + " s");
  std::ostringstream s;
  s << "200 instances, " << feasible << " feasible, " << redrawn << " redrawn over the candidate cap, " << elapsed
    << " s";
  report(1, "planner equals brute-force oracle", v, s.str());
}

void criterion_builders() {
  Verdict v;
  std::size_t pairs = 0;
  for (std::size_t n : {1u, 2u}) {
    const auto ap = ts::make_ap(n);
    const auto words = ts::all_words_upto(ap, 5);
    rp::SubstitutionCostMatrix c(ap);
    ts::Rng rng(n * 7919);
    for (const auto& a : rp::power_set(ap)) {
      for (const auto& b : rp::power_set(ap)) {
        if (a != b && ts::coin(rng, 0.7)) c.set(a, b, ts::uniform(rng, 1, 9));
      }
    }
    rp::SpecDFA soft;
    soft.ap = ap;
    soft.add_state("s0");
    soft.add_state("s1", true);
    for (const auto& l : rp::power_set(ap)) {
      soft.add_transition(0, l, l.contains("a") ? 1 : 0);
      soft.add_transition(1, l, 1);
    }
    const double penalty = 10, deletion = 3;
    struct Case {
      const char* name;
      rp::EditSystem e;
      std::function<std::optional<double>(const rp::Word&, const rp::Word&)> direct;
    };
    const std::vector<Case> cases = {
        {"cp", rp::build_cp(ap), ts::direct::canonical},
        {"mvp", rp::build_mvp(ap, deletion),
         [&](const rp::Word& x, const rp::Word& y) { return ts::direct::violation(x, y, deletion); }},
        {"mrp", rp::build_mrp(c), [&](const rp::Word& x, const rp::Word& y) { return ts::direct::revision(x, y, c); }},
        {"hsc", rp::build_hsc(soft, penalty),
         [&](const rp::Word& x, const rp::Word& y) { return ts::direct::soft_constraint(x, y, soft, penalty); }},
        {"ps", rp::build_ps(ap), ts::direct::partial},
    };
    for (const auto& bc : cases) {
      for (const auto& x : words) {
        for (const auto& y : words) {
          ++pairs;
          const auto got = rp::wfse_transduce(bc.e, x, y);
          const auto want = bc.direct(x, y);
          if (got != want) {
            v.fail(std::string(bc.name) + " on " + rp::word_str(x) + " / " + rp::word_str(y) + ": " +
                   (got ? rp::detail::shortest(*got) : "none") + " vs " + (want ? rp::detail::shortest(*want) : "none"));
          }
        }
      }
    }
  }
  report(2, "builders match the direct cost definitions", v,
         std::to_string(pairs) + " word pairs over cp, mvp, mrp, hsc, ps, |AP| 1 and 2, lengths 0..5");
}

void criterion_pareto() {
  Verdict v;
  const auto in = ts::three_path_instance();
  const auto t0 = Clock::now();
  const auto f = rp::pareto(in.ts, in.phi, in.wfse);
  const double elapsed = seconds_since(t0);
  const std::vector<std::pair<double, double>> expected{{29, 5}, {20, 8}, {12, 12}};
  const std::vector<double> breaks{0.25, 1.0 / 3.0};
  if (f.entries.size() != expected.size()) {
    v.fail(std::to_string(f.entries.size()) + " entries");
  } else {
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const auto& p = f.entries[i].plan;
      if (p.task_cost != expected[i].first || p.temporal_cost != expected[i].second) {
        v.fail("entry " + std::to_string(i) + " is (" + rp::detail::shortest(p.task_cost) + "," +
               rp::detail::shortest(p.temporal_cost) + ")");
      }
      if (i > 0 && !(p.task_cost < f.entries[i - 1].plan.task_cost &&
                     p.temporal_cost > f.entries[i - 1].plan.temporal_cost)) {
        v.fail("entries are not ordered by falling C_E and rising C_TR");
      }
    }
    const auto b = f.breakpoints();
    for (std::size_t i = 0; i < breaks.size(); ++i) {
      if (i >= b.size() || std::fabs(b[i] - breaks[i]) > kBreakpointTolerance) v.fail("breakpoints differ");
    }
    if (f.entries.front().lambda_lo != 0.0 || f.entries.back().lambda_hi != 1.0) v.fail("front does not span [0,1]");
  }
  if (elapsed >= kParetoSeconds) v.fail("took " + std::to_string(elapsed) + " s");
  std::ostringstream s;
  s << "breakpoints";
  for (auto b : f.breakpoints()) s << " " << b;
  s << ", " << elapsed << " s";
  report(3, "three-path Pareto front", v, s.str());
}

void criterion_temporal() {
  Verdict v;
  const auto r = rp::plan_temporal(ts::line_ts(7, "T2"), rp::parse_twtl("[H^2 T2]^[0,6]"));
  std::string got = "infeasible";
  if (!r.feasible || !r.relaxation) {
    v.fail("no plan");
  } else {
    got = "tau " + std::to_string(r.relaxation->tau.empty() ? -1 : r.relaxation->tau.front()) + ", LTR " +
          std::to_string(r.relaxation->ltr);
    if (r.relaxation->tau != std::vector<int>{3}) v.fail("tau is not {3}");
    if (r.relaxation->ltr != 3) v.fail("LTR is not 3");
  }
  report(4, "deadline relaxation on the line graph", v, got);
}

void criterion_twtl() {
  Verdict v;
  const auto t0 = Clock::now();
  ts::Rng rng(424242);
  std::size_t words = 0;
  int formulas = 0, max_horizon = 0;
  while (formulas < 50) {
    const auto ap = ts::make_ap(formulas % 2 == 0 ? 1 : 2);
    const auto phi = ts::random_twtl(rng, ap, 10);
    const int h = rp::horizon(phi);
    if (h > 10) continue;
    ++formulas;
    max_horizon = std::max(max_horizon, h);
    const auto d = rp::twtl_to_dfa(phi, ap);
    const auto letters = rp::power_set(ap);
    const auto max_len = static_cast<std::size_t>(h) + 1;
    rp::Word w;
    int mismatches = 0;
    // Depth-first over every word up to max_len, stepping the DFA alongside.
    auto walk = [&](auto&& self, std::optional<std::size_t> s) -> void {
      ++words;
      const bool dfa = s && d.accepting(*s);
      if (dfa != rp::semantic_twtl_check(phi, w).satisfied && mismatches++ == 0) {
        v.fail(rp::to_string(phi) + " on " + rp::word_str(w));
      }
      if (w.size() == max_len) return;
      for (const auto& l : letters) {
        w.push_back(l);
        self(self, s ? d.step(*s, l) : std::nullopt);
        w.pop_back();
      }
    };
    walk(walk, std::optional<std::size_t>(d.initial));
  }
  std::ostringstream s;
  s << formulas << " formulas, horizons up to " << max_horizon << ", " << words << " words, " << seconds_since(t0)
    << " s";
  report(5, "TWTL automaton agrees with the semantics", v, s.str());
}

// Least-squares fit y = a + b x; returns R^2.
double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0) return 1.0;
  return sxy * sxy / (sxx * syy);
}

void criterion_scaling(EdgeBound& bound) {
  Verdict v;
  const auto t0 = Clock::now();
  const auto ap = ts::make_ap(2);
  ts::Rng fixed(99);
  const auto e = ts::random_wfse(fixed, 3, ap, 6);
  auto d = ts::random_dfa(fixed, 4, ap, 1.0);
  d.set_accepting(0);
  // More instances from the oracle run's generator.
  ts::Rng rng(31337);
  for (int i = 0; i < 300; ++i) {
    const auto in = random_instance(rng);
    bound.check(in.t, in.e, in.d, rp::build_product(in.t, in.e, in.d));
  }
  std::vector<double> sizes, times;
  for (std::size_t m = 100; m <= 1000; m += 100) {
    // m/4 states, each with out-degree 4: a ring edge plus three random ones.
    const std::size_t n = m / 4;
    rp::TransitionSystem t;
    t.ap = ap;
    for (std::size_t i = 0; i < n; ++i) t.add_state("x" + std::to_string(i), ts::random_symbol(rng, ap));
    for (std::size_t i = 0; i < n; ++i) {
      t.add_transition(i, (i + 1) % n, ts::uniform(rng, 1, 5));
      for (int k = 0; k < 3; ++k) {
        t.add_transition(i, static_cast<std::size_t>(ts::uniform(rng, 0, static_cast<int>(n) - 1)), ts::uniform(rng, 1, 5));
      }
    }
    t.initial = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 7; ++rep) {
      const auto s0 = Clock::now();
      const auto pa = rp::build_product(t, e, d);
      best = std::min(best, seconds_since(s0));
      if (rep == 0) bound.check(t, e, d, pa);
    }
    sizes.push_back(static_cast<double>(t.transitions.size()));
    times.push_back(best);
  }
  const double r2 = r_squared(sizes, times);
  if (bound.violations) v.fail(std::to_string(bound.violations) + " products over the edge bound");
  if (r2 < kMinR2) v.fail("R^2 " + std::to_string(r2));
  const double elapsed = seconds_since(t0);
  if (elapsed >= kScalingSeconds) v.fail("took " + std::to_string(elapsed) + " s");
  std::ostringstream s;
  s << bound.checked - bound.violations << "/" << bound.checked << " products within the edge bound, linear fit R^2 " << r2 << " over |delta_T| 100..1000, "
    << elapsed << " s";
  report(6, "product size and construction time", v, s.str());
}

std::vector<std::string> csv_column(const std::string& csv, std::size_t column) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    for (std::size_t c = 0; c <= column; ++c) std::getline(row, cell, ',');
    out.push_back(cell);
  }
  return out;
}

void criterion_cli() {
  namespace cc = cli_cases;
  cc::work_subdir = "acceptance";
  Verdict v;
  std::set<int> codes;
  std::set<std::string> verbs;
  for (const auto& c : cc::kCases) {
    const auto first = cc::run(c);
    const auto second = cc::run(c);
    codes.insert(first.exit_code);
    verbs.insert(std::string(c.args).substr(0, std::string(c.args).find(' ')));
    if (first.exit_code != c.exit_code) v.fail(std::string(c.name) + " exited " + std::to_string(first.exit_code));
    if (first.transcript != second.transcript) v.fail(std::string(c.name) + " differs between runs");
    const auto golden = cc::golden_path(c);
    if (!std::filesystem::exists(golden) || rp::read_file(golden.string()) != first.transcript) {
      v.fail(std::string(c.name) + " does not match its golden file");
    }
  }
  for (int code : {0, 1, 2, 3}) {
    if (!codes.count(code)) v.fail("exit code " + std::to_string(code) + " never exercised");
  }
  for (const char* verb : {"plan", "pareto", "compile", "certify"}) {
    if (!verbs.count(verb)) v.fail(std::string("verb ") + verb + " never exercised");
  }
  const auto csv = cc::slurp(cc::work_dir() / "front.csv");
  const auto hi = csv_column(csv, 1);
  if (hi.size() != 3 || hi[0] != "0.25" || hi[1] != "0.333333") v.fail("pareto CSV breakpoints are not 0.25, 0.333333");
  std::ostringstream s;
  s << cc::kCases.size() << " golden cases run twice, exit codes";
  for (int code : codes) s << " " << code;
  report(7, "CLI golden files and exit codes", v, s.str());
}

}  // namespace

int main() {
  EdgeBound bound;
  const std::vector<std::pair<int, std::function<void()>>> criteria = {
      {1, [&] { criterion_oracle(bound); }}, {2, criterion_builders}, {3, criterion_pareto},
      {4, criterion_temporal},               {5, criterion_twtl},     {6, [&] { criterion_scaling(bound); }},
      {7, criterion_cli},
  };
  for (const auto& [n, f] : criteria) {
    try {
      f();
    } catch (const std::exception& e) {
      std::cout << "criterion " << n << ": FAIL  aborted: " << e.what() << std::endl;
    }
  }
  std::cout << g_passed << "/" << criteria.size() << " criteria passed" << std::endl;
  return g_passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
