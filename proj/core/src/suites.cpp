#include "percolab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <json.hpp>

#include "percolab/csv.hpp"
#include "percolab/errors.hpp"
#include "percolab/rng.hpp"

namespace percolab {

namespace {

void append(std::vector<BoundCheck>& out, std::vector<BoundCheck> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> v;
  for (int i = 0;; ++i) {
    const double x = lo + step * i;
    if (x > hi + 1e-12) break;
    v.push_back(std::round(x * 1e12) / 1e12);
  }
  return v;
}

template <class T>
T or_default(T v, T d) {
  return v != T{} ? v : d;
}

std::string pc_note(const PcResult& pc) {
  return "p_c[" + pc.graph + "] = " + format_double(pc.p_c_hat) + " in [" + format_double(pc.ci_lo) + ", " +
         format_double(pc.ci_hi) + "], lambda " + format_double(pc.lambda) + ", " +
         std::to_string(pc.total_samples) + " replicas" + (pc.converged ? "" : " (not converged)");
}

// Exact inequalities on small enumerable graphs plus complete-graph analytics.
SuiteReport oracle_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const std::vector<double> ps{0.2, 0.5, 0.8};
  const std::vector<double> gammas{0.1, 0.5, 0.9};
  const std::vector<double> fine = grid(0.1, 0.9, 0.1);
  for (const char* spec : {"complete:n=3", "complete:n=4", "hypercube:n=3", "torus:r=5,n=1"}) {
    const Graph g = parse_graph_spec(spec);
    const ExactEnumerator e(g, cfg.workers);
    const double pc = exact_pc(e, 1.0);
    rep.notes.push_back("exact p_c[" + g.spec() + ", lambda=1] = " + format_double(pc));
    for (double p : ps) {
      append(rep.checks, exact_variance_bounds(e, p, gammas));
      append(rep.checks, exact_tail_bound(e, p));
      append(rep.checks, exact_magnetization_bounds(e, p, pc, fine));
    }
    if (g.spec() == "complete:n=4" || g.spec() == "hypercube:n=3") {
      append(rep.checks, check_differential_inequalities(e, fine, fine));
    }
  }

  for (std::uint32_t n = 2; n <= 6; ++n) {
    const Graph g = Graph::complete(n);
    const ExactEnumerator e(g, cfg.workers);
    for (double p : ps) {
      const ExactStats st = e.stats(p);
      const auto law = complete_cluster_law(n, p);
      double diff = 0.0;
      for (std::uint32_t k = 1; k <= n; ++k) diff = std::max(diff, std::abs(law[k] - st.cluster_law[k]));
      const std::string in = "graph=" + g.spec() + ";p=" + format_double(p);
      rep.checks.push_back(make_check("complete_law_vs_enumeration", "max_k |recursion - enumeration| = 0", diff, 0.0,
                                      kExactSlack, in));
      const double off = complete_two_point(n, p).off;
      const double identity = (complete_chi(n, p) - 1.0) / (n - 1.0);
      rep.checks.push_back(make_check("complete_tau_off", "tau_off = (chi - 1)/(n - 1)", std::abs(off - identity), 0.0,
                                      kExactSlack, in));
      rep.checks.push_back(make_check("complete_tau_off_vs_enumeration", "closed-form tau_off = enumerated tau(0,1)",
                                      std::abs(off - st.tau_at(0, 1)), 0.0, kExactSlack, in));
    }
  }

  // Closed-form triangle diagram on K_n against delta + 7 chi^3 / n.
  SequentialRng rng(derive_seed(cfg.seed, "oracle-complete-triangle"), 0, Stream::kBonds);
  for (int i = 0; i < 50; ++i) {
    const auto n = static_cast<std::uint32_t>(3 + std::floor(rng.next() * 198.0));
    const double p = rng.next();
    const Graph g = Graph::complete(n);
    const TriangleReport r = triangle_from_two_point(complete_exact_two_point(n, p), g);
    const double bound = TheoremConstants::complete_K2 * r.chi * r.chi * r.chi / n;
    const std::string in = "graph=" + g.spec() + ";p=" + format_double(p);
    rep.checks.push_back(make_check("complete_triangle_diag", "nabla(x,x) <= 1 + 7 chi^3/n", r.nabla_diag,
                                    1.0 + bound, kExactSlack * std::max(1.0, bound), in));
    rep.checks.push_back(make_check("complete_triangle_off", "nabla(x,y) <= 7 chi^3/n for x != y", r.nabla_off_max,
                                    bound, kExactSlack * std::max(1.0, bound), in));
  }
  return rep;
}

// Threshold, sharpened bounds and the k^{-1/2} tail on a large complete graph.
SuiteReport complete_window_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const Graph g = Graph::complete(10000);
  PcOptions opt;
  opt.lambda = or_default(cfg.lambda, 0.1);
  opt.rel_tol = or_default(cfg.rel_tol, 1e-3);
  opt.max_samples_per_point = 1u << 17;
  opt.budget = 1u << 22;
  opt.run.workers = cfg.workers;
  const PcResult pc = solve_pc(g, opt, derive_seed(cfg.seed, "complete-window-pc"));
  rep.notes.push_back(pc_note(pc));

  const double l3 = opt.lambda * opt.lambda * opt.lambda;
  const double a0 = TheoremConstants::complete_K2 * l3;
  append(rep.checks, check_pc_window(pc, g, a0));
  SampleBudget b;
  b.n_samples = or_default(cfg.n_samples, std::uint64_t{4000});
  b.seed = derive_seed(cfg.seed, "complete-window");
  b.run.workers = cfg.workers;
  const double eps0 = eps0_of(g, opt.lambda);
  const std::vector<double> eps{2.0 * eps0, 5.0 * eps0, 10.0 * eps0};
  append(rep.checks, check_chi_subcritical(g, pc, eps, a0, b));
  SharpenedParams sp{0.0, TheoremConstants::complete_K2, g.degree(), opt.lambda};
  append(rep.checks, check_sharpened(g, pc, eps, sp, b));
  const std::vector<std::uint64_t> ks{4, 16, 64, 256};
  const std::vector<double> zero{0.0};
  for (auto& r : check_window_tail(g, pc, zero, ks, b)) append(rep.checks, std::move(r.checks));
  return rep;
}

// Full campaign on the 14-dimensional hypercube.
SuiteReport q14_window_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const Graph g = Graph::hypercube(14);
  const double V = static_cast<double>(g.V());
  PcOptions opt;
  opt.lambda = or_default(cfg.lambda, 0.5);
  opt.rel_tol = or_default(cfg.rel_tol, 2e-3);
  opt.budget = 1u << 20;
  opt.run.workers = cfg.workers;
  const PcResult pc = solve_pc(g, opt, derive_seed(cfg.seed, "q14-pc"));
  rep.notes.push_back(pc_note(pc));

  SampleBudget b;
  b.n_samples = or_default(cfg.n_samples, std::uint64_t{2000});
  b.seed = derive_seed(cfg.seed, "q14-window");
  b.run.workers = cfg.workers;

  // a0 is read off the measured triangle diagram at p_c.
  const TwoPointTable t = estimate_two_point(g, pc.p_c_hat, b.n_samples, derive_seed(b.seed, "two-point"), b.run);
  const TriangleReport tri = triangle_from_two_point(t, g);
  const double a0 = tri.a0_witness;
  rep.notes.push_back("triangle at p_c: " + triangle_to_json(tri));
  append(rep.checks, check_pc_window(pc, g, a0));
  append(rep.checks, check_lambda_cubed(tri, opt.lambda, a0));

  const double eps0 = eps0_of(g, opt.lambda);
  const std::vector<double> eps{2.0 * eps0, 5.0 * eps0, 10.0 * eps0};
  append(rep.checks, check_chi_subcritical(g, pc, eps, a0, b));
  append(rep.checks, check_subcritical_cmax(g, p_from_Lambda(g, pc.p_c_hat, -6.0), b));

  const std::vector<std::uint64_t> ks{4, 16, 64, 256};
  const std::vector<double> zero{0.0};
  for (auto& r : check_window_tail(g, pc, zero, ks, b, 0.1)) append(rep.checks, std::move(r.checks));
  append(rep.checks, check_window_cmax(g, pc, 0.0, b).checks);

  const double V13 = std::cbrt(V);
  const std::vector<double> sup_eps{4.0 / V13, 8.0 / V13};
  append(rep.checks, check_supercritical(g, pc, sup_eps, 0.5, b));

  const std::vector<double> mag_p{pc.p_c_hat, p_from_eps(g, pc.p_c_hat, 4.0 / V13)};
  const std::vector<double> mag_gamma{eps0 * eps0, 1e-3, 1e-2, 0.1};
  append(rep.checks, check_magnetization(g, pc, mag_p, mag_gamma, b));

  const std::vector<double> var_p{pc.p_c_hat};
  const std::vector<std::uint64_t> var_s{static_cast<std::uint64_t>(std::round(std::pow(V, 2.0 / 3.0))), 16};
  const std::vector<double> var_gamma{1e-3, 0.1};
  append(rep.checks, check_variance_bounds(g, var_p, var_s, var_gamma, b));
  return rep;
}

struct SuiteEntry {
  const char* name;
  const char* description;
  std::function<SuiteReport(const SuiteConfig&)> run;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> suites{
      {"oracle", "exact inequalities on K_3, K_4, Q_3, C_5; differential inequalities; K_n closed forms",
       oracle_suite},
      {"complete-window", "K_10000: threshold window, sharpened bounds, critical tail", complete_window_suite},
      {"q14-window", "Q_14: threshold, subcritical, window, supercritical, magnetization and variance bounds",
       q14_window_suite},
  };
  return suites;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> available_suites() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : registry()) out.emplace_back(s.name, s.description);
  return out;
}

SuiteReport run_suite(const SuiteConfig& config) {
  for (const auto& s : registry()) {
    if (config.suite == s.name) {
      SuiteReport r = s.run(config);
      r.suite = s.name;
      return r;
    }
  }
  std::string msg = config.suite.empty() ? "no suite given" : "unknown suite '" + config.suite + "'";
  msg += "; available suites:";
  for (const auto& [name, desc] : available_suites()) msg += "\n  " + name + "  " + desc;
  throw ConfigError(msg);
}

std::string suite_to_json(const SuiteReport& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  const SuiteSummary s = r.summary();
  j["summary"] = {{"pass", s.pass}, {"fail", s.fail}, {"inconclusive", s.inconclusive}, {"report_only", s.report_only}};
  j["notes"] = r.notes;
  j["checks"] = nlohmann::ordered_json::parse(checks_to_json(r.checks));
  return j.dump(2);
}

}  // namespace percolab
