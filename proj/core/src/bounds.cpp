#include "percolab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <utility>

#include <json.hpp>

#include "percolab/csv.hpp"
#include "percolab/errors.hpp"
#include "percolab/rng.hpp"

namespace percolab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Differential inequalities: a margin down to -kFdFloor is a pass.
constexpr double kFdFloor = 1e-9;

class Inputs {
 public:
  Inputs& add(std::string_view key, double v) {
    if (!text_.empty()) text_ += ';';
    text_.append(key);
    text_ += '=';
    text_ += format_double(v);
    return *this;
  }
  Inputs& add(std::string_view key, std::string_view v) {
    if (!text_.empty()) text_ += ';';
    text_.append(key);
    text_ += '=';
    text_.append(v);
    return *this;
  }
  std::string str() const { return text_; }

 private:
  std::string text_;
};

BoundCheck as_report(BoundCheck c) {
  c.verdict = Verdict::kReportOnly;
  return c;
}

const BoundCheck& worse(const BoundCheck& a, const BoundCheck& b) { return b.margin < a.margin ? b : a; }

double mc_slack(std::initializer_list<double> errors) {
  double s = 0.0;
  for (double e : errors) s += e * e;
  return kStderrMultiplier * std::sqrt(s);
}

double exact_slack(double lhs, double rhs) {
  return kExactSlack * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

BoundCheck exact_check(std::string name, std::string statement, double lhs, double rhs, std::string inputs) {
  const double slack = exact_slack(lhs, rhs);
  return make_check(std::move(name), std::move(statement), lhs, rhs, slack, std::move(inputs));
}

// Finite-difference verdict: pass within kFdFloor, inconclusive within the
// propagated error budget, fail beyond it.
BoundCheck fd_check(std::string name, std::string statement, double lhs, double rhs, double budget,
                    std::string inputs) {
  BoundCheck c;
  c.name = std::move(name);
  c.statement = std::move(statement);
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = budget + kFdFloor;
  const double raw = rhs - lhs;
  c.margin = raw + c.slack;
  if (raw >= -kFdFloor) {
    c.verdict = Verdict::kPass;
  } else if (c.margin >= 0.0) {
    c.verdict = Verdict::kInconclusive;
  } else {
    c.verdict = Verdict::kFail;
  }
  c.inputs = std::move(inputs);
  return c;
}

// Distance, in units of 1/Omega, from p up to a candidate p_c (clamped at 0).
double eps_below(double Omega, double pc, double p) { return std::max(0.0, Omega * (pc - p)); }
double eps_above(double Omega, double pc, double p) { return std::max(0.0, Omega * (p - pc)); }

std::uint64_t sample_seed(const SampleBudget& b, std::string_view stage) { return derive_seed(b.seed, stage); }

void require_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter(std::string(what) + " must lie in (0, 1), got " + format_double(p));
}

struct Columns {
  std::vector<ObservableSpec> specs;
  std::size_t add(Observable o, double param = 0.0) {
    specs.push_back({o, param});
    return specs.size() - 1;
  }
};

// Estimate of sum_j w_j E[col_j] for a sparse weight list.
Estimate combo(const ReplicaMatrix& m, std::initializer_list<std::pair<std::size_t, double>> terms) {
  std::vector<double> w(m.cols(), 0.0);
  for (const auto& [c, x] : terms) w[c] += x;
  return m.combination(w);
}

// lhs <= rhs where rhs - lhs = diff (estimated jointly, with its stderr).
BoundCheck mc_diff_check(std::string name, std::string statement, double lhs, double rhs, const Estimate& diff,
                         std::string inputs) {
  BoundCheck c = make_check(std::move(name), std::move(statement), lhs, rhs, kStderrMultiplier * diff.std_error,
                            std::move(inputs));
  c.margin = diff.mean + c.slack;
  c.verdict = c.margin >= 0.0 ? Verdict::kPass : Verdict::kFail;
  return c;
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kReportOnly: return "report-only";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "report-only";
}

BoundCheck make_check(std::string name, std::string statement, double lhs, double rhs, double slack,
                      std::string inputs) {
  BoundCheck c;
  c.name = std::move(name);
  c.statement = std::move(statement);
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = slack;
  c.margin = rhs - lhs + slack;
  c.verdict = c.margin >= 0.0 ? Verdict::kPass : Verdict::kFail;
  c.inputs = std::move(inputs);
  return c;
}

BoundCheck make_report(std::string name, std::string statement, double value, std::string inputs) {
  BoundCheck c;
  c.name = std::move(name);
  c.statement = std::move(statement);
  c.lhs = value;
  c.rhs = value;
  c.verdict = Verdict::kReportOnly;
  c.inputs = std::move(inputs);
  return c;
}

// --- threshold and subcritical susceptibility --------------------------------

std::vector<BoundCheck> check_pc_window(const PcResult& pc, const Graph& g, double a0) {
  if (!(pc.lambda > 0.0)) throw InvalidParameter("p_c result carries no positive lambda");
  const double Omega = g.degree();
  const double eps0 = eps0_of(g, pc.lambda);
  const double slack = Omega * (pc.ci_hi - pc.ci_lo);
  const std::string in = Inputs()
                             .add("graph", g.spec())
                             .add("p_c_hat", pc.p_c_hat)
                             .add("ci_lo", pc.ci_lo)
                             .add("ci_hi", pc.ci_hi)
                             .add("lambda", pc.lambda)
                             .add("a0", a0)
                             .str();
  std::vector<BoundCheck> out;
  out.push_back(make_check("pc_window_lower", "1 - eps0 <= Omega p_c", 1.0 - eps0, Omega * pc.p_c_hat, slack, in));
  if (a0 < 1.0 && a0 >= 0.0) {
    out.push_back(make_check("pc_window_upper", "Omega p_c <= (1 - eps0) / (1 - a0)", Omega * pc.p_c_hat,
                             (1.0 - eps0) / (1.0 - a0), slack, in));
  } else {
    out.push_back(as_report(make_check("pc_window_upper", "Omega p_c <= (1 - eps0) / (1 - a0); vacuous for a0 >= 1",
                                       Omega * pc.p_c_hat, kInf, slack, in)));
  }
  return out;
}

std::vector<BoundCheck> check_lambda_cubed(const TriangleReport& r, double lambda, double a0) {
  const double V = static_cast<double>(r.V);
  const std::string in =
      Inputs().add("p", r.p).add("lambda", lambda).add("a0", a0).add("chi_table", r.chi).str();
  std::vector<BoundCheck> out;
  // Summing nabla(0, y) over y gives chi^3 exactly, so this one is arithmetic.
  out.push_back(exact_check("chi_cubed_over_V", "chi^3 / V <= a0 + 1/V under the triangle condition",
                            r.chi_cubed_over_V, a0 + 1.0 / V, in));
  // The table is measured at a point where chi may fall short of lambda V^{1/3};
  // the shortfall is granted as slack.
  const double l3 = lambda * lambda * lambda;
  const double slack = std::max(0.0, l3 - r.chi_cubed_over_V) + kExactSlack;
  BoundCheck c = make_check("lambda_cubed", "lambda^3 <= a0 + 1/V under the triangle condition", l3, a0 + 1.0 / V,
                            slack, in);
  if (!check_triangle_condition(r, a0).holds) {
    out.front() = as_report(out.front());
    c = as_report(c);
  }
  out.push_back(c);
  return out;
}

std::vector<BoundCheck> check_chi_subcritical(const Graph& g, const PcResult& pc, std::span<const double> eps_list,
                                              double a0, const SampleBudget& b) {
  const double Omega = g.degree();
  const double eps0 = eps0_of(g, pc.lambda);
  std::vector<BoundCheck> out;
  for (double eps : eps_list) {
    if (!(eps >= 0.0)) throw InvalidParameter("eps must be non-negative");
    const double p = pc.p_c_hat - eps / Omega;
    require_probability(p, "p = p_c - eps/Omega");
    const Estimate chi = estimate_chi(g, p, b.n_samples, sample_seed(b, "chi-subcritical"), b.run);
    const double slack = mc_slack({chi.std_error});
    BoundCheck lo, hi;
    bool first = true;
    for (double pc_end : {pc.ci_lo, pc.ci_hi}) {
      const double e = eps_below(Omega, pc_end, p);
      const std::string in = Inputs()
                                 .add("graph", g.spec())
                                 .add("p", p)
                                 .add("eps", eps)
                                 .add("eps_endpoint", e)
                                 .add("a0", a0)
                                 .add("n", static_cast<double>(chi.n_samples))
                                 .str();
      BoundCheck l = make_check("chi_sub_lower", "1/(eps0 + eps) <= chi(p_c - eps/Omega)", 1.0 / (eps0 + e), chi.mean,
                                slack, in);
      BoundCheck u = (a0 >= 0.0 && a0 < 1.0)
                         ? make_check("chi_sub_upper", "chi(p_c - eps/Omega) <= 1/(eps0 + (1 - a0) eps)", chi.mean,
                                      1.0 / (eps0 + (1.0 - a0) * e), slack, in)
                         : as_report(make_check("chi_sub_upper", "chi <= 1/(eps0 + (1 - a0) eps); vacuous for a0 >= 1",
                                                chi.mean, kInf, slack, in));
      lo = first ? l : worse(lo, l);
      hi = first ? u : worse(hi, u);
      first = false;
    }
    out.push_back(lo);
    out.push_back(hi);
  }
  return out;
}

std::vector<BoundCheck> check_sharpened(const Graph& g, const PcResult& pc, std::span<const double> eps_list,
                                        const SharpenedParams& sp, const SampleBudget& b) {
  const double a = sp.a();
  if (!(a < 1.0)) throw PreconditionError("sharpened bounds need a = K1/Omega + K2 lambda^3 < 1, got " + format_double(a));
  const double Omega = g.degree();
  const double eps0 = eps0_of(g, sp.lambda);
  const double l3 = sp.lambda * sp.lambda * sp.lambda;
  const std::string base =
      Inputs().add("graph", g.spec()).add("K1", sp.K1).add("K2", sp.K2).add("lambda", sp.lambda).add("a", a).str();
  std::vector<BoundCheck> out;
  const double slack_pc = Omega * (pc.ci_hi - pc.ci_lo);
  out.push_back(make_check("sharp_pc_lower", "1 - eps0 <= Omega p_c", 1.0 - eps0, Omega * pc.p_c_hat, slack_pc, base));
  const double denom = 1.0 - sp.K1 / sp.Omega - sp.K2_tilde() * l3 * eps0;
  if (denom > 0.0) {
    out.push_back(make_check("sharp_pc_upper", "Omega p_c <= (1 - eps0)/(1 - K1/Omega - K2~ lambda^3 eps0)",
                             Omega * pc.p_c_hat, (1.0 - eps0) / denom, slack_pc, base));
  } else {
    out.push_back(as_report(make_check("sharp_pc_upper", "Omega p_c upper bound; vacuous denominator",
                                       Omega * pc.p_c_hat, kInf, slack_pc, base)));
  }
  for (double eps : eps_list) {
    if (!(eps >= 0.0)) throw InvalidParameter("eps must be non-negative");
    const double p = pc.p_c_hat - eps / Omega;
    require_probability(p, "p = p_c - eps/Omega");
    const Estimate chi = estimate_chi(g, p, b.n_samples, sample_seed(b, "chi-sharpened"), b.run);
    const double slack = mc_slack({chi.std_error});
    BoundCheck lo, hi;
    bool first = true;
    for (double pc_end : {pc.ci_lo, pc.ci_hi}) {
      const double e = eps_below(Omega, pc_end, p);
      const std::string in = Inputs().add("p", p).add("eps", eps).add("eps_endpoint", e).str() + ";" + base;
      BoundCheck l = make_check("sharp_chi_lower", "1/(eps0 + eps) <= chi", 1.0 / (eps0 + e), chi.mean, slack, in);
      BoundCheck u = make_check("sharp_chi_upper", "chi <= 1/(eps0 + (1 - a~(eps)) eps)", chi.mean,
                                1.0 / (eps0 + (1.0 - sp.a_tilde(e, eps0)) * e), slack, in);
      lo = first ? l : worse(lo, l);
      hi = first ? u : worse(hi, u);
      first = false;
    }
    out.push_back(lo);
    out.push_back(hi);
    if (eps > 0.0) {
      out.push_back(make_report("chi_times_eps", "chi * eps -> 1 as eps/eps0 grows", chi.mean * eps,
                                Inputs().add("p", p).add("eps", eps).add("eps_over_eps0", eps / eps0).str()));
    }
  }
  return out;
}

// --- subcritical largest cluster ----------------------------------------------

std::vector<BoundCheck> check_subcritical_cmax(const Graph& g, double p, const SampleBudget& b) {
  require_probability(p, "p");
  const double V = static_cast<double>(g.V());
  Columns cols;
  const auto c_chi = cols.add(Observable::kChi);
  const auto c_max = cols.add(Observable::kCmax);
  const std::uint64_t seed = sample_seed(b, "subcritical-cmax");
  const ReplicaMatrix m = sample_observables(g, p, cols.specs, b.n_samples, seed, b.run);
  const Estimate chi = m.mean(c_chi);
  const Estimate cmax = m.mean(c_max);
  const double x = chi.mean;
  const double L = std::log(V / (x * x * x));
  const std::string in = Inputs()
                             .add("graph", g.spec())
                             .add("p", p)
                             .add("chi_hat", x)
                             .add("log_V_over_chi3", L)
                             .add("n", static_cast<double>(m.rows()))
                             .str();
  std::vector<BoundCheck> out;
  if (!(L > 0.0)) {
    out.push_back(make_report("cmax_sub_skipped", "log(V/chi^3) <= 0: subcritical cluster bounds not applicable", L, in));
    return out;
  }
  out.push_back(make_check("cmax_sub_lower", "1e-4 chi^2 <= E|C_max|", TheoremConstants::cmax_sub_lower * x * x,
                           cmax.mean, mc_slack({2.0 * TheoremConstants::cmax_sub_lower * x * chi.std_error, cmax.std_error}),
                           in));
  const double thr = TheoremConstants::cmax_sub_upper * x * x * L;
  const double dthr = TheoremConstants::cmax_sub_upper * (2.0 * x * L - 3.0 * x);  // d thr / d chi
  out.push_back(make_check("cmax_sub_upper", "E|C_max| <= 2 chi^2 log(V/chi^3)", cmax.mean, thr,
                           mc_slack({cmax.std_error, dthr * chi.std_error}), in));

  const std::vector<double> cm = m.column(c_max);
  auto frequency = [&](auto&& pred) {
    std::vector<double> ind(cm.size());
    for (std::size_t i = 0; i < cm.size(); ++i) ind[i] = pred(cm[i]) ? 1.0 : 0.0;
    return estimate_from(ind, seed);
  };
  const Estimate below = frequency([&](double c) { return c <= thr; });
  out.push_back(make_check("cmax_sub_prob", "P(|C_max| <= 2 chi^2 log(V/chi^3)) >= 1 - sqrt(e)/(2 log(V/chi^3))^{3/2}",
                           1.0 - std::sqrt(std::numbers::e) / std::pow(2.0 * L, 1.5), below.mean,
                           mc_slack({below.std_error}), in));
  for (double omega : {1.0, 4.0, 16.0}) {
    const double t = x * x / (TheoremConstants::cmax_sub_div * omega);
    const Estimate above = frequency([&](double c) { return c >= t; });
    out.push_back(make_check("cmax_sub_omega", "P(|C_max| >= chi^2/(3600 omega)) >= (1 + 36 chi^3/(omega V))^{-1}",
                             1.0 / (1.0 + TheoremConstants::cmax_sub_prob * x * x * x / (omega * V)), above.mean,
                             mc_slack({above.std_error}), in + ";omega=" + format_double(omega)));
  }

  // Tail bound for k >= chi^2, on a doubling grid.
  std::vector<std::uint64_t> ks;
  for (double k = std::ceil(x * x); k <= V; k *= 2.0) ks.push_back(static_cast<std::uint64_t>(k));
  if (!ks.empty()) {
    const TailTable tail = estimate_tail(g, p, ks, b.n_samples, seed, b.run);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double k = static_cast<double>(ks[i]);
      const double rhs = std::sqrt(std::numbers::e / k) * std::exp(-k / (2.0 * x * x));
      const double drhs = rhs * k / (x * x * x);
      out.push_back(make_check("tail_sub", "P(|C(0)| >= k) <= sqrt(e/k) exp(-k/(2 chi^2)) for k >= chi^2",
                               tail.estimates[i].mean, rhs,
                               mc_slack({tail.estimates[i].std_error, drhs * chi.std_error}),
                               in + ";k=" + format_double(k)));
    }
  }
  return out;
}

// --- critical window ----------------------------------------------------------

std::vector<WindowTailResult> check_window_tail(const Graph& g, const PcResult& pc,
                                                std::span<const double> Lambda_list,
                                                std::span<const std::uint64_t> k_grid, const SampleBudget& b,
                                                double slope_tolerance) {
  if (k_grid.empty()) throw InvalidParameter("empty k grid");
  const double V = static_cast<double>(g.V());
  const double eps0 = eps0_of(g, pc.lambda);
  std::vector<WindowTailResult> results;
  for (double Lambda : Lambda_list) {
    WindowTailResult r;
    const double p = p_from_Lambda(g, pc.p_c_hat, Lambda);
    require_probability(p, "p in the window");
    const double eps = Lambda / std::cbrt(V);
    const double d = 100.0 * (std::abs(eps) + eps0);
    r.admissible_k_max = 1.0 / (d * d);
    r.ks.assign(k_grid.begin(), k_grid.end());
    const TailTable tail = estimate_tail(g, p, r.ks, b.n_samples, sample_seed(b, "window-tail"), b.run);
    r.tail = tail.estimates;
    const std::string base = Inputs()
                                 .add("graph", g.spec())
                                 .add("p", p)
                                 .add("Lambda", Lambda)
                                 .add("admissible_k_max", r.admissible_k_max)
                                 .str();
    for (std::size_t i = 0; i < r.ks.size(); ++i) {
      const double k = static_cast<double>(r.ks[i]);
      const Estimate& e = r.tail[i];
      const std::string in = base + ";k=" + format_double(k);
      BoundCheck lo = make_check("window_tail_lower", "(1/360) k^{-1/2} <= P(|C(0)| >= k)",
                                 TheoremConstants::window_tail_lower / std::sqrt(k), e.mean, mc_slack({e.std_error}), in);
      BoundCheck hi = make_check("window_tail_upper", "P(|C(0)| >= k) <= 6 k^{-1/2}", e.mean,
                                 TheoremConstants::window_tail_upper / std::sqrt(k), mc_slack({e.std_error}), in);
      if (k > r.admissible_k_max) {
        lo = as_report(lo);
        hi = as_report(hi);
      }
      r.checks.push_back(lo);
      r.checks.push_back(hi);
    }
    // Least squares of log P on log k; slope stderr by the delta method.
    std::vector<double> xs, ys, vs;
    for (std::size_t i = 0; i < r.ks.size(); ++i) {
      if (r.tail[i].mean <= 0.0) continue;
      xs.push_back(std::log(static_cast<double>(r.ks[i])));
      ys.push_back(std::log(r.tail[i].mean));
      const double rel = r.tail[i].std_error / r.tail[i].mean;
      vs.push_back(rel * rel);
    }
    if (xs.size() >= 2) {
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
      mx /= static_cast<double>(xs.size());
      my /= static_cast<double>(xs.size());
      double sxx = 0.0, sxy = 0.0, var = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
      }
      for (std::size_t i = 0; i < xs.size(); ++i) var += (xs[i] - mx) * (xs[i] - mx) * vs[i];
      if (sxx > 0.0) {
        r.slope = sxy / sxx;
        r.slope_error = std::sqrt(var) / sxx;
        const std::string in = base + ";slope_error=" + format_double(r.slope_error);
        if (slope_tolerance > 0.0) {
          r.checks.push_back(make_check("window_tail_slope", "|fitted log-log tail slope + 1/2| <= tolerance",
                                        std::abs(r.slope + 0.5), slope_tolerance, mc_slack({r.slope_error}), in));
        } else {
          r.checks.push_back(make_report("window_tail_slope_offset", "fitted log-log tail slope minus (-1/2)",
                                         r.slope + 0.5, in));
        }
      }
    } else {
      r.checks.push_back(make_report("window_tail_slope_offset", "too few positive tail estimates to fit a slope",
                                     std::numeric_limits<double>::quiet_NaN(), base));
    }
    results.push_back(std::move(r));
  }
  return results;
}

WindowCmaxResult check_window_cmax(const Graph& g, const PcResult& pc, double Lambda, const SampleBudget& b) {
  const double V = static_cast<double>(g.V());
  const double V23 = std::pow(V, 2.0 / 3.0);
  const double p = p_from_Lambda(g, pc.p_c_hat, Lambda);
  require_probability(p, "p in the window");
  const ObservableSpec spec{Observable::kCmax};
  const std::uint64_t seed = sample_seed(b, "window-cmax");
  const ReplicaMatrix m = sample_observables(g, p, {&spec, 1}, b.n_samples, seed, b.run);
  WindowCmaxResult r;
  const Estimate cm = m.mean(0);
  r.ratio = {cm.mean / V23, cm.std_error / V23, cm.n_samples, cm.seed};
  const std::string in = Inputs().add("graph", g.spec()).add("p", p).add("Lambda", Lambda).str();
  r.checks.push_back(make_report("window_cmax_ratio", "E|C_max| / V^{2/3}", r.ratio.mean, in));
  const std::vector<double> col = m.column(0);
  double prev = -1.0;
  for (double omega : {2.0, 4.0, 8.0, 16.0}) {
    std::uint64_t hits = 0;
    for (double c : col) hits += (c >= V23 / omega && c <= omega * V23) ? 1 : 0;
    const double cov = static_cast<double>(hits) / static_cast<double>(col.size());
    r.coverage.push_back(cov);
    const std::string ci = in + ";omega=" + format_double(omega);
    r.checks.push_back(make_report("window_cmax_coverage", "P(V^{2/3}/omega <= |C_max| <= omega V^{2/3})", cov, ci));
    if (prev >= 0.0) {
      r.checks.push_back(make_check("window_cmax_coverage_monotone", "coverage non-decreasing in omega", prev, cov,
                                    0.0, ci));
    }
    prev = cov;
  }
  return r;
}

// --- supercritical phase --------------------------------------------------------

std::vector<BoundCheck> check_supercritical(const Graph& g, const PcResult& pc, std::span<const double> eps_list,
                                            double alpha, const SampleBudget& b) {
  const double Omega = g.degree();
  const double V = static_cast<double>(g.V());
  const double V13 = std::cbrt(V), V23 = V13 * V13;
  std::vector<BoundCheck> out;
  for (double eps : eps_list) {
    if (!(eps >= 0.0 && eps <= 1.0)) {
      throw InvalidParameter("supercritical checks need 0 <= eps <= 1, got " + format_double(eps));
    }
    const double p = pc.p_c_hat + eps / Omega;
    require_probability(p, "p = p_c + eps/Omega");
    Columns cols;
    const auto c_chi = cols.add(Observable::kChi);
    const auto c_max = cols.add(Observable::kCmax);
    // N_alpha from the nominal eps; a degenerate cutoff leaves theta unchecked.
    std::uint64_t N = 0;
    std::string theta_note;
    if (eps > 0.0) {
      try {
        N = n_alpha(eps, alpha, g.V());
      } catch (const DegenerateCutoff& e) {
        theta_note = e.what();
      }
    } else {
      theta_note = "eps = 0";
    }
    const std::size_t c_theta = N > 0 ? cols.add(Observable::kTail, static_cast<double>(N)) : 0;
    std::vector<std::uint64_t> k_grid;
    std::vector<std::size_t> k_cols;
    for (std::uint64_t k = 1; k <= g.V(); k *= 2) {
      k_grid.push_back(k);
      k_cols.push_back(cols.add(Observable::kTail, static_cast<double>(k)));
    }
    const std::uint64_t seed = sample_seed(b, "supercritical");
    const ReplicaMatrix m = sample_observables(g, p, cols.specs, b.n_samples, seed, b.run);
    const Estimate chi = m.mean(c_chi);
    const Estimate cmax = m.mean(c_max);
    const std::vector<double> cm = m.column(c_max);

    const std::string base = Inputs()
                                 .add("graph", g.spec())
                                 .add("p", p)
                                 .add("eps", eps)
                                 .add("Lambda", eps * V13)
                                 .add("n", static_cast<double>(m.rows()))
                                 .str();
    BoundCheck w_cmax, w_chi, w_theta;
    std::vector<BoundCheck> w_prob(3);
    bool first = true;
    const Estimate theta = N > 0 ? m.mean(c_theta) : Estimate{};
    for (double pc_end : {pc.ci_lo, pc.ci_hi}) {
      const double e = eps_above(Omega, pc_end, p);
      const std::string in = base + ";eps_endpoint=" + format_double(e);
      BoundCheck c1 = make_check("sup_cmax", "E|C_max| <= 21 eps V + 7 V^{2/3}", cmax.mean,
                                 TheoremConstants::cmax_sup_eps * e * V + TheoremConstants::cmax_sup_window * V23,
                                 mc_slack({cmax.std_error}), in);
      BoundCheck c2 = make_check("sup_chi", "chi <= 81 (V^{1/3} + eps^2 V)", chi.mean,
                                 TheoremConstants::chi_sup * (V13 + e * e * V), mc_slack({chi.std_error}), in);
      w_cmax = first ? c1 : worse(w_cmax, c1);
      w_chi = first ? c2 : worse(w_chi, c2);
      const double omegas[3] = {2.0, 4.0, 8.0};
      for (int j = 0; j < 3; ++j) {
        const double t = omegas[j] * (V23 + e * V);
        std::vector<double> ind(cm.size());
        for (std::size_t i = 0; i < cm.size(); ++i) ind[i] = cm[i] >= t ? 1.0 : 0.0;
        const Estimate f = estimate_from(ind, seed);
        BoundCheck c3 = make_check("sup_cmax_prob", "P(|C_max| >= omega (V^{2/3} + eps V)) <= 21/omega", f.mean,
                                   TheoremConstants::cmax_sup_prob / omegas[j], mc_slack({f.std_error}),
                                   in + ";omega=" + format_double(omegas[j]));
        w_prob[j] = first ? c3 : worse(w_prob[j], c3);
      }
      if (N > 0) {
        BoundCheck c4 = make_check("sup_theta", "theta_alpha <= 27 eps (eps V^{1/3} >= 1)", theta.mean,
                                   TheoremConstants::theta_sup * e, mc_slack({theta.std_error}),
                                   in + ";alpha=" + format_double(alpha) + ";N_alpha=" + format_double(double(N)));
        w_theta = first ? c4 : worse(w_theta, c4);
      }
      first = false;
    }
    out.push_back(w_cmax);
    for (auto& c : w_prob) out.push_back(c);
    out.push_back(w_chi);
    if (N > 0) {
      if (eps * V13 < 1.0) w_theta = as_report(w_theta);
      out.push_back(w_theta);
      out.push_back(make_report("sup_theta_over_eps", "theta_alpha / eps (lower-bound trend)", theta.mean / eps,
                                base + ";N_alpha=" + format_double(double(N))));
      // Largest-cluster concentration around theta V: frequency only.
      const double eta = (1.0 / 3.0) * (3.0 - 2.0 * alpha) / (5.0 - 2.0 * alpha);
      const double t = (1.0 + 1.0 / (eps * std::pow(V, eta))) * theta.mean * V;
      std::uint64_t hits = 0;
      for (double c : cm) hits += c <= t ? 1 : 0;
      out.push_back(make_report("sup_cmax_concentration", "P(|C_max| <= [1 + (eps V^eta)^{-1}] theta_alpha V)",
                                static_cast<double>(hits) / static_cast<double>(cm.size()),
                                base + ";eta=" + format_double(eta)));
    } else {
      out.push_back(make_report("sup_theta", "theta_alpha not evaluated: " + theta_note,
                                std::numeric_limits<double>::quiet_NaN(), base));
    }
    if (eps > 0.0) {
      TailTable tail;
      tail.ks = k_grid;
      for (std::size_t c : k_cols) tail.estimates.push_back(m.mean(c));
      double ratio = std::numeric_limits<double>::quiet_NaN();
      try {
        ratio = estimate_k0(g, tail) / (2.0 * eps * V);
      } catch (const BracketError&) {
      }
      out.push_back(make_report("sup_k0_ratio", "k0 / (2 eps V)", ratio, base));
    }
  }
  return out;
}

// --- magnetization ----------------------------------------------------------------

std::vector<BoundCheck> check_magnetization(const Graph& g, const PcResult& pc, std::span<const double> p_list,
                                            std::span<const double> gamma_grid, const SampleBudget& b) {
  const double Omega = g.degree();
  std::vector<std::uint64_t> bridge_k;
  for (std::uint64_t k = 2; k <= std::min<std::uint64_t>(g.V(), 256); k *= 2) bridge_k.push_back(k);
  std::vector<BoundCheck> out;
  for (double gamma : gamma_grid) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidParameter("gamma must lie in [0, 1]");
  }
  for (double p : p_list) {
    require_probability(p, "p");
    Columns cols;
    const auto c_chi = cols.add(Observable::kChi);
    std::vector<std::size_t> c_m;
    for (double gamma : gamma_grid) c_m.push_back(cols.add(Observable::kMagnetization, gamma));
    struct Bridge {
      std::uint64_t k;
      std::size_t tail, m_tilde, m_small;
    };
    std::vector<Bridge> bridges;
    for (std::uint64_t k : bridge_k) {
      const double kd = static_cast<double>(k);
      bridges.push_back({k, cols.add(Observable::kTail, kd), cols.add(Observable::kMagnetization, 1.0 / kd),
                         cols.add(Observable::kMagnetization, 0.25 / kd)});
    }
    const double eps_nom = Omega * (p - pc.p_c_hat);
    const std::size_t c_m7 = eps_nom > 0.0 ? cols.add(Observable::kMagnetization, eps_nom * eps_nom) : 0;
    const ReplicaMatrix m = sample_observables(g, p, cols.specs, b.n_samples, sample_seed(b, "magnetization"), b.run);
    const Estimate chi = m.mean(c_chi);
    const std::string base = Inputs()
                                 .add("graph", g.spec())
                                 .add("p", p)
                                 .add("eps", eps_nom)
                                 .add("n", static_cast<double>(m.rows()))
                                 .str();

    for (std::size_t j = 0; j < gamma_grid.size(); ++j) {
      const double gamma = gamma_grid[j];
      const Estimate M = m.mean(c_m[j]);
      const std::string in = base + ";gamma=" + format_double(gamma);
      if (gamma == 0.0) {
        out.push_back(make_check("mag_gamma_zero", "M(p, 0) = 0", M.mean, 0.0, 0.0, in));
        continue;
      }
      if (p <= pc.p_c_hat) {
        const double sq = std::sqrt(gamma), gc = gamma * chi.mean;
        if (gc < sq) {
          out.push_back(mc_diff_check("mag_lower", "(1/3) min{sqrt(gamma), gamma chi} <= M for p <= p_c",
                                      TheoremConstants::mag_lower * gc, M.mean,
                                      combo(m, {{c_m[j], 1.0}, {c_chi, -TheoremConstants::mag_lower * gamma}}), in));
        } else {
          out.push_back(make_check("mag_lower", "(1/3) min{sqrt(gamma), gamma chi} <= M for p <= p_c",
                                   TheoremConstants::mag_lower * sq, M.mean, mc_slack({M.std_error}), in));
        }
        out.push_back(make_check("mag_upper_sqrt", "M <= sqrt(12 gamma) for p <= p_c", M.mean,
                                 std::sqrt(TheoremConstants::mag_sqrt * gamma), mc_slack({M.std_error}), in));
        out.push_back(mc_diff_check("mag_upper_chi", "M <= gamma chi", M.mean, gc,
                                    combo(m, {{c_chi, gamma}, {c_m[j], -1.0}}), in));
      }
      if (p >= pc.p_c_hat) {
        BoundCheck w;
        bool first = true;
        for (double pc_end : {pc.ci_lo, pc.ci_hi}) {
          const double e = eps_above(Omega, pc_end, p);
          BoundCheck c = make_check("mag_upper_super", "M <= sqrt(12 gamma) + 13 eps for p >= p_c", M.mean,
                                    std::sqrt(TheoremConstants::mag_sqrt * gamma) + TheoremConstants::mag_eps * e,
                                    mc_slack({M.std_error}), in + ";eps_endpoint=" + format_double(e));
          w = first ? c : worse(w, c);
          first = false;
        }
        out.push_back(w);
      }
    }
    for (const Bridge& br : bridges) {
      const double k = static_cast<double>(br.k);
      const Estimate P = m.mean(br.tail);
      const std::string in = base + ";k=" + format_double(k);
      const double up = TheoremConstants::tail_bridge * m.mean(br.m_tilde).mean;
      out.push_back(mc_diff_check("bridge_tail_upper", "P(|C(0)| >= k) <= (e/(e-1)) M(p, 1/k)", P.mean, up,
                                  combo(m, {{br.m_tilde, TheoremConstants::tail_bridge}, {br.tail, -1.0}}), in));
      // gamma = 1/(4k), gamma~ = 1/k: (gamma/gamma~) e^{gamma~ k} = e/4.
      const double coef = 0.25 * std::exp(1.0);
      const double lo = m.mean(br.m_small).mean - coef * m.mean(br.m_tilde).mean;
      out.push_back(mc_diff_check("bridge_tail_lower",
                                  "P(|C(0)| >= k) >= M(p, gamma) - (gamma/gamma~) e^{gamma~ k} M(p, gamma~)", lo,
                                  P.mean, combo(m, {{br.tail, 1.0}, {br.m_small, -1.0}, {br.m_tilde, coef}}),
                                  in + ";gamma=" + format_double(0.25 / k) + ";gamma_tilde=" + format_double(1.0 / k)));
    }
    if (eps_nom > 0.0) {
      out.push_back(make_report("mag_super_over_eps", "M(p, eps^2) / eps (lower-bound trend)",
                                m.mean(c_m7).mean / eps_nom, base));
    }
  }
  return out;
}

// --- variance and green-set bounds ------------------------------------------------

std::vector<BoundCheck> check_variance_bounds(const Graph& g, std::span<const double> p_list,
                                              std::span<const std::uint64_t> s_list,
                                              std::span<const double> gamma_grid, const SampleBudget& b) {
  const double Omega = g.degree();
  const double V = static_cast<double>(g.V());
  std::vector<BoundCheck> out;
  for (double p : p_list) {
    require_probability(p, "p");
    Columns cols;
    const auto c_chi = cols.add(Observable::kChi);
    struct S {
      double s;
      std::size_t z, less, m;
    };
    std::vector<S> ss;
    for (std::uint64_t s : s_list) {
      if (s < 1) throw InvalidParameter("s must be at least 1");
      const double sd = static_cast<double>(s);
      ss.push_back({sd, cols.add(Observable::kZGeq, sd), cols.add(Observable::kChiLess, sd),
                    cols.add(Observable::kMagnetization, 1.0 / sd)});
    }
    struct G {
      double gamma;
      std::size_t z2, perp, m, notg;
    };
    std::vector<G> gs;
    for (double gamma : gamma_grid) {
      if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidParameter("gamma must lie in (0, 1]");
      gs.push_back({gamma, cols.add(Observable::kZGreenSq, gamma), cols.add(Observable::kChiPerp, gamma),
                    cols.add(Observable::kMagnetization, gamma), cols.add(Observable::kNotGreenSq, gamma)});
    }
    const ReplicaMatrix m = sample_observables(g, p, cols.specs, b.n_samples, sample_seed(b, "variance"), b.run);
    const Estimate chi = m.mean(c_chi);
    const std::string base =
        Inputs().add("graph", g.spec()).add("p", p).add("n", static_cast<double>(m.rows())).str();
    for (const S& s : ss) {
      const Estimate var = m.variance(s.z);
      const Estimate less = m.mean(s.less);
      const Estimate M = m.mean(s.m);
      const double f = 1.0 + p * Omega * s.s;
      const std::string in = base + ";s=" + format_double(s.s);
      out.push_back(make_check("var_z_chi", "Var Z_{>=s} <= V chi", var.mean, V * chi.mean,
                               mc_slack({var.std_error, V * chi.std_error}), in));
      out.push_back(make_check("var_z_chi_less", "Var Z_{>=s} <= (1 + p Omega s) V chi_{<s}", var.mean,
                               f * V * less.mean, mc_slack({var.std_error, f * V * less.std_error}), in));
      out.push_back(make_check("var_z_mag", "Var Z_{>=s} <= 4 s (1 + p Omega s) V M(p, 1/s)", var.mean,
                               4.0 * s.s * f * V * M.mean, mc_slack({var.std_error, 4.0 * s.s * f * V * M.std_error}),
                               in));
    }
    for (const G& x : gs) {
      const Estimate z2 = m.mean(x.z2);
      const Estimate perp = m.mean(x.perp);
      const Estimate M = m.mean(x.m);
      const std::string in = base + ";gamma=" + format_double(x.gamma);
      out.push_back(mc_diff_check("perp_le_zg2", "chi_perp <= E[Z_G^2] / V", perp.mean, z2.mean / V,
                                  combo(m, {{x.z2, 1.0 / V}, {x.perp, -1.0}}), in));
      const Estimate d = combo(m, {{x.perp, 1.0}, {x.z2, -1.0 / V}});
      out.push_back(make_check("zg2_le_mag", "E[Z_G^2] / V <= V M^2 + chi_perp", z2.mean / V,
                               V * M.mean * M.mean + perp.mean,
                               mc_slack({d.std_error, 2.0 * V * M.mean * M.std_error}), in));
      out.push_back(make_check("perp_le_chi3", "chi_perp <= gamma chi^3", perp.mean,
                               x.gamma * chi.mean * chi.mean * chi.mean,
                               mc_slack({perp.std_error, 3.0 * x.gamma * chi.mean * chi.mean * chi.std_error}), in));
      if (x.gamma < 1.0) {
        const double w = x.gamma / (1.0 - x.gamma);
        out.push_back(mc_diff_check("perp_lower", "(gamma/(1-gamma)) E[|C(0)|^2 1(0 not in G-cluster)] <= chi_perp",
                                    w * m.mean(x.notg).mean, perp.mean, combo(m, {{x.perp, 1.0}, {x.notg, -w}}), in));
      }
    }
  }
  return out;
}

// --- exact versions -----------------------------------------------------------------

std::vector<BoundCheck> exact_variance_bounds(const ExactEnumerator& e, double p, std::span<const double> gamma_grid) {
  const Graph& g = e.graph();
  const double Omega = g.degree();
  const double V = static_cast<double>(g.V());
  const ExactStats st = e.stats(p);
  const std::string base = Inputs().add("graph", g.spec()).add("p", p).add("source", "exact").str();
  std::vector<BoundCheck> out;
  for (std::uint64_t s = 2; s <= g.V(); ++s) {
    const double sd = static_cast<double>(s);
    const double var = st.Var_Z_geq[s];
    const double f = 1.0 + p * Omega * sd;
    const double mid = f * V * st.chi_less[s];
    const std::string in = base + ";s=" + format_double(sd);
    out.push_back(exact_check("var_z_chi", "Var Z_{>=s} <= V chi", var, V * st.chi, in));
    out.push_back(exact_check("var_z_chi_less", "Var Z_{>=s} <= (1 + p Omega s) V chi_{<s}", var, mid, in));
    const double M = e.magnetization(p, 1.0 / sd).M;
    out.push_back(exact_check("var_z_mag", "(1 + p Omega s) V chi_{<s} <= 4 s (1 + p Omega s) V M(p, 1/s)", mid,
                              4.0 * sd * f * V * M, in));
  }
  for (double gamma : gamma_grid) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidParameter("gamma must lie in (0, 1]");
    const ExactMagnetization mg = e.magnetization(p, gamma);
    const std::string in = base + ";gamma=" + format_double(gamma);
    out.push_back(exact_check("perp_le_zg2", "chi_perp <= E[Z_G^2] / V", mg.chi_perp, mg.E_Zg2 / V, in));
    out.push_back(exact_check("zg2_le_mag", "E[Z_G^2] / V <= V M^2 + chi_perp", mg.E_Zg2 / V,
                              V * mg.M * mg.M + mg.chi_perp, in));
    out.push_back(exact_check("perp_le_chi3", "chi_perp <= gamma chi^3", mg.chi_perp, gamma * st.chi * st.chi * st.chi,
                              in));
    out.push_back(exact_check("mag_le_gamma_chi", "M <= gamma chi", mg.M, gamma * st.chi, in));
    if (gamma < 1.0) {
      out.push_back(exact_check("perp_lower", "(gamma/(1-gamma)) E[|C(0)|^2 1(0 not in G-cluster)] <= chi_perp",
                                gamma / (1.0 - gamma) * mg.E_C0sq_not_green, mg.chi_perp, in));
    }
  }
  return out;
}

std::vector<BoundCheck> exact_magnetization_bounds(const ExactEnumerator& e, double p, double p_c,
                                                   std::span<const double> gamma_grid) {
  const Graph& g = e.graph();
  const double Omega = g.degree();
  const ExactStats st = e.stats(p);
  const std::string base =
      Inputs().add("graph", g.spec()).add("p", p).add("p_c", p_c).add("source", "exact").str();
  std::vector<BoundCheck> out;
  for (double gamma : gamma_grid) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidParameter("gamma must lie in (0, 1]");
    const double M = e.magnetization(p, gamma).M;
    const std::string in = base + ";gamma=" + format_double(gamma);
    if (p <= p_c) {
      out.push_back(exact_check("mag_lower", "(1/3) min{sqrt(gamma), gamma chi} <= M for p <= p_c",
                                TheoremConstants::mag_lower * std::min(std::sqrt(gamma), gamma * st.chi), M, in));
      out.push_back(exact_check("mag_upper", "M <= min{sqrt(12 gamma), gamma chi} for p <= p_c", M,
                                std::min(std::sqrt(TheoremConstants::mag_sqrt * gamma), gamma * st.chi), in));
    }
    if (p >= p_c) {
      out.push_back(exact_check("mag_upper_super", "M <= sqrt(12 gamma) + 13 eps for p >= p_c", M,
                                std::sqrt(TheoremConstants::mag_sqrt * gamma) +
                                    TheoremConstants::mag_eps * Omega * (p - p_c),
                                in));
    }
  }
  for (std::uint64_t k = 1; k <= g.V(); ++k) {
    const double kd = static_cast<double>(k);
    const double gt = 1.0 / kd;
    const double Mt = e.magnetization(p, gt).M;
    const std::string in = base + ";k=" + format_double(kd);
    out.push_back(exact_check("bridge_tail_upper", "P(|C(0)| >= k) <= (e/(e-1)) M(p, 1/k)", st.P_geq[k],
                              TheoremConstants::tail_bridge * Mt, in));
    for (double gamma : gamma_grid) {
      const double lo = e.magnetization(p, gamma).M - gamma / gt * std::exp(gt * kd) * Mt;
      out.push_back(exact_check("bridge_tail_lower",
                                "P(|C(0)| >= k) >= M(p, gamma) - (gamma/gamma~) e^{gamma~ k} M(p, gamma~)", lo,
                                st.P_geq[k], in + ";gamma=" + format_double(gamma)));
    }
  }
  return out;
}

std::vector<BoundCheck> exact_tail_bound(const ExactEnumerator& e, double p) {
  const Graph& g = e.graph();
  const ExactStats st = e.stats(p);
  const double x2 = st.chi * st.chi;
  const std::string base = Inputs().add("graph", g.spec()).add("p", p).add("chi", st.chi).str();
  std::vector<BoundCheck> out;
  for (std::uint64_t k = static_cast<std::uint64_t>(std::ceil(x2)); k <= g.V(); ++k) {
    const double kd = static_cast<double>(k);
    out.push_back(exact_check("tail_sub", "P(|C(0)| >= k) <= sqrt(e/k) exp(-k/(2 chi^2)) for k >= chi^2", st.P_geq[k],
                              std::sqrt(std::numbers::e / kd) * std::exp(-kd / (2.0 * x2)),
                              base + ";k=" + format_double(kd)));
  }
  return out;
}

std::vector<BoundCheck> check_differential_inequalities(const ExactEnumerator& e, std::span<const double> p_grid,
                                                        std::span<const double> gamma_grid,
                                                        const DifferentialOptions& opt) {
  const Graph& g = e.graph();
  const double Omega = g.degree();
  std::vector<BoundCheck> out;
  for (double p : p_grid) {
    require_probability(p, "p");
    const ExactStats st = e.stats(p);
    const TriangleReport tri = triangle_from_matrix(st.tau, g, p);
    const std::string base = Inputs().add("graph", g.spec()).add("p", p).add("h", opt.h).str();

    const Derivative dchi = finite_difference([&](double q) { return e.chi(q); }, p, opt.h);
    const double x2 = st.chi * st.chi;
    out.push_back(fd_check("dchi_upper", "d chi/dp <= Omega chi^2", dchi.value, Omega * x2, dchi.error,
                           base + ";fd_error=" + format_double(dchi.error)));
    out.push_back(fd_check("dchi_lower", "[1 - nabla_bar] Omega chi^2 <= d chi/dp", (1.0 - tri.nabla_bar) * Omega * x2,
                           dchi.value, dchi.error,
                           base + ";nabla_bar=" + format_double(tri.nabla_bar) + ";fd_error=" + format_double(dchi.error)));

    for (double gamma : gamma_grid) {
      if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidParameter("gamma must lie in (0, 1)");
      const ExactMagnetization mg = e.magnetization(p, gamma);
      const double M = mg.M;
      const double dMg = mg.chi_gamma / (1.0 - gamma);
      const Derivative dMp = finite_difference([&](double q) { return e.magnetization(q, gamma).M; }, p, opt.h);
      const std::string in = base + ";gamma=" + format_double(gamma) + ";fd_error=" + format_double(dMp.error);

      out.push_back(fd_check("mag_ineq1", "(1-p) dM/dp <= Omega (1-gamma) M dM/dgamma", (1.0 - p) * dMp.value,
                             Omega * (1.0 - gamma) * M * dMg, (1.0 - p) * dMp.error, in));
      out.push_back(fd_check("mag_ineq2", "M <= gamma dM/dgamma + M^2 + p M dM/dp", M,
                             gamma * dMg + M * M + p * M * dMp.value, p * M * dMp.error, in));
      const double nm = tri.nabla_max;
      const double bracket = std::tgamma(Omega + 1.0) / (2.0 * std::tgamma(Omega - 1.0)) * p * p *
                                 std::pow(1.0 - p, Omega - 2.0) * std::pow(1.0 - nm, 3.0) -
                             p - nm;
      const double rhs = bracket * p * Omega * (1.0 - gamma) * M * M * dMg;
      out.push_back(fd_check("mag_rdi", "M >= [C(Omega,2) p^2 (1-p)^{Omega-2} (1-nabla_max)^3 - p - nabla_max] "
                                        "p Omega (1-gamma) M^2 dM/dgamma",
                             rhs, M, exact_slack(rhs, M), in + ";nabla_max=" + format_double(nm)));

      const Derivative dZ = finite_difference([&](double q) { return e.magnetization(q, gamma).E_Zg2; }, p, opt.h);
      out.push_back(fd_check("zg2_ineq", "d E[Z_G^2]/dp <= (3 Omega/(1-p)) ((1-gamma)/gamma) M E[Z_G^2]", dZ.value,
                             3.0 * Omega / (1.0 - p) * (1.0 - gamma) / gamma * M * mg.E_Zg2, dZ.error,
                             base + ";gamma=" + format_double(gamma) + ";fd_error=" + format_double(dZ.error)));
    }
  }
  return out;
}

// --- reporting ------------------------------------------------------------------------

SuiteSummary summarize(std::span<const BoundCheck> checks) {
  SuiteSummary s;
  for (const auto& c : checks) {
    switch (c.verdict) {
      case Verdict::kPass: ++s.pass; break;
      case Verdict::kFail: ++s.fail; break;
      case Verdict::kReportOnly: ++s.report_only; break;
      case Verdict::kInconclusive: ++s.inconclusive; break;
    }
  }
  return s;
}

std::string checks_to_json(std::span<const BoundCheck> checks) {
  auto arr = nlohmann::ordered_json::array();
  auto num = [](double x) -> nlohmann::ordered_json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  for (const auto& c : checks) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["statement"] = c.statement;
    j["lhs"] = num(c.lhs);
    j["rhs"] = num(c.rhs);
    j["slack"] = num(c.slack);
    j["margin"] = num(c.margin);
    j["verdict"] = std::string(verdict_name(c.verdict));
    j["inputs"] = c.inputs;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

void print_checks_table(std::ostream& os, std::span<const BoundCheck> checks) {
  std::size_t w = 4;
  for (const auto& c : checks) w = std::max(w, c.name.size());
  os << std::left << std::setw(static_cast<int>(w)) << "name" << "  " << std::setw(12) << "verdict" << "  "
     << std::setw(14) << "lhs" << "  " << std::setw(14) << "rhs" << "  " << std::setw(14) << "margin" << "  inputs\n";
  for (const auto& c : checks) {
    os << std::setw(static_cast<int>(w)) << c.name << "  " << std::setw(12) << verdict_name(c.verdict) << "  "
       << std::setw(14) << format_double(c.lhs) << "  " << std::setw(14) << format_double(c.rhs) << "  "
       << std::setw(14) << format_double(c.margin) << "  " << c.inputs << '\n';
  }
  const SuiteSummary s = summarize(checks);
  os << "pass " << s.pass << ", fail " << s.fail << ", inconclusive " << s.inconclusive << ", report-only "
     << s.report_only << '\n';
}

}  // namespace percolab
