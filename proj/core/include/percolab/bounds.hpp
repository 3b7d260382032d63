#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "percolab/critical.hpp"
#include "percolab/estimators.hpp"
#include "percolab/exact.hpp"
#include "percolab/graph.hpp"
#include "percolab/triangle.hpp"

namespace percolab {

enum class Verdict { kPass, kFail, kReportOnly, kInconclusive };
std::string_view verdict_name(Verdict v);

// One inequality lhs <= rhs. `slack` is the tolerated violation (a multiple of
// the combined standard error for Monte Carlo inputs, a rounding tolerance
// for exact ones); margin = rhs - lhs + slack, so fail <=> margin < 0.
struct BoundCheck {
  std::string name;
  std::string statement;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double margin = 0.0;
  Verdict verdict = Verdict::kReportOnly;
  std::string inputs;
};

inline constexpr double kExactSlack = 1e-12;
inline constexpr double kStderrMultiplier = 4.0;

BoundCheck make_check(std::string name, std::string statement, double lhs, double rhs, double slack,
                      std::string inputs);
BoundCheck make_report(std::string name, std::string statement, double value, std::string inputs);

// Explicit constants used as pass/fail thresholds. Constants that are only
// known to exist are never asserted; checks involving them are report-only.
struct TheoremConstants {
  static constexpr double window_tail_lower = 1.0 / 360.0;  // b2
  static constexpr double window_tail_upper = 6.0;          // b3
  static constexpr double cmax_sup_eps = 21.0;
  static constexpr double cmax_sup_window = 7.0;
  static constexpr double cmax_sup_prob = 21.0;
  static constexpr double theta_sup = 27.0;
  static constexpr double chi_sup = 81.0;
  static constexpr double mag_sqrt = 12.0;                 // under the square root
  static constexpr double mag_eps = 13.0;
  static constexpr double mag_lower = 1.0 / 3.0;
  static constexpr double cmax_sub_upper = 2.0;
  static constexpr double cmax_sub_lower = 1e-4;
  static constexpr double cmax_sub_div = 3600.0;
  static constexpr double cmax_sub_prob = 36.0;
  static constexpr double tail_bridge = std::numbers::e / (std::numbers::e - 1.0);
  static constexpr double complete_K2 = 7.0;
};

struct SharpenedParams {
  double K1 = 0.0;
  double K2 = 0.0;
  std::uint32_t Omega = 1;
  double lambda = 0.0;

  double a() const { return K1 / Omega + K2 * lambda * lambda * lambda; }
  double K2_tilde() const { return K2 / (1.0 - a()); }
  double a_tilde(double eps, double eps0) const {
    return K1 / Omega + K2 * lambda * lambda * lambda * eps0 / (eps0 + (1.0 - a()) * eps);
  }
};

struct SampleBudget {
  std::uint64_t n_samples = 1000;
  std::uint64_t seed = 1;
  RunOptions run;
};

// --- Monte Carlo checks ----------------------------------------------------

std::vector<BoundCheck> check_pc_window(const PcResult& pc, const Graph& g, double a0);
std::vector<BoundCheck> check_lambda_cubed(const TriangleReport& r, double lambda, double a0);
std::vector<BoundCheck> check_chi_subcritical(const Graph& g, const PcResult& pc, std::span<const double> eps_list,
                                              double a0, const SampleBudget& b);
std::vector<BoundCheck> check_sharpened(const Graph& g, const PcResult& pc, std::span<const double> eps_list,
                                        const SharpenedParams& sp, const SampleBudget& b);
std::vector<BoundCheck> check_subcritical_cmax(const Graph& g, double p, const SampleBudget& b);

struct WindowTailResult {
  std::vector<BoundCheck> checks;
  std::vector<std::uint64_t> ks;
  std::vector<Estimate> tail;
  double slope = 0.0;
  double slope_error = 0.0;
  double admissible_k_max = 0.0;
};
// slope_tolerance > 0 turns the fitted-slope report into an assertion
// |slope + 1/2| <= slope_tolerance (within 4 stderr of the slope).
std::vector<WindowTailResult> check_window_tail(const Graph& g, const PcResult& pc,
                                                std::span<const double> Lambda_list,
                                                std::span<const std::uint64_t> k_grid, const SampleBudget& b,
                                                double slope_tolerance = 0.0);

struct WindowCmaxResult {
  std::vector<BoundCheck> checks;
  Estimate ratio;  // E|C_max| / V^{2/3}
  std::vector<double> coverage;  // for omega in {2, 4, 8, 16}
};
WindowCmaxResult check_window_cmax(const Graph& g, const PcResult& pc, double Lambda, const SampleBudget& b);

std::vector<BoundCheck> check_supercritical(const Graph& g, const PcResult& pc, std::span<const double> eps_list,
                                            double alpha, const SampleBudget& b);
std::vector<BoundCheck> check_magnetization(const Graph& g, const PcResult& pc, std::span<const double> p_list,
                                            std::span<const double> gamma_grid, const SampleBudget& b);
std::vector<BoundCheck> check_variance_bounds(const Graph& g, std::span<const double> p_list,
                                              std::span<const std::uint64_t> s_list,
                                              std::span<const double> gamma_grid, const SampleBudget& b);

// --- Exact checks on enumerable graphs ------------------------------------

std::vector<BoundCheck> exact_variance_bounds(const ExactEnumerator& e, double p, std::span<const double> gamma_grid);
std::vector<BoundCheck> exact_magnetization_bounds(const ExactEnumerator& e, double p, double p_c,
                                                   std::span<const double> gamma_grid);
std::vector<BoundCheck> exact_tail_bound(const ExactEnumerator& e, double p);

struct DifferentialOptions {
  double h = 1e-3;
};
std::vector<BoundCheck> check_differential_inequalities(const ExactEnumerator& e, std::span<const double> p_grid,
                                                        std::span<const double> gamma_grid,
                                                        const DifferentialOptions& opt = {});

// --- Reports ----------------------------------------------------------------

struct SuiteSummary {
  std::size_t pass = 0, fail = 0, report_only = 0, inconclusive = 0;
};
SuiteSummary summarize(std::span<const BoundCheck> checks);
std::string checks_to_json(std::span<const BoundCheck> checks);
void print_checks_table(std::ostream& os, std::span<const BoundCheck> checks);

}  // namespace percolab
