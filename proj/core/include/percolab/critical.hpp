#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "percolab/estimators.hpp"
#include "percolab/graph.hpp"

namespace percolab {

struct PcTracePoint {
  double p = 0.0;
  Estimate chi;
  int decision = 0;  // -1: chi < target, +1: chi > target, 0: undecided
};

struct PcResult {
  std::string graph;
  double p_c_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
  double lambda = 0.0;
  double target_chi = 0.0;
  double confidence = 0.0;
  double rel_tol = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t total_samples = 0;
  bool converged = false;
  std::vector<PcTracePoint> trace;
};

struct PcOptions {
  double lambda = 0.1;
  double rel_tol = 1e-3;
  double confidence = 0.99;      // per comparison, before Bonferroni over depth
  std::uint64_t budget = 1u << 24;  // total replicas over all midpoints
  std::uint64_t initial_samples = 64;
  std::uint64_t max_samples_per_point = 1u << 16;
  double exponent = 1.0 / 3.0;   // target chi = lambda V^exponent
  RunOptions run;
};

// Stochastic bisection for chi(p_c) = lambda V^{1/3}. Each midpoint doubles its
// replica count until the confidence interval for chi - target excludes zero.
// A midpoint that stays undecided at the per-point cap is kept as the centre
// and the bracket is tightened around it from the quarter points instead.
// All midpoints share the seed, so in edge-keyed mode chi-hat is monotone in p.
PcResult solve_pc(const Graph& g, const PcOptions& opt, std::uint64_t seed);

std::string pc_to_json(const PcResult& r);
PcResult pc_from_json(const std::string& text);

enum class WindowClass { kBelow, kInside, kAbove };
std::string_view window_class_name(WindowClass c);

struct WindowParams {
  double p = 0.0;
  double p_c = 0.0;
  std::uint32_t Omega = 0;
  std::uint64_t V = 0;
  double lambda = 0.0;
  double eps = 0.0;     // Omega (p - p_c)
  double Lambda = 0.0;  // eps V^{1/3}
  double eps0 = 0.0;    // 1 / (lambda V^{1/3})
  WindowClass classification = WindowClass::kInside;
};

WindowParams window_params(const Graph& g, double p, const PcResult& pc, double below_thresh, double above_thresh);
// Inverse map: p = p_c + Lambda / (Omega V^{1/3}).
double p_from_Lambda(const Graph& g, double p_c, double Lambda);
double p_from_eps(const Graph& g, double p_c, double eps);
double eps0_of(const Graph& g, double lambda);

}  // namespace percolab
