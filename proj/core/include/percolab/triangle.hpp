#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "percolab/estimators.hpp"
#include "percolab/exact.hpp"
#include "percolab/graph.hpp"

namespace percolab {

// tau_p(0, x). Lattice tables are indexed by displacement (a vertex index of
// the translation group); complete-graph tables hold {diagonal, off-diagonal}.
struct TwoPointTable {
  enum class Kind { kLattice, kComplete };
  Kind kind = Kind::kLattice;
  double p = 0.0;
  std::uint64_t V = 0;
  std::vector<double> tau;
  std::vector<double> std_error;
  std::uint64_t n_samples = 0;  // 0 for exact tables
  std::uint64_t seed = 0;

  // Sum over x of tau(0, x), i.e. chi.
  double total() const;
};

// Translation-averaged indicator [x <-> x+d] over all roots x and replicas.
// Cost per replica is sum_C |C|^2.
TwoPointTable estimate_two_point(const Graph& g, double p, std::uint64_t n_samples, std::uint64_t seed,
                                 const RunOptions& opt = {});
TwoPointTable exact_two_point(const Graph& g, const ExactStats& s);
TwoPointTable complete_exact_two_point(std::uint32_t n, double p);

struct TriangleReport {
  double p = 0.0;
  std::uint64_t V = 0;
  std::uint32_t Omega = 0;
  double chi = 0.0;
  double nabla_diag = 0.0;
  double nabla_off_max = 0.0;
  double nabla_bar = 0.0;  // max over adjacent pairs
  double nabla_max = 0.0;  // max over all pairs
  double a0_witness = 0.0; // max(nabla_off_max, nabla_diag - 1)
  double chi_cubed_over_V = 0.0;
};

enum class ConvolutionMethod { kAuto, kDirect, kFft };

// nabla(0, y) for every displacement y of a lattice table. kAuto switches to
// the FFT above 4096 vertices.
std::vector<double> triangle_row(const TwoPointTable& t, const Graph& g,
                                 ConvolutionMethod method = ConvolutionMethod::kAuto);
TriangleReport triangle_from_two_point(const TwoPointTable& t, const Graph& g);
// Same report from a full V x V two-point matrix (the brute-force path).
TriangleReport triangle_from_matrix(std::span<const double> tau, const Graph& g, double p);
// tau^3 for a V x V row-major matrix.
std::vector<double> matrix_cube(std::span<const double> tau, std::uint64_t V);

struct TriangleVerdict {
  bool holds = false;
  double a0 = 0.0;
  double diag_margin = 0.0;  // 1 + a0 - nabla_diag
  double off_margin = 0.0;   // a0 - nabla_off_max
};
TriangleVerdict check_triangle_condition(const TriangleReport& r, double a0);

struct SharpenedFit {
  double K1 = 0.0;
  double K2 = 0.0;
  double max_residual = 0.0;
  std::vector<double> residuals;
};
// Least squares nabla_off_max ~ K1 / Omega + K2 chi^3 / V over reports.
SharpenedFit check_sharpened_condition(std::span<const TriangleReport> reports, std::uint32_t Omega,
                                       std::uint64_t V);

// {p, nabla_diag, nabla_off_max, nabla_bar, nabla_max, a0_witness, chi_cubed_over_V}
std::string triangle_to_json(const TriangleReport& r);

}  // namespace percolab
