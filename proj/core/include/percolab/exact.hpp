#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "percolab/graph.hpp"

namespace percolab {

inline constexpr std::uint64_t kMaxExactEdges = 24;

// Exact observables at one p. Size-indexed tables have length V + 2 and are
// indexed by the size itself (entry 0 unused, entry V + 1 is the empty tail).
struct ExactStats {
  std::string graph;
  double p = 0.0;
  std::uint64_t V = 0;
  double chi = 0.0;
  std::vector<double> cluster_law;  // P(|C(0)| = k)
  std::vector<double> P_geq;        // P(|C(0)| >= k)
  std::vector<double> cmax_law;     // P(|C_max| = k)
  double E_cmax = 0.0;
  std::vector<double> tau;          // V x V row-major, tau(x, y)
  std::vector<double> E_Z_geq;
  std::vector<double> Var_Z_geq;
  std::vector<double> chi_geq;      // E[|C(0)| 1(|C(0)| >= s)]
  std::vector<double> chi_less;     // E[|C(0)| 1(|C(0)| < s)]

  double tau_at(Vertex x, Vertex y) const { return tau[static_cast<std::size_t>(x) * V + y]; }
};

struct ExactMagnetization {
  double gamma = 0.0;
  double M = 0.0;
  double chi_gamma = 0.0;
  double chi_perp = 0.0;
  double E_Zg2 = 0.0;
  double E_C0sq_not_green = 0.0;  // E[|C(0)|^2 1(0 not connected to G)]
};

// Enumerates all 2^E bond configurations once and groups them by the vertex
// partition they induce, keeping per-partition counts by number of occupied
// bonds. Any p is then a cheap polynomial evaluation over partitions.
class ExactEnumerator {
 public:
  explicit ExactEnumerator(const Graph& g, unsigned workers = 0);

  const Graph& graph() const noexcept { return graph_; }
  std::size_t partition_count() const noexcept { return parts_.size(); }

  double chi(double p) const;
  ExactStats stats(double p) const;
  ExactMagnetization magnetization(double p, double gamma) const;

 private:
  struct Part {
    std::vector<std::uint8_t> label;         // canonical cluster label per vertex
    std::vector<std::uint32_t> sizes;        // cluster sizes indexed by label
    std::vector<std::uint64_t> by_occupied;  // configurations with k occupied bonds
  };
  std::vector<double> weights(double p) const;

  Graph graph_;
  std::vector<Part> parts_;
};

std::pair<ExactStats, std::vector<ExactMagnetization>> enumerate_exact(const Graph& g, double p,
                                                                      std::span<const double> gammas);

// Exact law of |C(0)| on K_n (vector indexed by k = 0..n). Evaluated in MPFR
// with working precision raised until two precisions agree; n <= 2000.
std::vector<double> complete_cluster_law(std::uint32_t n, double p);
double complete_chi(std::uint32_t n, double p);

struct CompleteTwoPoint {
  double diag = 1.0;
  double off = 0.0;
};
CompleteTwoPoint complete_two_point(std::uint32_t n, double p);

struct Derivative {
  double value = 0.0;
  double error = 0.0;
};

// Central difference refined by one Richardson step. error = |D(h) - D(2h)|/3
// plus a rounding term. Requires 0 < h < min(p, 1-p)/2.
Derivative finite_difference(const std::function<double(double)>& f, double p, double h);

// Deterministic bisection of chi(p) = lambda V^{1/3} on an enumerable graph.
double exact_pc(const ExactEnumerator& e, double lambda);

// {graph, p, chi, cluster_law[], tau[], var_z[], magnetization{gamma: {...}}}
std::string exact_to_json(const ExactStats& s, std::span<const ExactMagnetization> mags);

}  // namespace percolab
