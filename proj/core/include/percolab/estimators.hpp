#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "percolab/graph.hpp"
#include "percolab/percolation.hpp"

namespace percolab {

// Monte Carlo scalar. `std_error` is the sample standard deviation over
// replicas divided by sqrt(n_samples).
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

Estimate estimate_from(std::span<const double> values, std::uint64_t seed);

// Sampling knobs shared by every estimator. Replica i of a run uses the
// counter-RNG coordinates (seed, first_replica + i), so two runs with the same
// seed and overlapping replica ranges share configurations.
struct RunOptions {
  unsigned workers = 0;
  SamplingMode mode = SamplingMode::kAuto;
  std::uint64_t first_replica = 0;
};

// Per-replica observables, each averaged over all V roots of the configuration
// where it is root-dependent, with the green set marginalized analytically.
enum class Observable {
  kChi,           // (1/V) sum_C |C|^2
  kCmax,          // |C_max|
  kRootSize,      // |C(0)|
  kTail,          // Z_{>=k} / V                             param = k
  kZGeq,          // Z_{>=k}                                 param = k
  kChiGeq,        // (1/V) sum_{|C|>=s} |C|^2                param = s
  kChiLess,       // (1/V) sum_{|C|<s} |C|^2                 param = s
  kMagnetization, // 1 - (1/V) sum_C |C| (1-gamma)^|C|       param = gamma
  kChiGamma,      // (1/V) sum_C |C|^2 (1-gamma)^|C|         param = gamma
  kChiPerp,       // (1/V) sum_C |C|^2 (1 - (1-gamma)^|C|)   param = gamma
  kZGreenSq,      // E[Z_G^2 | bonds]                        param = gamma
  kNotGreenSq,    // (1/V) sum_C |C|^3 (1-gamma)^|C|         param = gamma
  kCmaxAtLeast,   // 1[|C_max| >= t]                         param = t
  kCmaxAtMost,    // 1[|C_max| <= t]                         param = t
};

struct ObservableSpec {
  Observable kind;
  double param = 0.0;
};

std::string observable_name(Observable o);
// True for observables that take a size or gamma parameter.
bool observable_has_param(Observable o);
// Inverse of observable_name, with the parameter after a colon: "chi",
// "P_geq:16", "M:0.01". Throws InvalidParameter.
ObservableSpec parse_observable(std::string_view text);

// Row-major replicas x observables.
class ReplicaMatrix {
 public:
  ReplicaMatrix() = default;
  ReplicaMatrix(std::uint64_t rows, std::size_t cols, std::uint64_t seed)
      : rows_(rows), cols_(cols), seed_(seed), data_(rows * cols, 0.0) {}

  std::uint64_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double& at(std::uint64_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double at(std::uint64_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  std::span<double> row(std::uint64_t r) noexcept { return {data_.data() + r * cols_, cols_}; }

  std::vector<double> column(std::size_t c) const;
  Estimate mean(std::size_t c) const;
  // Estimate of sum_j w_j E[col_j], with the stderr of the per-replica combination.
  Estimate combination(std::span<const double> weights) const;
  // Unbiased sample variance of a column; stderr from the fourth central moment.
  Estimate variance(std::size_t c) const;
  // Nearest-rank empirical quantile.
  double quantile(std::size_t c, double q) const;

  void append(const ReplicaMatrix& more);

 private:
  std::uint64_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> data_;
};

// Samples n replicas at p and evaluates `specs` on each one.
ReplicaMatrix sample_observables(const Graph& g, double p, std::span<const ObservableSpec> specs,
                                 std::uint64_t n_samples, std::uint64_t seed, const RunOptions& opt = {});

// Per-configuration values for one observable; exposed for tests.
double observable_value(const ObservableSpec& spec, const ConfigStats& s);

struct TailTable {
  std::vector<std::uint64_t> ks;
  std::vector<Estimate> estimates;
};

struct CmaxEstimate {
  Estimate mean;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
};

struct MagnetizationEstimate {
  Estimate M;
  Estimate chi_gamma;
  Estimate chi_perp;
};

struct ThetaAlphaEstimate {
  std::uint64_t N_alpha = 0;
  Estimate theta;
};

Estimate estimate_chi(const Graph& g, double p, std::uint64_t n_samples, std::uint64_t seed,
                      const RunOptions& opt = {});
TailTable estimate_tail(const Graph& g, double p, std::span<const std::uint64_t> ks, std::uint64_t n_samples,
                        std::uint64_t seed, const RunOptions& opt = {});
CmaxEstimate estimate_cmax(const Graph& g, double p, std::uint64_t n_samples, std::uint64_t seed,
                           const RunOptions& opt = {});
MagnetizationEstimate estimate_magnetization(const Graph& g, double p, double gamma, std::uint64_t n_samples,
                                             std::uint64_t seed, const RunOptions& opt = {});
// N_alpha = ceil(eps^-2 (eps V^{1/3})^alpha); alpha = 0 is accepted.
std::uint64_t n_alpha(double eps, double alpha, std::uint64_t V);
ThetaAlphaEstimate estimate_theta_alpha(const Graph& g, double p, double eps, double alpha, std::uint64_t n_samples,
                                        std::uint64_t seed, const RunOptions& opt = {});
Estimate estimate_var_z(const Graph& g, double p, std::uint64_t s, std::uint64_t n_samples, std::uint64_t seed,
                        const RunOptions& opt = {});
Estimate estimate_EZg2(const Graph& g, double p, double gamma, std::uint64_t n_samples, std::uint64_t seed,
                       const RunOptions& opt = {});
// Solves k = V * P_{>=k} by log-log interpolation of the tail table.
double estimate_k0(const Graph& g, const TailTable& tail);

}  // namespace percolab
