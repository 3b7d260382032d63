#include "percolab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "percolab/errors.hpp"
#include "percolab/parallel.hpp"

namespace percolab {

namespace {

constexpr double kUnderflow = 1e-300;

void require_samples(std::uint64_t n) {
  if (n < 2) throw InvalidParameter("n_samples must be at least 2");
}

void require_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidParameter("gamma must lie in [0, 1]");
}

// (1-gamma)^s and 1-(1-gamma)^s, accurate for both tiny gamma and huge s.
struct GreenWeights {
  double not_green;
  double green;
};

GreenWeights green_weights(double log1m_gamma, double s) {
  const double x = s * log1m_gamma;
  double t = std::exp(x);
  if (t < kUnderflow) t = 0.0;
  return {t, t == 0.0 ? 1.0 : -std::expm1(x)};
}

}  // namespace

Estimate estimate_from(std::span<const double> values, std::uint64_t seed) {
  Estimate e;
  e.n_samples = values.size();
  e.seed = seed;
  if (values.empty()) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return e;
  double ss = 0.0;
  for (double v : values) ss += (v - e.mean) * (v - e.mean);
  const double n = static_cast<double>(values.size());
  e.std_error = std::sqrt(ss / (n - 1.0) / n);
  return e;
}

std::string observable_name(Observable o) {
  switch (o) {
    case Observable::kChi: return "chi";
    case Observable::kCmax: return "cmax";
    case Observable::kRootSize: return "root_size";
    case Observable::kTail: return "P_geq";
    case Observable::kZGeq: return "Z_geq";
    case Observable::kChiGeq: return "chi_geq";
    case Observable::kChiLess: return "chi_less";
    case Observable::kMagnetization: return "M";
    case Observable::kChiGamma: return "chi_gamma";
    case Observable::kChiPerp: return "chi_perp";
    case Observable::kZGreenSq: return "E_Zg2";
    case Observable::kNotGreenSq: return "C0sq_not_green";
    case Observable::kCmaxAtLeast: return "P_cmax_geq";
    case Observable::kCmaxAtMost: return "P_cmax_leq";
  }
  return "unknown";
}

bool observable_has_param(Observable o) {
  switch (o) {
    case Observable::kChi:
    case Observable::kCmax:
    case Observable::kRootSize:
      return false;
    default:
      return true;
  }
}

ObservableSpec parse_observable(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  for (int i = 0; i <= static_cast<int>(Observable::kCmaxAtMost); ++i) {
    const auto o = static_cast<Observable>(i);
    if (observable_name(o) != name) continue;
    if (!observable_has_param(o)) {
      if (colon != std::string_view::npos) throw InvalidParameter("observable '" + std::string(name) + "' takes no parameter");
      return {o, 0.0};
    }
    if (colon == std::string_view::npos) throw InvalidParameter("observable '" + std::string(name) + "' needs ':<value>'");
    const std::string value(text.substr(colon + 1));
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) throw InvalidParameter("bad parameter in observable '" + std::string(text) + "'");
    return {o, x};
  }
  throw InvalidParameter("unknown observable '" + std::string(name) + "'");
}

std::vector<double> ReplicaMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::uint64_t r = 0; r < rows_; ++r) out[r] = at(r, c);
  return out;
}

Estimate ReplicaMatrix::mean(std::size_t c) const { return estimate_from(column(c), seed_); }

Estimate ReplicaMatrix::combination(std::span<const double> weights) const {
  if (weights.size() != cols_) throw InvalidParameter("combination weights do not match column count");
  std::vector<double> v(rows_, 0.0);
  for (std::uint64_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (weights[c] != 0.0) v[r] += weights[c] * at(r, c);
  return estimate_from(v, seed_);
}

Estimate ReplicaMatrix::variance(std::size_t c) const {
  Estimate e;
  e.n_samples = rows_;
  e.seed = seed_;
  if (rows_ < 2) return e;
  const auto x = column(c);
  const double n = static_cast<double>(rows_);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  e.mean = m2 * n / (n - 1.0);
  const double var_of_var = (m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n;
  e.std_error = std::sqrt(std::max(0.0, var_of_var));
  return e;
}

double ReplicaMatrix::quantile(std::size_t c, double q) const {
  if (rows_ == 0) throw InvalidParameter("quantile of empty sample");
  auto x = column(c);
  std::sort(x.begin(), x.end());
  const double rank = std::ceil(q * static_cast<double>(rows_));
  const std::uint64_t idx = static_cast<std::uint64_t>(std::clamp(rank, 1.0, static_cast<double>(rows_))) - 1;
  return x[idx];
}

void ReplicaMatrix::append(const ReplicaMatrix& more) {
  if (rows_ == 0 && cols_ == 0) {
    *this = more;
    return;
  }
  if (more.cols_ != cols_) throw InvalidParameter("cannot append matrices with different columns");
  data_.insert(data_.end(), more.data_.begin(), more.data_.end());
  rows_ += more.rows_;
}

double observable_value(const ObservableSpec& spec, const ConfigStats& s) {
  const double V = static_cast<double>(s.V);
  const auto& hist = s.size_histogram;
  switch (spec.kind) {
    case Observable::kChi:
      return static_cast<double>(s.sum_sq_sizes) / V;
    case Observable::kCmax:
      return static_cast<double>(s.max_cluster_size);
    case Observable::kRootSize:
      return static_cast<double>(s.root_cluster_size);
    case Observable::kTail:
      return static_cast<double>(z_geq(s, static_cast<std::uint64_t>(spec.param))) / V;
    case Observable::kZGeq:
      return static_cast<double>(z_geq(s, static_cast<std::uint64_t>(spec.param)));
    case Observable::kChiGeq:
    case Observable::kChiLess: {
      const bool geq = spec.kind == Observable::kChiGeq;
      std::uint64_t acc = 0;
      for (const auto& [size, count] : hist)
        if ((static_cast<double>(size) >= spec.param) == geq) acc += size * size * count;
      return static_cast<double>(acc) / V;
    }
    case Observable::kMagnetization:
    case Observable::kChiGamma:
    case Observable::kChiPerp:
    case Observable::kZGreenSq:
    case Observable::kNotGreenSq: {
      require_gamma(spec.param);
      const double lg = std::log1p(-spec.param);
      double m = 0.0, cg = 0.0, cp = 0.0, lin = 0.0, quad = 0.0, cube = 0.0;
      for (const auto& [size, count] : hist) {
        const double k = static_cast<double>(size), c = static_cast<double>(count);
        const auto w = green_weights(lg, k);
        m += c * k * w.green;
        cg += c * k * k * w.not_green;
        cp += c * k * k * w.green;
        lin += c * k * w.green;
        quad += c * k * k * w.green * w.not_green;
        cube += c * k * k * k * w.not_green;
      }
      switch (spec.kind) {
        case Observable::kMagnetization: return m / V;
        case Observable::kChiGamma: return cg / V;
        case Observable::kChiPerp: return cp / V;
        case Observable::kZGreenSq: return lin * lin + quad;
        default: return cube / V;
      }
    }
    case Observable::kCmaxAtLeast:
      return static_cast<double>(s.max_cluster_size) >= spec.param ? 1.0 : 0.0;
    case Observable::kCmaxAtMost:
      return static_cast<double>(s.max_cluster_size) <= spec.param ? 1.0 : 0.0;
  }
  return 0.0;
}

ReplicaMatrix sample_observables(const Graph& g, double p, std::span<const ObservableSpec> specs,
                                 std::uint64_t n_samples, std::uint64_t seed, const RunOptions& opt) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("p must lie in [0, 1]");
  for (const auto& s : specs) {
    if ((s.kind == Observable::kTail || s.kind == Observable::kZGeq) && s.param < 1.0)
      throw InvalidParameter("tail index k must be >= 1");
  }
  ReplicaMatrix out(n_samples, specs.size(), seed);
  const unsigned workers = resolve_workers(opt.workers);
  struct Scratch {
    ClusterForest forest;
    StatsScratch stats;
  };
  std::vector<std::unique_ptr<Scratch>> scratch(workers);
  parallel_blocks(n_samples, kReplicaBlock, workers,
                  [&](unsigned w, std::uint64_t, std::uint64_t begin, std::uint64_t end) {
                    if (!scratch[w]) scratch[w] = std::make_unique<Scratch>();
                    Scratch& s = *scratch[w];
                    for (std::uint64_t i = begin; i < end; ++i) {
                      sample_forest(g, p, seed, opt.first_replica + i, opt.mode, s.forest);
                      const ConfigStats st = config_stats(s.forest, &s.stats);
                      auto row = out.row(i);
                      for (std::size_t c = 0; c < specs.size(); ++c) row[c] = observable_value(specs[c], st);
                    }
                  });
  return out;
}

Estimate estimate_chi(const Graph& g, double p, std::uint64_t n_samples, std::uint64_t seed, const RunOptions& opt) {
  require_samples(n_samples);
  const ObservableSpec spec{Observable::kChi};
  return sample_observables(g, p, {&spec, 1}, n_samples, seed, opt).mean(0);
}

TailTable estimate_tail(const Graph& g, double p, std::span<const std::uint64_t> ks, std::uint64_t n_samples,
                        std::uint64_t seed, const RunOptions& opt) {
  require_samples(n_samples);
  if (!std::is_sorted(ks.begin(), ks.end())) throw InvalidParameter("tail ks must be sorted");
  std::vector<ObservableSpec> specs;
  for (auto k : ks) {
    if (k < 1) throw InvalidParameter("tail index k must be >= 1");
    specs.push_back({Observable::kTail, static_cast<double>(k)});
  }
  const auto m = sample_observables(g, p, specs, n_samples, seed, opt);
  TailTable t;
  t.ks.assign(ks.begin(), ks.end());
  for (std::size_t i = 0; i < ks.size(); ++i) t.estimates.push_back(m.mean(i));
  return t;
}

CmaxEstimate estimate_cmax(const Graph& g, double p, std::uint64_t n_samples, std::uint64_t seed,
                           const RunOptions& opt) {
  require_samples(n_samples);
  const ObservableSpec spec{Observable::kCmax};
  const auto m = sample_observables(g, p, {&spec, 1}, n_samples, seed, opt);
  return {m.mean(0), m.quantile(0, 0.05), m.quantile(0, 0.5), m.quantile(0, 0.95)};
}

MagnetizationEstimate estimate_magnetization(const Graph& g, double p, double gamma, std::uint64_t n_samples,
                                             std::uint64_t seed, const RunOptions& opt) {
  require_samples(n_samples);
  require_gamma(gamma);
  const ObservableSpec specs[] = {
      {Observable::kMagnetization, gamma}, {Observable::kChiGamma, gamma}, {Observable::kChiPerp, gamma}};
  const auto m = sample_observables(g, p, specs, n_samples, seed, opt);
  return {m.mean(0), m.mean(1), m.mean(2)};
}

std::uint64_t n_alpha(double eps, double alpha, std::uint64_t V) {
  if (!(eps > 0.0)) throw InvalidParameter("eps must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must lie in [0, 1)");
  const double x = std::pow(eps, -2.0) * std::pow(eps * std::cbrt(static_cast<double>(V)), alpha);
  // Guard against x landing a few ulps above an integer.
  const double n = std::ceil(x * (1.0 - 1e-12));
  if (n > static_cast<double>(V)) {
    throw DegenerateCutoff("N_alpha = " + std::to_string(n) + " exceeds V = " + std::to_string(V));
  }
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

ThetaAlphaEstimate estimate_theta_alpha(const Graph& g, double p, double eps, double alpha, std::uint64_t n_samples,
                                        std::uint64_t seed, const RunOptions& opt) {
  const std::uint64_t N = n_alpha(eps, alpha, g.V());
  const auto t = estimate_tail(g, p, {&N, 1}, n_samples, seed, opt);
  return {N, t.estimates[0]};
}

Estimate estimate_var_z(const Graph& g, double p, std::uint64_t s, std::uint64_t n_samples, std::uint64_t seed,
                        const RunOptions& opt) {
  require_samples(n_samples);
  if (s < 1) throw InvalidParameter("s must be >= 1");
  const ObservableSpec spec{Observable::kZGeq, static_cast<double>(s)};
  return sample_observables(g, p, {&spec, 1}, n_samples, seed, opt).variance(0);
}

Estimate estimate_EZg2(const Graph& g, double p, double gamma, std::uint64_t n_samples, std::uint64_t seed,
                       const RunOptions& opt) {
  require_samples(n_samples);
  require_gamma(gamma);
  const ObservableSpec spec{Observable::kZGreenSq, gamma};
  return sample_observables(g, p, {&spec, 1}, n_samples, seed, opt).mean(0);
}

double estimate_k0(const Graph& g, const TailTable& tail) {
  const double V = static_cast<double>(g.V());
  const auto& ks = tail.ks;
  if (ks.empty() || ks.size() != tail.estimates.size()) throw BracketError("empty tail table");
  auto mass = [&](std::size_t i) { return V * tail.estimates[i].mean; };
  auto k = [&](std::size_t i) { return static_cast<double>(ks[i]); };
  if (mass(0) < k(0)) {
    throw BracketError("no bracket for k0: V*P(k_min=" + std::to_string(ks[0]) + ") = " + std::to_string(mass(0)) +
                       " < k_min");
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (mass(i) == k(i)) return k(i);
    if (mass(i) > k(i)) continue;
    // Crossing between i-1 and i.
    const double x0 = std::log(k(i - 1)), x1 = std::log(k(i));
    if (mass(i) <= 0.0) {
      // Tail vanished: fall back to linear interpolation of mass - k.
      const double f0 = mass(i - 1) - k(i - 1), f1 = mass(i) - k(i);
      return k(i - 1) + (k(i) - k(i - 1)) * f0 / (f0 - f1);
    }
    const double y0 = std::log(mass(i - 1)), y1 = std::log(mass(i));
    const double slope = (y1 - y0) / (x1 - x0);
    return std::exp((y0 - slope * x0) / (1.0 - slope));
  }
  throw BracketError("no bracket for k0: V*P(k_max=" + std::to_string(ks.back()) + ") = " +
                     std::to_string(mass(ks.size() - 1)) + " >= k_max");
}

}  // namespace percolab
