#include "percolab/triangle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include <json.hpp>

#include "percolab/errors.hpp"
#include "percolab/parallel.hpp"
#include "percolab/percolation.hpp"

namespace percolab {

namespace {

constexpr std::uint64_t kDirectLimit = 4096;

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// c = a * b on the translation group.
std::vector<double> convolve_direct(const Graph& g, std::span<const double> a, std::span<const double> b) {
  const std::uint64_t V = g.V();
  std::vector<double> c(V, 0.0);
  for (Vertex u = 0; u < V; ++u) {
    if (a[u] == 0.0) continue;
    for (Vertex y = 0; y < V; ++y) c[y] += a[u] * b[g.sub(y, u)];
  }
  return c;
}

// tau * tau * tau through an n-dimensional DFT over Z_r^n. Vertex indices are
// little-endian mixed radix with a single radix, so the row-major FFTW layout
// with all extents r is the same array up to axis order, which the DFT does
// not care about.
std::vector<double> cube_fft(const Graph& g, std::span<const double> tau) {
  const std::uint64_t V = g.V();
  std::vector<int> dims(g.dimension(), static_cast<int>(g.radix()));
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * V));
  if (!buf) throw CapacityError("fftw_malloc failed");
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> guard(buf, &fftw_free);
  fftw_plan forward, backward;
  {
    std::lock_guard lock(fftw_planner_mutex());
    forward = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (std::uint64_t i = 0; i < V; ++i) {
    buf[i][0] = tau[i];
    buf[i][1] = 0.0;
  }
  fftw_execute(forward);
  for (std::uint64_t i = 0; i < V; ++i) {
    const double re = buf[i][0], im = buf[i][1];
    const double re2 = re * re - im * im, im2 = 2 * re * im;
    buf[i][0] = re2 * re - im2 * im;
    buf[i][1] = re2 * im + im2 * re;
  }
  fftw_execute(backward);
  std::vector<double> out(V);
  for (std::uint64_t i = 0; i < V; ++i) out[i] = buf[i][0] / static_cast<double>(V);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  return out;
}

TriangleReport finish_report(TriangleReport r) {
  r.nabla_max = std::max(r.nabla_diag, r.nabla_off_max);
  r.a0_witness = std::max(r.nabla_off_max, r.nabla_diag - 1.0);
  r.chi_cubed_over_V = r.chi * r.chi * r.chi / static_cast<double>(r.V);
  return r;
}

}  // namespace

double TwoPointTable::total() const {
  if (kind == Kind::kComplete) return tau[0] + static_cast<double>(V - 1) * tau[1];
  double s = 0.0;
  for (double x : tau) s += x;
  return s;
}

TwoPointTable estimate_two_point(const Graph& g, double p, std::uint64_t n_samples, std::uint64_t seed,
                                 const RunOptions& opt) {
  if (n_samples < 2) throw InvalidParameter("n_samples must be at least 2");
  const std::uint64_t V = g.V();
  TwoPointTable t;
  t.p = p;
  t.V = V;
  t.n_samples = n_samples;
  t.seed = seed;

  if (g.family() == Family::kComplete) {
    // Off-diagonal tau per configuration: ordered pairs in the same cluster / V(V-1).
    const ObservableSpec spec{Observable::kChi};
    auto m = sample_observables(g, p, {&spec, 1}, n_samples, seed, opt);
    const double scale = 1.0 / static_cast<double>(V - 1);
    const double w[] = {scale};
    auto off = m.combination(w);
    off.mean -= scale;
    t.kind = TwoPointTable::Kind::kComplete;
    t.tau = {1.0, off.mean};
    t.std_error = {0.0, off.std_error};
    return t;
  }
  if (!g.has_translations()) throw UnsupportedFamily(g.spec() + " has no translation structure");

  const unsigned workers = resolve_workers(opt.workers);
  const std::uint64_t blocks = (n_samples + kReplicaBlock - 1) / kReplicaBlock;
  std::vector<std::vector<double>> block_sum(blocks), block_sq(blocks);
  std::vector<std::unique_ptr<ClusterForest>> forests(workers);
  parallel_blocks(n_samples, kReplicaBlock, workers,
                  [&](unsigned w, std::uint64_t b, std::uint64_t begin, std::uint64_t end) {
                    if (!forests[w]) forests[w] = std::make_unique<ClusterForest>();
                    auto& f = *forests[w];
                    std::vector<double> sum(V, 0.0), sq(V, 0.0);
                    std::vector<std::uint64_t> count(V);
                    for (std::uint64_t i = begin; i < end; ++i) {
                      sample_forest(g, p, seed, opt.first_replica + i, opt.mode, f);
                      std::fill(count.begin(), count.end(), 0);
                      const auto members = cluster_members(f);
                      for (std::size_t c = 0; c < members.size(); ++c) {
                        const auto cl = members.cluster(c);
                        for (Vertex x : cl)
                          for (Vertex y : cl) ++count[g.sub(y, x)];
                      }
                      for (std::uint64_t d = 0; d < V; ++d) {
                        const double v = static_cast<double>(count[d]) / static_cast<double>(V);
                        sum[d] += v;
                        sq[d] += v * v;
                      }
                    }
                    block_sum[b] = std::move(sum);
                    block_sq[b] = std::move(sq);
                  });
  std::vector<double> sum(V, 0.0), sq(V, 0.0);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    for (std::uint64_t d = 0; d < V; ++d) {
      sum[d] += block_sum[b][d];
      sq[d] += block_sq[b][d];
    }
  }
  const double n = static_cast<double>(n_samples);
  t.kind = TwoPointTable::Kind::kLattice;
  t.tau.resize(V);
  t.std_error.resize(V);
  for (std::uint64_t d = 0; d < V; ++d) {
    const double mean = sum[d] / n;
    const double var = std::max(0.0, (sq[d] - n * mean * mean) / (n - 1.0));
    t.tau[d] = mean;
    t.std_error[d] = std::sqrt(var / n);
  }
  t.tau[0] = 1.0;
  t.std_error[0] = 0.0;
  return t;
}

TwoPointTable exact_two_point(const Graph& g, const ExactStats& s) {
  TwoPointTable t;
  t.p = s.p;
  t.V = s.V;
  if (g.family() == Family::kComplete) {
    t.kind = TwoPointTable::Kind::kComplete;
    t.tau = {1.0, s.tau_at(0, 1)};
    t.std_error = {0.0, 0.0};
    return t;
  }
  t.kind = TwoPointTable::Kind::kLattice;
  t.tau.assign(s.tau.begin(), s.tau.begin() + s.V);
  t.std_error.assign(s.V, 0.0);
  return t;
}

TwoPointTable complete_exact_two_point(std::uint32_t n, double p) {
  const auto tp = complete_two_point(n, p);
  TwoPointTable t;
  t.kind = TwoPointTable::Kind::kComplete;
  t.p = p;
  t.V = n;
  t.tau = {1.0, tp.off};
  t.std_error = {0.0, 0.0};
  return t;
}

std::vector<double> triangle_row(const TwoPointTable& t, const Graph& g, ConvolutionMethod method) {
  if (t.kind != TwoPointTable::Kind::kLattice || !g.has_translations()) {
    throw UnsupportedFamily("triangle_row needs a lattice two-point table");
  }
  if (t.V != g.V()) throw InvalidParameter("two-point table does not match graph");
  if (method == ConvolutionMethod::kAuto) {
    method = g.V() > kDirectLimit ? ConvolutionMethod::kFft : ConvolutionMethod::kDirect;
  }
  if (method == ConvolutionMethod::kFft) return cube_fft(g, t.tau);
  const auto two = convolve_direct(g, t.tau, t.tau);
  return convolve_direct(g, two, t.tau);
}

TriangleReport triangle_from_two_point(const TwoPointTable& t, const Graph& g) {
  TriangleReport r;
  r.p = t.p;
  r.V = g.V();
  r.Omega = g.degree();
  r.chi = t.total();
  if (t.kind == TwoPointTable::Kind::kComplete) {
    const double n = static_cast<double>(g.V());
    const double tau = t.tau[1];
    r.nabla_diag = 1.0 + 3.0 * (n - 1.0) * tau * tau + (n - 1.0) * (n - 2.0) * tau * tau * tau;
    r.nabla_off_max = 3.0 * tau + 3.0 * (n - 2.0) * tau * tau + (1.0 + (n - 1.0) * (n - 2.0)) * tau * tau * tau;
    r.nabla_bar = r.nabla_off_max;
    return finish_report(r);
  }
  const auto row = triangle_row(t, g);
  r.nabla_diag = row[0];
  r.nabla_off_max = r.V > 1 ? *std::max_element(row.begin() + 1, row.end()) : 0.0;
  for (Vertex d : g.generators()) r.nabla_bar = std::max(r.nabla_bar, row[d]);
  return finish_report(r);
}

std::vector<double> matrix_cube(std::span<const double> tau, std::uint64_t V) {
  auto mul = [V](std::span<const double> a, std::span<const double> b) {
    std::vector<double> c(V * V, 0.0);
    for (std::uint64_t i = 0; i < V; ++i)
      for (std::uint64_t k = 0; k < V; ++k) {
        const double aik = a[i * V + k];
        if (aik == 0.0) continue;
        for (std::uint64_t j = 0; j < V; ++j) c[i * V + j] += aik * b[k * V + j];
      }
    return c;
  };
  const auto two = mul(tau, tau);
  return mul(two, tau);
}

TriangleReport triangle_from_matrix(std::span<const double> tau, const Graph& g, double p) {
  const std::uint64_t V = g.V();
  if (tau.size() != V * V) throw InvalidParameter("two-point matrix has wrong size");
  const auto cube = matrix_cube(tau, V);
  TriangleReport r;
  r.p = p;
  r.V = V;
  r.Omega = g.degree();
  for (std::uint64_t y = 0; y < V; ++y) r.chi += tau[y];
  r.nabla_diag = 0.0;
  for (std::uint64_t x = 0; x < V; ++x) {
    r.nabla_diag = std::max(r.nabla_diag, cube[x * V + x]);
    for (std::uint64_t y = 0; y < V; ++y)
      if (x != y) r.nabla_off_max = std::max(r.nabla_off_max, cube[x * V + y]);
    for (Vertex y : g.neighbors(static_cast<Vertex>(x))) r.nabla_bar = std::max(r.nabla_bar, cube[x * V + y]);
  }
  return finish_report(r);
}

TriangleVerdict check_triangle_condition(const TriangleReport& r, double a0) {
  TriangleVerdict v;
  v.a0 = a0;
  v.diag_margin = 1.0 + a0 - r.nabla_diag;
  v.off_margin = a0 - r.nabla_off_max;
  v.holds = v.diag_margin >= 0.0 && v.off_margin >= 0.0;
  return v;
}

SharpenedFit check_sharpened_condition(std::span<const TriangleReport> reports, std::uint32_t Omega,
                                       std::uint64_t V) {
  if (reports.size() < 3) throw FitError("sharpened fit needs at least 3 reports");
  if (Omega == 0 || V == 0) throw InvalidParameter("Omega and V must be positive");
  // Normal equations for y = K1 x1 + K2 x2 with x1 = 1/Omega, x2 = chi^3/V.
  const double x1 = 1.0 / Omega;
  double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
  for (const auto& r : reports) {
    const double x2 = r.chi * r.chi * r.chi / static_cast<double>(V);
    s11 += x1 * x1;
    s12 += x1 * x2;
    s22 += x2 * x2;
    b1 += x1 * r.nabla_off_max;
    b2 += x2 * r.nabla_off_max;
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(std::abs(det) > 1e-12 * s11 * s22)) {
    throw FitError("sharpened fit is rank deficient: chi^3/V does not vary across reports");
  }
  SharpenedFit fit;
  fit.K1 = (b1 * s22 - b2 * s12) / det;
  fit.K2 = (s11 * b2 - s12 * b1) / det;
  for (const auto& r : reports) {
    const double x2 = r.chi * r.chi * r.chi / static_cast<double>(V);
    const double res = r.nabla_off_max - fit.K1 * x1 - fit.K2 * x2;
    fit.residuals.push_back(res);
    fit.max_residual = std::max(fit.max_residual, std::abs(res));
  }
  return fit;
}

std::string triangle_to_json(const TriangleReport& r) {
  nlohmann::ordered_json j;
  j["p"] = r.p;
  j["nabla_diag"] = r.nabla_diag;
  j["nabla_off_max"] = r.nabla_off_max;
  j["nabla_bar"] = r.nabla_bar;
  j["nabla_max"] = r.nabla_max;
  j["a0_witness"] = r.a0_witness;
  j["chi_cubed_over_V"] = r.chi_cubed_over_V;
  return j.dump(2);
}

}  // namespace percolab
