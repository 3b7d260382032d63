#include "percolab/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string_view>
#include <unordered_map>

#include <json.hpp>

#include "percolab/csv.hpp"
#include "percolab/errors.hpp"
#include "percolab/parallel.hpp"
#include "percolab/percolation.hpp"

namespace percolab {

namespace {

constexpr std::uint64_t kMaskBlock = std::uint64_t{1} << 20;

struct LocalParts {
  std::vector<std::string> keys;  // labels packed into a string, insertion order
  std::vector<std::vector<std::uint64_t>> counts;
};

}  // namespace

ExactEnumerator::ExactEnumerator(const Graph& g, unsigned workers) : graph_(g) {
  const std::uint64_t E = g.edge_count();
  if (E > kMaxExactEdges) {
    throw CapacityError(g.spec() + " has " + std::to_string(E) + " edges; exact enumeration supports at most " +
                        std::to_string(kMaxExactEdges));
  }
  const std::uint64_t V = g.V();
  std::vector<std::pair<Vertex, Vertex>> edges;
  g.for_each_edge([&](std::uint64_t, Vertex u, Vertex v) { edges.emplace_back(u, v); });

  const std::uint64_t configs = std::uint64_t{1} << E;
  const std::uint64_t blocks = (configs + kMaskBlock - 1) / kMaskBlock;
  std::vector<LocalParts> local(blocks);
  parallel_blocks(configs, kMaskBlock, resolve_workers(workers),
                  [&](unsigned, std::uint64_t b, std::uint64_t begin, std::uint64_t end) {
                    LocalParts& out = local[b];
                    std::unordered_map<std::string, std::size_t> index;
                    ClusterForest f;
                    std::string key(V, '\0');
                    std::vector<std::uint8_t> root_label(V);
                    for (std::uint64_t mask = begin; mask < end; ++mask) {
                      f.reset(V);
                      for (std::uint64_t e = 0; e < E; ++e)
                        if ((mask >> e) & 1u) f.unite(edges[e].first, edges[e].second);
                      std::fill(root_label.begin(), root_label.end(), 0xFF);
                      std::uint8_t next = 0;
                      for (Vertex v = 0; v < V; ++v) {
                        const Vertex r = f.find(v);
                        if (root_label[r] == 0xFF) root_label[r] = next++;
                        key[v] = static_cast<char>(root_label[r]);
                      }
                      auto [it, fresh] = index.try_emplace(key, out.keys.size());
                      if (fresh) {
                        out.keys.push_back(key);
                        out.counts.emplace_back(E + 1, 0);
                      }
                      ++out.counts[it->second][static_cast<std::size_t>(std::popcount(mask))];
                    }
                  });

  std::unordered_map<std::string, std::size_t> index;
  for (auto& block : local) {
    for (std::size_t i = 0; i < block.keys.size(); ++i) {
      auto [it, fresh] = index.try_emplace(block.keys[i], parts_.size());
      if (fresh) {
        Part part;
        part.label.assign(block.keys[i].begin(), block.keys[i].end());
        const auto clusters = *std::max_element(part.label.begin(), part.label.end()) + 1u;
        part.sizes.assign(clusters, 0);
        for (auto l : part.label) ++part.sizes[l];
        part.by_occupied.assign(E + 1, 0);
        parts_.push_back(std::move(part));
      }
      auto& dst = parts_[it->second].by_occupied;
      for (std::uint64_t k = 0; k <= E; ++k) dst[k] += block.counts[i][k];
    }
    block = {};
  }
}

std::vector<double> ExactEnumerator::weights(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("p must lie in [0, 1]");
  const std::uint64_t E = graph_.edge_count();
  std::vector<double> pk(E + 1);
  for (std::uint64_t k = 0; k <= E; ++k)
    pk[k] = std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(E - k));
  std::vector<double> w(parts_.size(), 0.0);
  for (std::size_t i = 0; i < parts_.size(); ++i)
    for (std::uint64_t k = 0; k <= E; ++k)
      if (parts_[i].by_occupied[k]) w[i] += static_cast<double>(parts_[i].by_occupied[k]) * pk[k];
  return w;
}

double ExactEnumerator::chi(double p) const {
  const auto w = weights(p);
  double chi = 0.0;
  for (std::size_t i = 0; i < parts_.size(); ++i) chi += w[i] * parts_[i].sizes[parts_[i].label[0]];
  return chi;
}

ExactStats ExactEnumerator::stats(double p) const {
  const auto w = weights(p);
  const std::uint64_t V = graph_.V();
  ExactStats s;
  s.graph = graph_.spec();
  s.p = p;
  s.V = V;
  s.cluster_law.assign(V + 2, 0.0);
  s.P_geq.assign(V + 2, 0.0);
  s.cmax_law.assign(V + 2, 0.0);
  s.tau.assign(V * V, 0.0);
  s.E_Z_geq.assign(V + 2, 0.0);
  s.Var_Z_geq.assign(V + 2, 0.0);
  s.chi_geq.assign(V + 2, 0.0);
  s.chi_less.assign(V + 2, 0.0);

  auto z_table = [&](const Part& part) {
    std::vector<double> z(V + 2, 0.0);
    for (auto size : part.sizes) z[size] += size;
    for (std::uint64_t k = V; k >= 1; --k) z[k] += z[k + 1];
    return z;
  };

  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const Part& part = parts_[i];
    const double wi = w[i];
    if (wi == 0.0) continue;
    s.cluster_law[part.sizes[part.label[0]]] += wi;
    s.cmax_law[*std::max_element(part.sizes.begin(), part.sizes.end())] += wi;
    for (std::uint64_t x = 0; x < V; ++x)
      for (std::uint64_t y = 0; y < V; ++y)
        if (part.label[x] == part.label[y]) s.tau[x * V + y] += wi;
    const auto z = z_table(part);
    for (std::uint64_t k = 1; k <= V + 1; ++k) s.E_Z_geq[k] += wi * z[k];
  }
  // Second pass for the variance avoids E[Z^2] - E[Z]^2 cancellation.
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (w[i] == 0.0) continue;
    const auto z = z_table(parts_[i]);
    for (std::uint64_t k = 1; k <= V + 1; ++k) {
      const double d = z[k] - s.E_Z_geq[k];
      s.Var_Z_geq[k] += w[i] * d * d;
    }
  }
  for (std::uint64_t k = V; k >= 1; --k) s.P_geq[k] = s.P_geq[k + 1] + s.cluster_law[k];
  for (std::uint64_t k = 1; k <= V; ++k) {
    s.chi += static_cast<double>(k) * s.cluster_law[k];
    s.E_cmax += static_cast<double>(k) * s.cmax_law[k];
  }
  for (std::uint64_t sv = 1; sv <= V + 1; ++sv) {
    for (std::uint64_t k = 1; k <= V; ++k) {
      const double term = static_cast<double>(k) * s.cluster_law[k];
      (k >= sv ? s.chi_geq[sv] : s.chi_less[sv]) += term;
    }
  }
  return s;
}

ExactMagnetization ExactEnumerator::magnetization(double p, double gamma) const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidParameter("gamma must lie in [0, 1]");
  const auto w = weights(p);
  const double lg = std::log1p(-gamma);
  ExactMagnetization m;
  m.gamma = gamma;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (w[i] == 0.0) continue;
    const Part& part = parts_[i];
    const double k0 = part.sizes[part.label[0]];
    const double t0 = std::exp(k0 * lg);
    m.M += w[i] * -std::expm1(k0 * lg);
    m.chi_gamma += w[i] * k0 * t0;
    m.chi_perp += w[i] * k0 * -std::expm1(k0 * lg);
    m.E_C0sq_not_green += w[i] * k0 * k0 * t0;
    double lin = 0.0, quad = 0.0;
    for (auto size : part.sizes) {
      const double k = size;
      const double t = std::exp(k * lg), g = -std::expm1(k * lg);
      lin += k * g;
      quad += k * k * g * t;
    }
    m.E_Zg2 += w[i] * (lin * lin + quad);
  }
  return m;
}

std::pair<ExactStats, std::vector<ExactMagnetization>> enumerate_exact(const Graph& g, double p,
                                                                      std::span<const double> gammas) {
  ExactEnumerator e(g);
  std::vector<ExactMagnetization> mags;
  for (double gamma : gammas) mags.push_back(e.magnetization(p, gamma));
  return {e.stats(p), std::move(mags)};
}

CompleteTwoPoint complete_two_point(std::uint32_t n, double p) {
  if (n < 2) throw InvalidParameter("complete graph needs n >= 2");
  return {1.0, (complete_chi(n, p) - 1.0) / static_cast<double>(n - 1)};
}

Derivative finite_difference(const std::function<double(double)>& f, double p, double h) {
  if (!(h > 0.0) || !(h < std::min(p, 1.0 - p) / 2.0)) {
    throw InvalidParameter("finite difference needs 0 < h < min(p, 1-p)/2 (p = " + format_double(p) +
                           ", h = " + format_double(h) + ")");
  }
  const double f1p = f(p + h), f1m = f(p - h), f2p = f(p + 2 * h), f2m = f(p - 2 * h);
  const double d1 = (f1p - f1m) / (2 * h);
  const double d2 = (f2p - f2m) / (4 * h);
  const double scale = std::max({std::abs(f1p), std::abs(f1m), std::abs(f2p), std::abs(f2m)});
  const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * scale / h;
  return {(4.0 * d1 - d2) / 3.0, std::abs(d1 - d2) / 3.0 + rounding};
}

double exact_pc(const ExactEnumerator& e, double lambda) {
  const double V = static_cast<double>(e.graph().V());
  const double target = lambda * std::cbrt(V);
  if (!(target > 1.0 && target < V)) {
    throw InvalidParameter("target chi = lambda V^{1/3} = " + format_double(target) + " must lie in (1, V)");
  }
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (e.chi(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string exact_to_json(const ExactStats& s, std::span<const ExactMagnetization> mags) {
  nlohmann::ordered_json j;
  j["graph"] = s.graph;
  j["p"] = s.p;
  j["chi"] = s.chi;
  j["E_cmax"] = s.E_cmax;
  j["cluster_law"] = std::vector<double>(s.cluster_law.begin() + 1, s.cluster_law.begin() + 1 + s.V);
  j["tau"] = std::vector<double>(s.tau.begin(), s.tau.begin() + s.V);
  j["var_z"] = std::vector<double>(s.Var_Z_geq.begin() + 1, s.Var_Z_geq.begin() + 1 + s.V);
  nlohmann::ordered_json mj = nlohmann::ordered_json::object();
  for (const auto& m : mags) {
    mj[format_double(m.gamma)] = {{"M", m.M},
                                  {"chi_gamma", m.chi_gamma},
                                  {"chi_perp", m.chi_perp},
                                  {"E_Zg2", m.E_Zg2},
                                  {"E_C0sq_not_green", m.E_C0sq_not_green}};
  }
  j["magnetization"] = std::move(mj);
  return j.dump(2);
}

}  // namespace percolab
