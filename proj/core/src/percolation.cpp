#include "percolab/percolation.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "percolab/errors.hpp"
#include "percolab/rng.hpp"

namespace percolab {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter(std::string(what) + " must lie in [0, 1]");
}

// Visits occupied edge indices in ascending order by geometric skipping.
template <class Fn>
void skip_occupied(std::uint64_t edge_count, double p, std::uint64_t seed, std::uint64_t replica, Fn&& fn) {
  if (p <= 0.0) return;
  if (p >= 1.0) {
    for (std::uint64_t e = 0; e < edge_count; ++e) fn(e);
    return;
  }
  SequentialRng rng(seed, replica, Stream::kSkip);
  const double inv_log_q = 1.0 / std::log1p(-p);
  const double limit = static_cast<double>(edge_count);
  double pos = -1.0;
  for (;;) {
    const double u = 1.0 - rng.next();  // (0, 1]
    pos += 1.0 + std::floor(std::log(u) * inv_log_q);
    if (pos >= limit) return;
    fn(static_cast<std::uint64_t>(pos));
  }
}

}  // namespace

SamplingMode resolve_mode(SamplingMode mode, double p, std::uint64_t edge_count) noexcept {
  if (mode != SamplingMode::kAuto) return mode;
  return (p * 4.0 <= 1.0 && edge_count >= 4096) ? SamplingMode::kSkip : SamplingMode::kEdgeKeyed;
}

std::uint64_t BondConfig::count() const noexcept {
  std::uint64_t n = 0;
  for (auto w : words) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

BondConfig sample_config(const Graph& g, double p, std::uint64_t seed, std::uint64_t replica, SamplingMode mode) {
  check_probability(p, "p");
  BondConfig c;
  c.edge_count = g.edge_count();
  c.p = p;
  c.seed = seed;
  c.replica = replica;
  c.words.assign((c.edge_count + 63) / 64, 0);
  if (resolve_mode(mode, p, c.edge_count) == SamplingMode::kSkip) {
    skip_occupied(c.edge_count, p, seed, replica, [&](std::uint64_t e) { c.set(e); });
  } else {
    CounterRng rng(seed, replica, Stream::kBonds);
    for (std::uint64_t e = 0; e < c.edge_count; ++e)
      if (rng.uniform(e) < p) c.set(e);
  }
  return c;
}

void ClusterForest::reset(std::uint64_t V) {
  if (V > std::uint64_t{0xFFFFFFFF}) throw CapacityError("forest supports at most 2^32-1 vertices");
  parent_.resize(V);
  std::iota(parent_.begin(), parent_.end(), Vertex{0});
  size_.assign(V, 1);
  clusters_ = V;
}

void ClusterForest::flatten() noexcept {
  for (Vertex v = 0; v < parent_.size(); ++v) parent_[v] = find(v);
}

ClusterForest build_forest(const Graph& g, const BondConfig& c) {
  if (c.edge_count != g.edge_count()) throw InvalidParameter("bond configuration does not match graph");
  ClusterForest f(g.V());
  g.for_each_edge([&](std::uint64_t e, Vertex u, Vertex v) {
    if (c.test(e)) f.unite(u, v);
  });
  return f;
}

void sample_forest(const Graph& g, double p, std::uint64_t seed, std::uint64_t replica, SamplingMode mode,
                   ClusterForest& out) {
  check_probability(p, "p");
  out.reset(g.V());
  if (p <= 0.0) return;
  if (resolve_mode(mode, p, g.edge_count()) == SamplingMode::kSkip) {
    skip_occupied(g.edge_count(), p, seed, replica, [&](std::uint64_t e) {
      const auto [u, v] = g.edge_endpoints(e);
      out.unite(u, v);
    });
    return;
  }
  CounterRng rng(seed, replica, Stream::kBonds);
  g.for_each_edge([&](std::uint64_t e, Vertex u, Vertex v) {
    if (rng.uniform(e) < p) out.unite(u, v);
  });
}

ConfigStats config_stats(const ClusterForest& f, StatsScratch* scratch) {
  StatsScratch local;
  StatsScratch& s = scratch ? *scratch : local;
  const std::uint64_t V = f.V();
  if (s.count.size() < V + 1) s.count.assign(V + 1, 0);
  s.touched.clear();

  ConfigStats out;
  out.V = V;
  out.num_clusters = f.num_clusters();
  for (Vertex v = 0; v < V; ++v) {
    if (!f.is_root(v)) continue;
    const std::uint32_t size = f.root_size(v);
    if (s.count[size]++ == 0) s.touched.push_back(size);
    out.sum_sq_sizes += static_cast<std::uint64_t>(size) * size;
  }
  std::sort(s.touched.begin(), s.touched.end());
  out.size_histogram.reserve(s.touched.size());
  for (std::uint32_t size : s.touched) {
    out.size_histogram.emplace_back(size, s.count[size]);
    s.count[size] = 0;
  }
  out.max_cluster_size = out.size_histogram.empty() ? 0 : out.size_histogram.back().first;
  out.root_cluster_size = V ? f.cluster_size(0) : 0;
  return out;
}

std::uint64_t z_geq(const ConfigStats& s, std::uint64_t k) {
  if (k < 1) throw InvalidParameter("z_geq requires k >= 1");
  std::uint64_t z = 0;
  for (auto it = s.size_histogram.rbegin(); it != s.size_histogram.rend() && it->first >= k; ++it)
    z += it->first * it->second;
  return z;
}

void z_geq_many(const ConfigStats& s, std::span<const std::uint64_t> ks, std::span<std::uint64_t> out) {
  // Walk both lists from the top: suffix sums of size*count.
  auto it = s.size_histogram.rbegin();
  std::uint64_t z = 0;
  for (std::size_t i = ks.size(); i-- > 0;) {
    if (ks[i] < 1) throw InvalidParameter("z_geq requires k >= 1");
    if (i + 1 < ks.size() && ks[i] > ks[i + 1]) throw InvalidParameter("k list must be ascending");
    while (it != s.size_histogram.rend() && it->first >= ks[i]) {
      z += it->first * it->second;
      ++it;
    }
    out[i] = z;
  }
}

std::uint64_t GreenSet::count() const { return static_cast<std::uint64_t>(std::count(member.begin(), member.end(), true)); }

GreenSet sample_green(std::uint64_t V, double gamma, std::uint64_t seed, std::uint64_t replica) {
  check_probability(gamma, "gamma");
  GreenSet g;
  g.gamma = gamma;
  g.seed = seed;
  g.replica = replica;
  g.member.assign(V, false);
  CounterRng rng(seed, replica, Stream::kGreen);
  for (std::uint64_t v = 0; v < V; ++v) g.member[v] = rng.uniform(v) < gamma;
  return g;
}

std::uint64_t z_green(const ClusterForest& f, const GreenSet& green) {
  if (green.member.size() != f.V()) throw InvalidParameter("green set size does not match forest");
  std::vector<bool> lit(f.V(), false);
  for (Vertex v = 0; v < f.V(); ++v)
    if (green.member[v]) lit[f.root(v)] = true;
  std::uint64_t z = 0;
  for (Vertex v = 0; v < f.V(); ++v)
    if (f.is_root(v) && lit[v]) z += f.root_size(v);
  return z;
}

ClusterMembers cluster_members(const ClusterForest& f) {
  const std::uint64_t V = f.V();
  ClusterMembers out;
  // Number clusters by first appearance, i.e. by smallest member.
  std::vector<std::uint32_t> label(V, 0xFFFFFFFFu);
  std::vector<std::uint32_t> root_label(V, 0xFFFFFFFFu);
  std::uint32_t next = 0;
  for (Vertex v = 0; v < V; ++v) {
    const Vertex r = f.root(v);
    if (root_label[r] == 0xFFFFFFFFu) root_label[r] = next++;
    label[v] = root_label[r];
  }
  out.offsets.assign(next + 1, 0);
  for (Vertex v = 0; v < V; ++v) ++out.offsets[label[v] + 1];
  std::partial_sum(out.offsets.begin(), out.offsets.end(), out.offsets.begin());
  out.members.resize(V);
  std::vector<std::uint64_t> cursor(out.offsets.begin(), out.offsets.end() - 1);
  for (Vertex v = 0; v < V; ++v) out.members[cursor[label[v]]++] = v;
  return out;
}

void write_config(std::ostream& os, const Graph& g, const BondConfig& c) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, c.p);
  os << "# " << family_name(g.family()) << ' ' << g.params() << ' ' << std::string_view(buf, res.ptr - buf) << ' '
     << c.seed;
  if (c.replica != 0) os << ' ' << c.replica;
  os << '\n';
  for (std::uint64_t e = 0; e < c.edge_count; ++e)
    if (c.test(e)) os << e << '\n';
}

BondConfig read_config(std::istream& is, const Graph& g) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw InvalidParameter("config dump: missing header");
  std::istringstream header(line.substr(2));
  std::string family, params, p_text;
  BondConfig c;
  header >> family >> params >> p_text >> c.seed;
  if (!header) throw InvalidParameter("config dump: malformed header '" + line + "'");
  if (!(header >> c.replica)) c.replica = 0;
  if (family != family_name(g.family()) || params != g.params()) {
    throw InvalidParameter("config dump is for " + family + ":" + params + ", not " + g.spec());
  }
  const auto pr = std::from_chars(p_text.data(), p_text.data() + p_text.size(), c.p);
  if (pr.ec != std::errc{}) throw InvalidParameter("config dump: bad p '" + p_text + "'");
  c.edge_count = g.edge_count();
  c.words.assign((c.edge_count + 63) / 64, 0);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::uint64_t e = 0;
    const auto r = std::from_chars(line.data(), line.data() + line.size(), e);
    if (r.ec != std::errc{} || e >= c.edge_count) throw InvalidParameter("config dump: bad edge index '" + line + "'");
    c.set(e);
  }
  return c;
}

}  // namespace percolab
