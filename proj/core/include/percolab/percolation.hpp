#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "percolab/graph.hpp"

namespace percolab {

// How occupied bonds are drawn for one replica.
//   kEdgeKeyed  one uniform per edge index, occupied iff U_e < p. Thresholding
//               the same uniforms at p1 <= p2 gives the monotone coupling.
//   kSkip       geometric skipping over edge indices; cost ~ p * E. Same law,
//               but not coupled across p.
//   kAuto       kSkip for sparse draws on large graphs, kEdgeKeyed otherwise.
enum class SamplingMode { kAuto, kEdgeKeyed, kSkip };

SamplingMode resolve_mode(SamplingMode mode, double p, std::uint64_t edge_count) noexcept;

// Occupied-bond bitset; bit e refers to Graph::edge_index e.
struct BondConfig {
  std::uint64_t edge_count = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  std::vector<std::uint64_t> words;

  bool test(std::uint64_t e) const noexcept { return (words[e >> 6] >> (e & 63)) & 1u; }
  void set(std::uint64_t e) noexcept { words[e >> 6] |= std::uint64_t{1} << (e & 63); }
  std::uint64_t count() const noexcept;
  bool operator==(const BondConfig&) const = default;
};

BondConfig sample_config(const Graph& g, double p, std::uint64_t seed, std::uint64_t replica = 0,
                         SamplingMode mode = SamplingMode::kEdgeKeyed);

// Union-find over [0, V) with union by size and path halving.
class ClusterForest {
 public:
  ClusterForest() = default;
  explicit ClusterForest(std::uint64_t V) { reset(V); }

  void reset(std::uint64_t V);

  Vertex find(Vertex v) noexcept {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  // Non-mutating lookup; O(1) after flatten().
  Vertex root(Vertex v) const noexcept {
    while (parent_[v] != v) v = parent_[v];
    return v;
  }
  bool unite(Vertex a, Vertex b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --clusters_;
    return true;
  }
  // Points every vertex directly at its root.
  void flatten() noexcept;

  std::uint64_t V() const noexcept { return parent_.size(); }
  std::uint64_t num_clusters() const noexcept { return clusters_; }
  bool is_root(Vertex v) const noexcept { return parent_[v] == v; }
  // Valid for roots only.
  std::uint32_t root_size(Vertex r) const noexcept { return size_[r]; }
  std::uint32_t cluster_size(Vertex v) const noexcept { return size_[root(v)]; }
  bool connected(Vertex a, Vertex b) const noexcept { return root(a) == root(b); }
  std::span<const Vertex> parent() const noexcept { return parent_; }

 private:
  std::vector<Vertex> parent_;
  std::vector<std::uint32_t> size_;
  std::uint64_t clusters_ = 0;
};

ClusterForest build_forest(const Graph& g, const BondConfig& c);

// Samples and unions in one pass without materializing the bitset; the
// resulting partition equals build_forest(g, sample_config(g, p, seed, replica, mode)).
void sample_forest(const Graph& g, double p, std::uint64_t seed, std::uint64_t replica, SamplingMode mode,
                   ClusterForest& out);

struct ConfigStats {
  std::uint64_t V = 0;
  std::uint64_t num_clusters = 0;
  std::uint64_t root_cluster_size = 0;
  std::uint64_t max_cluster_size = 0;
  std::uint64_t sum_sq_sizes = 0;
  // (cluster size, number of clusters of that size), ascending by size.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> size_histogram;
};

// Reusable buffers for config_stats; avoids an O(V) allocation per replica.
struct StatsScratch {
  std::vector<std::uint32_t> count;
  std::vector<std::uint32_t> touched;
};

ConfigStats config_stats(const ClusterForest& f, StatsScratch* scratch = nullptr);

// Number of vertices in clusters of size >= k.
std::uint64_t z_geq(const ConfigStats& s, std::uint64_t k);
// Same for an ascending list of k; out[i] = z_geq(s, ks[i]).
void z_geq_many(const ConfigStats& s, std::span<const std::uint64_t> ks, std::span<std::uint64_t> out);

struct GreenSet {
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  std::vector<bool> member;

  bool contains(Vertex v) const { return member[v]; }
  std::uint64_t count() const;
};

// Draws from the green substream, disjoint from the bond stream of the same
// (seed, replica).
GreenSet sample_green(std::uint64_t V, double gamma, std::uint64_t seed, std::uint64_t replica = 0);

// Z_G: vertices whose cluster holds at least one green vertex.
std::uint64_t z_green(const ClusterForest& f, const GreenSet& green);

// Clusters as contiguous member lists: members[offsets[i] .. offsets[i+1])
// is cluster i, clusters ordered by their smallest vertex, members ascending.
struct ClusterMembers {
  std::vector<std::uint64_t> offsets;
  std::vector<Vertex> members;
  std::size_t size() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const Vertex> cluster(std::size_t i) const noexcept {
    return {members.data() + offsets[i], members.data() + offsets[i + 1]};
  }
};
ClusterMembers cluster_members(const ClusterForest& f);

// Text dump: "# family params p seed [replica]" then one occupied edge index per line.
void write_config(std::ostream& os, const Graph& g, const BondConfig& c);
BondConfig read_config(std::istream& is, const Graph& g);

}  // namespace percolab
