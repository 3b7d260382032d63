#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace percolab {

using Vertex = std::uint32_t;

inline constexpr std::uint64_t kDefaultVertexCap = std::uint64_t{1} << 26;

enum class Family { kComplete, kHypercube, kHamming, kTorusNN, kTorusSpread };

std::string_view family_name(Family f) noexcept;

// A finite connected transitive graph from one of the supported families.
//
// Lattice families live on {0,...,r-1}^n with mixed-radix little-endian vertex
// indices (coordinate 0 is the least significant digit), so a vertex index is
// also a translation-group element: neighbors are v + d for d in generators().
// The complete graph stores nothing beyond n. Graph values are immutable.
//
// Edge indices are a bijection onto [0, edge_count()):
//   complete            lexicographic over pairs {i < j}
//   hypercube/hamming   ((axis * r^(n-1) + rest) * C(r,2) + pair(a < b))
//   torus/spread        v * |D+| + j, edge {v, v + D+[j]} with D+ a half of
//                       the displacement set (first nonzero coordinate > 0)
class Graph {
 public:
  static Graph complete(std::uint32_t n, std::uint64_t vertex_cap = kDefaultVertexCap);
  static Graph hypercube(std::uint32_t n, std::uint64_t vertex_cap = kDefaultVertexCap);
  static Graph hamming(std::uint32_t r, std::uint32_t n, std::uint64_t vertex_cap = kDefaultVertexCap);
  static Graph torus_nn(std::uint32_t r, std::uint32_t n, std::uint64_t vertex_cap = kDefaultVertexCap);
  static Graph torus_spread(std::uint32_t r, std::uint32_t n, std::uint32_t L,
                            std::uint64_t vertex_cap = kDefaultVertexCap);

  Family family() const noexcept { return family_; }
  std::uint64_t V() const noexcept { return vertices_; }
  std::uint32_t degree() const noexcept { return degree_; }
  std::uint64_t edge_count() const noexcept { return edges_; }

  // Family parameters; radix() is n for the complete graph.
  std::uint32_t radix() const noexcept { return r_; }
  std::uint32_t dimension() const noexcept { return n_; }
  std::uint32_t range() const noexcept { return L_; }

  bool has_translations() const noexcept { return family_ != Family::kComplete; }

  // "hamming:r=3,n=5"
  std::string spec() const;
  // "r=3,n=5"
  std::string params() const;

  // Ascending, exactly degree() entries.
  std::vector<Vertex> neighbors(Vertex v) const;

  std::uint64_t edge_index(Vertex u, Vertex v) const;
  std::pair<Vertex, Vertex> edge_endpoints(std::uint64_t e) const;

  // Calls fn(edge, u, v) for every edge in ascending index order.
  template <class Fn>
  void for_each_edge(Fn&& fn) const;

  // Translation-group operations; lattice families only.
  std::vector<std::uint32_t> coords(Vertex v) const;
  Vertex from_coords(std::span<const std::uint32_t> c) const;
  Vertex add(Vertex a, Vertex b) const noexcept;
  Vertex sub(Vertex a, Vertex b) const noexcept;
  Vertex negate(Vertex a) const noexcept { return sub(0, a); }
  std::span<const Vertex> generators() const noexcept { return generators_; }

 private:
  Graph() = default;
  void check_vertex(Vertex v) const;
  void init_lattice();
  std::uint64_t pow_r(std::uint32_t e) const noexcept { return powers_[e]; }
  Vertex insert_digit(std::uint64_t rest, std::uint32_t axis, std::uint32_t digit) const noexcept;

  Family family_ = Family::kComplete;
  std::uint32_t r_ = 0;
  std::uint32_t n_ = 0;
  std::uint32_t L_ = 0;
  std::uint64_t vertices_ = 0;
  std::uint32_t degree_ = 0;
  std::uint64_t edges_ = 0;
  std::vector<std::uint64_t> powers_;   // r^0 .. r^n
  std::vector<Vertex> generators_;      // all neighbor displacements, ascending
  std::vector<Vertex> forward_;         // D+ for torus/spread, ascending
  std::uint32_t pairs_per_axis_ = 0;    // C(r,2)
};

// Parses "complete:n=4", "hypercube:n=14", "hamming:r=3,n=5", "torus:r=8,n=3",
// "spread:r=9,n=3,L=1".
Graph parse_graph_spec(std::string_view spec, std::uint64_t vertex_cap = kDefaultVertexCap);

template <class Fn>
void Graph::for_each_edge(Fn&& fn) const {
  std::uint64_t e = 0;
  switch (family_) {
    case Family::kComplete:
      for (Vertex i = 0; i < n_; ++i)
        for (Vertex j = i + 1; j < n_; ++j) fn(e++, i, j);
      return;
    case Family::kHypercube:
    case Family::kHamming: {
      const std::uint64_t rest_count = powers_[n_ - 1];
      for (std::uint32_t axis = 0; axis < n_; ++axis)
        for (std::uint64_t rest = 0; rest < rest_count; ++rest)
          for (std::uint32_t a = 0; a < r_; ++a)
            for (std::uint32_t b = a + 1; b < r_; ++b)
              fn(e++, insert_digit(rest, axis, a), insert_digit(rest, axis, b));
      return;
    }
    case Family::kTorusNN:
    case Family::kTorusSpread:
      for (Vertex v = 0; v < vertices_; ++v)
        for (Vertex d : forward_) fn(e++, v, add(v, d));
      return;
  }
}

}  // namespace percolab
