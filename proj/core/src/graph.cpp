#include "percolab/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "percolab/errors.hpp"

namespace percolab {

namespace {

std::uint64_t checked_power(std::uint64_t base, std::uint32_t exp, std::uint64_t cap) {
  std::uint64_t value = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (value > cap / base) {
      throw CapacityError("graph would have more than " + std::to_string(cap) + " vertices");
    }
    value *= base;
  }
  if (value > cap) {
    throw CapacityError("graph would have more than " + std::to_string(cap) + " vertices");
  }
  return value;
}

std::uint64_t pair_index(std::uint32_t a, std::uint32_t b, std::uint32_t r) noexcept {
  // Lexicographic rank of {a < b} among pairs drawn from [0, r).
  return static_cast<std::uint64_t>(a) * (2 * r - a - 1) / 2 + (b - a - 1);
}

std::uint64_t complete_row_offset(std::uint64_t i, std::uint64_t n) noexcept {
  return i * (2 * n - i - 1) / 2;
}

}  // namespace

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::kComplete:
      return "complete";
    case Family::kHypercube:
      return "hypercube";
    case Family::kHamming:
      return "hamming";
    case Family::kTorusNN:
      return "torus";
    case Family::kTorusSpread:
      return "spread";
  }
  return "unknown";
}

Graph Graph::complete(std::uint32_t n, std::uint64_t vertex_cap) {
  if (n < 2) throw InvalidParameter("complete graph needs n >= 2");
  if (n > vertex_cap) throw CapacityError("complete graph exceeds vertex cap");
  Graph g;
  g.family_ = Family::kComplete;
  g.r_ = n;
  g.n_ = n;
  g.vertices_ = n;
  g.degree_ = n - 1;
  g.edges_ = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  return g;
}

Graph Graph::hypercube(std::uint32_t n, std::uint64_t vertex_cap) {
  if (n < 1) throw InvalidParameter("hypercube needs n >= 1");
  Graph g;
  g.family_ = Family::kHypercube;
  g.r_ = 2;
  g.n_ = n;
  g.vertices_ = checked_power(2, n, vertex_cap);
  g.init_lattice();
  return g;
}

Graph Graph::hamming(std::uint32_t r, std::uint32_t n, std::uint64_t vertex_cap) {
  if (r < 2) throw InvalidParameter("hamming torus needs r >= 2");
  if (n < 1) throw InvalidParameter("hamming torus needs n >= 1");
  Graph g;
  g.family_ = Family::kHamming;
  g.r_ = r;
  g.n_ = n;
  g.vertices_ = checked_power(r, n, vertex_cap);
  g.init_lattice();
  return g;
}

Graph Graph::torus_nn(std::uint32_t r, std::uint32_t n, std::uint64_t vertex_cap) {
  if (r < 3) {
    throw InvalidParameter(
        "nearest-neighbour torus needs r >= 3 (r = 2 would create multi-edges); "
        "use hypercube:n=... for the n-cube");
  }
  if (n < 1) throw InvalidParameter("torus needs n >= 1");
  Graph g;
  g.family_ = Family::kTorusNN;
  g.r_ = r;
  g.n_ = n;
  g.L_ = 1;
  g.vertices_ = checked_power(r, n, vertex_cap);
  g.init_lattice();
  return g;
}

Graph Graph::torus_spread(std::uint32_t r, std::uint32_t n, std::uint32_t L, std::uint64_t vertex_cap) {
  if (L < 1) throw InvalidParameter("spread-out torus needs L >= 1");
  if (n < 1) throw InvalidParameter("spread-out torus needs n >= 1");
  if (2ull * L + 1 > r) throw InvalidParameter("spread-out torus needs 2L+1 <= r");
  Graph g;
  g.family_ = Family::kTorusSpread;
  g.r_ = r;
  g.n_ = n;
  g.L_ = L;
  g.vertices_ = checked_power(r, n, vertex_cap);
  g.init_lattice();
  return g;
}

void Graph::init_lattice() {
  powers_.resize(n_ + 1);
  powers_[0] = 1;
  for (std::uint32_t i = 1; i <= n_; ++i) powers_[i] = powers_[i - 1] * r_;

  std::vector<std::uint32_t> digits(n_);
  auto encode = [&](const std::vector<std::int64_t>& offset) {
    for (std::uint32_t i = 0; i < n_; ++i) {
      const std::int64_t m = static_cast<std::int64_t>(r_);
      digits[i] = static_cast<std::uint32_t>(((offset[i] % m) + m) % m);
    }
    return from_coords(digits);
  };

  generators_.clear();
  forward_.clear();
  switch (family_) {
    case Family::kHypercube:
    case Family::kHamming:
      for (std::uint32_t axis = 0; axis < n_; ++axis)
        for (std::uint32_t a = 1; a < r_; ++a) generators_.push_back(static_cast<Vertex>(a * powers_[axis]));
      pairs_per_axis_ = r_ * (r_ - 1) / 2;
      edges_ = static_cast<std::uint64_t>(n_) * powers_[n_ - 1] * pairs_per_axis_;
      break;
    case Family::kTorusNN:
    case Family::kTorusSpread: {
      // Enumerate offsets in [-L, L]^n \ {0}; forward = first nonzero coordinate positive.
      const std::int64_t L = family_ == Family::kTorusNN ? 1 : L_;
      std::vector<std::int64_t> offset(n_, -L);
      for (;;) {
        bool zero = true;
        std::int64_t first_nonzero = 0;
        std::uint32_t nonzero_count = 0;
        for (std::uint32_t i = 0; i < n_; ++i) {
          if (offset[i] != 0) {
            if (zero) first_nonzero = offset[i];
            zero = false;
            ++nonzero_count;
          }
        }
        const bool allowed = family_ == Family::kTorusSpread || nonzero_count == 1;
        if (!zero && allowed) {
          const Vertex d = encode(offset);
          generators_.push_back(d);
          if (first_nonzero > 0) forward_.push_back(d);
        }
        std::uint32_t i = 0;
        while (i < n_ && offset[i] == L) offset[i++] = -L;
        if (i == n_) break;
        ++offset[i];
      }
      std::sort(forward_.begin(), forward_.end());
      edges_ = vertices_ * forward_.size();
      break;
    }
    case Family::kComplete:
      break;
  }
  std::sort(generators_.begin(), generators_.end());
  degree_ = static_cast<std::uint32_t>(generators_.size());
}

std::string Graph::params() const {
  switch (family_) {
    case Family::kComplete:
    case Family::kHypercube:
      return "n=" + std::to_string(n_);
    case Family::kHamming:
    case Family::kTorusNN:
      return "r=" + std::to_string(r_) + ",n=" + std::to_string(n_);
    case Family::kTorusSpread:
      return "r=" + std::to_string(r_) + ",n=" + std::to_string(n_) + ",L=" + std::to_string(L_);
  }
  return {};
}

std::string Graph::spec() const { return std::string(family_name(family_)) + ":" + params(); }

void Graph::check_vertex(Vertex v) const {
  if (v >= vertices_) {
    throw InvalidParameter("vertex " + std::to_string(v) + " out of range [0, " + std::to_string(vertices_) + ")");
  }
}

std::vector<Vertex> Graph::neighbors(Vertex v) const {
  check_vertex(v);
  std::vector<Vertex> out;
  out.reserve(degree_);
  if (family_ == Family::kComplete) {
    for (Vertex u = 0; u < n_; ++u)
      if (u != v) out.push_back(u);
    return out;
  }
  for (Vertex d : generators_) out.push_back(add(v, d));
  std::sort(out.begin(), out.end());
  return out;
}

Vertex Graph::insert_digit(std::uint64_t rest, std::uint32_t axis, std::uint32_t digit) const noexcept {
  const std::uint64_t low = rest % powers_[axis];
  const std::uint64_t high = rest / powers_[axis];
  return static_cast<Vertex>(high * powers_[axis + 1] + static_cast<std::uint64_t>(digit) * powers_[axis] + low);
}

std::uint64_t Graph::edge_index(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  auto not_edge = [&]() {
    return InvalidParameter("{" + std::to_string(u) + "," + std::to_string(v) + "} is not an edge of " + spec());
  };
  if (u == v) throw not_edge();
  switch (family_) {
    case Family::kComplete: {
      const std::uint64_t i = std::min(u, v), j = std::max(u, v);
      return complete_row_offset(i, n_) + (j - i - 1);
    }
    case Family::kHypercube:
    case Family::kHamming: {
      const auto cu = coords(u);
      const auto cv = coords(v);
      std::uint32_t axis = n_;
      for (std::uint32_t i = 0; i < n_; ++i) {
        if (cu[i] != cv[i]) {
          if (axis != n_) throw not_edge();
          axis = i;
        }
      }
      const std::uint64_t rest = (u % powers_[axis]) + (u / powers_[axis + 1]) * powers_[axis];
      const std::uint32_t a = std::min(cu[axis], cv[axis]);
      const std::uint32_t b = std::max(cu[axis], cv[axis]);
      return (static_cast<std::uint64_t>(axis) * powers_[n_ - 1] + rest) * pairs_per_axis_ + pair_index(a, b, r_);
    }
    case Family::kTorusNN:
    case Family::kTorusSpread: {
      const Vertex d = sub(v, u);
      if (auto it = std::lower_bound(forward_.begin(), forward_.end(), d); it != forward_.end() && *it == d) {
        return static_cast<std::uint64_t>(u) * forward_.size() + (it - forward_.begin());
      }
      const Vertex back = sub(u, v);
      if (auto it = std::lower_bound(forward_.begin(), forward_.end(), back); it != forward_.end() && *it == back) {
        return static_cast<std::uint64_t>(v) * forward_.size() + (it - forward_.begin());
      }
      throw not_edge();
    }
  }
  throw not_edge();
}

std::pair<Vertex, Vertex> Graph::edge_endpoints(std::uint64_t e) const {
  if (e >= edges_) throw InvalidParameter("edge index " + std::to_string(e) + " out of range");
  switch (family_) {
    case Family::kComplete: {
      const double nn = static_cast<double>(n_);
      const double disc = (2 * nn - 1) * (2 * nn - 1) - 8.0 * static_cast<double>(e);
      std::uint64_t i = static_cast<std::uint64_t>(std::max(0.0, std::floor((2 * nn - 1 - std::sqrt(std::max(0.0, disc))) / 2)));
      while (i > 0 && complete_row_offset(i, n_) > e) --i;
      while (i + 1 < n_ && complete_row_offset(i + 1, n_) <= e) ++i;
      const std::uint64_t j = e - complete_row_offset(i, n_) + i + 1;
      return {static_cast<Vertex>(i), static_cast<Vertex>(j)};
    }
    case Family::kHypercube:
    case Family::kHamming: {
      const std::uint64_t pair = e % pairs_per_axis_;
      const std::uint64_t line = e / pairs_per_axis_;
      const std::uint32_t axis = static_cast<std::uint32_t>(line / powers_[n_ - 1]);
      const std::uint64_t rest = line % powers_[n_ - 1];
      std::uint32_t a = 0;
      while (pair >= pair_index(a + 1, a + 2, r_) && a + 2 < r_) ++a;
      const std::uint32_t b = static_cast<std::uint32_t>(pair - pair_index(a, a + 1, r_)) + a + 1;
      return {insert_digit(rest, axis, a), insert_digit(rest, axis, b)};
    }
    case Family::kTorusNN:
    case Family::kTorusSpread: {
      const Vertex v = static_cast<Vertex>(e / forward_.size());
      return {v, add(v, forward_[e % forward_.size()])};
    }
  }
  return {0, 0};
}

std::vector<std::uint32_t> Graph::coords(Vertex v) const {
  std::vector<std::uint32_t> c(n_);
  std::uint64_t x = v;
  for (std::uint32_t i = 0; i < n_; ++i) {
    c[i] = static_cast<std::uint32_t>(x % r_);
    x /= r_;
  }
  return c;
}

Vertex Graph::from_coords(std::span<const std::uint32_t> c) const {
  if (c.size() != n_) throw InvalidParameter("coordinate tuple has wrong length");
  std::uint64_t v = 0;
  for (std::uint32_t i = n_; i-- > 0;) {
    if (c[i] >= r_) throw InvalidParameter("coordinate out of range");
    v = v * r_ + c[i];
  }
  return static_cast<Vertex>(v);
}

Vertex Graph::add(Vertex a, Vertex b) const noexcept {
  if (r_ == 2) return a ^ b;
  std::uint64_t x = a, y = b, out = 0;
  for (std::uint32_t i = 0; i < n_; ++i) {
    std::uint32_t s = static_cast<std::uint32_t>(x % r_ + y % r_);
    if (s >= r_) s -= r_;
    out += s * powers_[i];
    x /= r_;
    y /= r_;
  }
  return static_cast<Vertex>(out);
}

Vertex Graph::sub(Vertex a, Vertex b) const noexcept {
  if (r_ == 2) return a ^ b;
  std::uint64_t x = a, y = b, out = 0;
  for (std::uint32_t i = 0; i < n_; ++i) {
    const std::uint32_t xd = static_cast<std::uint32_t>(x % r_), yd = static_cast<std::uint32_t>(y % r_);
    out += ((xd + r_ - yd) % r_) * powers_[i];
    x /= r_;
    y /= r_;
  }
  return static_cast<Vertex>(out);
}

Graph parse_graph_spec(std::string_view spec, std::uint64_t vertex_cap) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidParameter("graph spec '" + std::string(spec) + "' must look like family:key=value,...");
  }
  const std::string_view name = spec.substr(0, colon);
  std::map<std::string, std::uint32_t, std::less<>> kv;
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidParameter("malformed parameter '" + std::string(item) + "'");
    std::uint32_t value = 0;
    const std::string_view text = item.substr(eq + 1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw InvalidParameter("parameter '" + std::string(item) + "' is not a non-negative integer");
    }
    kv[std::string(item.substr(0, eq))] = value;
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  auto take = [&](std::string_view key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw InvalidParameter("graph spec '" + std::string(spec) + "' is missing " + std::string(key));
    const std::uint32_t v = it->second;
    kv.erase(it);
    return v;
  };
  auto finish = [&](Graph g) {
    if (!kv.empty()) throw InvalidParameter("unknown parameter '" + kv.begin()->first + "' in '" + std::string(spec) + "'");
    return g;
  };
  if (name == "complete") return finish(Graph::complete(take("n"), vertex_cap));
  if (name == "hypercube") return finish(Graph::hypercube(take("n"), vertex_cap));
  if (name == "hamming") {
    const auto r = take("r");
    return finish(Graph::hamming(r, take("n"), vertex_cap));
  }
  if (name == "torus") {
    const auto r = take("r");
    return finish(Graph::torus_nn(r, take("n"), vertex_cap));
  }
  if (name == "spread") {
    const auto r = take("r");
    const auto n = take("n");
    return finish(Graph::torus_spread(r, n, take("L"), vertex_cap));
  }
  throw InvalidParameter("unknown graph family '" + std::string(name) +
                         "' (expected complete, hypercube, hamming, torus, spread)");
}

}  // namespace percolab
