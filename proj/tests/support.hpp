#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "avoid/digraph.hpp"
#include "avoid/random.hpp"
#include "avoid/reductions.hpp"

namespace testing {

using avoid::Arc;
using avoid::Digraph;
using avoid::Rng;
using avoid::Vertex;

inline Digraph make(Vertex n, std::vector<Arc> arcs) { return avoid::build_digraph(n, arcs); }

inline Digraph triangle() { return make(3, {{0, 1}, {1, 2}, {2, 0}}); }

// Each ordered pair becomes an arc with probability p (loops excluded).
inline Digraph random_digraph(Vertex n, double p, Rng& rng) {
  std::vector<Arc> arcs;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (u != v && rng.bernoulli(p)) arcs.push_back({u, v});
    }
  }
  return make(n, arcs);
}

// Exactly m distinct arcs on n vertices.
inline Digraph random_digraph_arcs(Vertex n, int m, Rng& rng) {
  std::vector<Arc> all;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (u != v) all.push_back({u, v});
    }
  }
  rng.shuffle(std::span<Arc>(all));
  all.resize(static_cast<std::size_t>(std::min<int>(m, static_cast<int>(all.size()))));
  return make(n, all);
}

// Random tripartite digraph: every vertex gets `deg` out-neighbours in the
// other two classes. Classes are v mod 3.
inline avoid::Restricted random_tripartite(Vertex n, int deg, Rng& rng) {
  std::vector<Arc> arcs;
  std::vector<avoid::Part> classes(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) classes[v] = static_cast<avoid::Part>(v % 3);
  for (Vertex u = 0; u < n; ++u) {
    std::set<Vertex> chosen;
    while (static_cast<int>(chosen.size()) < deg) {
      const auto w = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
      if (w % 3 != u % 3) chosen.insert(w);
    }
    for (const Vertex w : chosen) arcs.push_back({u, w});
  }
  return {make(n, arcs), {classes, 0, {}}};
}

// Random oriented forest on n vertices: each vertex after the first joins an
// earlier one with probability `join`, in a random direction.
inline Digraph random_forest(Vertex n, double join, Rng& rng) {
  std::vector<Arc> arcs;
  for (Vertex v = 1; v < n; ++v) {
    if (!rng.bernoulli(join)) continue;
    const auto u = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(v)));
    if (rng.bernoulli(0.5)) {
      arcs.push_back({u, v});
    } else {
      arcs.push_back({v, u});
    }
  }
  return make(n, arcs);
}

// Every injective map from pattern vertices to host vertices, checked directly.
inline bool brute_contains(const Digraph& d, const Digraph& f) {
  const Vertex n = d.order();
  const Vertex m = f.order();
  if (m > n) return false;
  std::vector<Vertex> image(static_cast<std::size_t>(m), -1);
  std::vector<bool> used(static_cast<std::size_t>(n));
  const auto rec = [&](auto&& self, Vertex x) -> bool {
    if (x == m) {
      for (const Arc& a : f.arcs()) {
        if (!d.has_arc(image[a.tail], image[a.head])) return false;
      }
      return true;
    }
    for (Vertex v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = true;
      image[x] = v;
      if (self(self, x + 1)) return true;
      used[v] = false;
    }
    return false;
  };
  return rec(rec, 0);
}

inline int min_out_of(const Digraph& d) { return avoid::degree_stats(d).min_out; }

// Maximum over nonempty vertex sets U and arc sets inside U of the minimum
// out-degree, among the F-free choices; -1 when none is F-free.
inline int brute_max_f_free(const Digraph& d, const Digraph& f) {
  const Vertex n = d.order();
  int best = -1;
  for (std::uint32_t u = 1; u < (1u << n); ++u) {
    std::vector<Arc> inside;
    for (const Arc& a : d.arcs()) {
      if ((u >> a.tail & 1) && (u >> a.head & 1)) inside.push_back(a);
    }
    const auto m = static_cast<std::uint32_t>(inside.size());
    for (std::uint32_t s = 0; s < (1u << m); ++s) {
      std::vector<int> deg(static_cast<std::size_t>(n));
      std::vector<Arc> chosen;
      for (std::uint32_t i = 0; i < m; ++i) {
        if (s >> i & 1) {
          chosen.push_back(inside[i]);
          ++deg[inside[i].tail];
        }
      }
      int low = INT32_MAX;
      for (Vertex v = 0; v < n; ++v) {
        if (u >> v & 1) low = std::min(low, deg[v]);
      }
      if (low <= best) continue;
      if (!brute_contains(make(n, chosen), f)) best = low;
    }
  }
  return best;
}

// Searches height functions h: V -> [0, 2n] directly, vertex by vertex,
// requiring h constant on vertices of in-degree >= 2. Arcless vertices are
// pinned to 0 since they constrain nothing.
inline bool brute_grounded(const Digraph& f) {
  const Vertex n = f.order();
  std::vector<int> h(static_cast<std::size_t>(n), -1);
  const auto consistent = [&](Vertex v) {
    for (const Vertex w : f.out(v)) {
      if (h[w] >= 0 && h[w] != h[v] + 1) return false;
    }
    for (const Vertex w : f.in(v)) {
      if (h[w] >= 0 && h[v] != h[w] + 1) return false;
    }
    if (f.in_degree(v) >= 2) {
      for (Vertex u = 0; u < n; ++u) {
        if (u != v && h[u] >= 0 && f.in_degree(u) >= 2 && h[u] != h[v]) return false;
      }
    }
    return true;
  };
  const auto rec = [&](auto&& self, Vertex v) -> bool {
    if (v == n) return true;
    const int top = f.out_degree(v) + f.in_degree(v) == 0 ? 0 : 2 * n;
    for (int x = 0; x <= top; ++x) {
      h[v] = x;
      if (consistent(v) && self(self, v + 1)) return true;
    }
    h[v] = -1;
    return false;
  };
  return rec(rec, 0);
}

}  // namespace testing
