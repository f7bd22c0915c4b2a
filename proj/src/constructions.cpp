#include "avoid/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "avoid/error.hpp"
#include "avoid/random.hpp"

namespace avoid {
namespace {

constexpr std::int64_t kSaturated = std::numeric_limits<std::int64_t>::max();

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  return (a > kSaturated - b) ? kSaturated : a + b;
}

std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return (a > kSaturated / b) ? kSaturated : a * b;
}

std::int64_t sat_pow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

// Vertices of a complete d-ary tree of the given height.
std::int64_t tree_size(int d, int height) {
  std::int64_t total = 0;
  std::int64_t layer = 1;
  for (int i = 0; i <= height; ++i) {
    total = sat_add(total, layer);
    layer = sat_mul(layer, d);
  }
  return total;
}

void check_cap(std::int64_t count, std::int64_t cap, const std::string& what) {
  if (count > cap) {
    throw Error(ErrorKind::TooLarge, what + " needs " +
                                         (count == kSaturated ? std::string("> 2^63")
                                                              : std::to_string(count)) +
                                         " vertices, cap is " + std::to_string(cap));
  }
}

// Heap-layout d-ary tree: children of local node i are d*i+1 .. d*i+d.
struct TreeLayout {
  std::int64_t size;
  std::int64_t first_leaf;
};

TreeLayout tree_layout(int d, int height) {
  const std::int64_t size = tree_size(d, height);
  return {size, size - sat_pow(d, height)};
}

int tree_depth(std::int64_t local, int d) {
  int depth = 0;
  while (local > 0) {
    local = (local - 1) / d;
    ++depth;
  }
  return depth;
}

struct Piece {
  Vertex n = 0;
  std::vector<Arc> arcs;
  std::vector<std::vector<Vertex>> layers;
  std::vector<Vertex> bottom;
};

Piece build_layered(int d, int height, int t) {
  Piece piece;
  if (t == 1) {
    piece.n = 1;
    piece.layers = {{0}};
    piece.bottom = {0};
    return piece;
  }
  const Piece sub = build_layered(d, height, t - 1);
  const auto tree = tree_layout(d, height);
  const auto leaves = tree.size - tree.first_leaf;
  piece.n = static_cast<Vertex>(tree.size + leaves * (sub.n - 1) + d);
  piece.layers.resize(static_cast<std::size_t>(height) + sub.layers.size() + 1);
  for (std::int64_t i = 0; i < tree.size; ++i) {
    piece.layers[tree_depth(i, d)].push_back(static_cast<Vertex>(i));
    if (i < tree.first_leaf) {
      for (int c = 1; c <= d; ++c) {
        piece.arcs.push_back({static_cast<Vertex>(i), static_cast<Vertex>(d * i + c)});
      }
    }
  }
  const Vertex b_base = piece.n - d;
  Vertex next = static_cast<Vertex>(tree.size);
  for (std::int64_t leaf = tree.first_leaf; leaf < tree.size; ++leaf) {
    // Sub-vertex 0 is identified with the leaf; the rest get fresh ids.
    const Vertex base = next - 1;
    const auto map = [&](Vertex v) { return v == 0 ? static_cast<Vertex>(leaf) : base + v; };
    next += sub.n - 1;
    for (const auto& a : sub.arcs) piece.arcs.push_back({map(a.tail), map(a.head)});
    for (std::size_t j = 1; j < sub.layers.size(); ++j) {
      for (const Vertex v : sub.layers[j]) piece.layers[height + j].push_back(map(v));
    }
    for (const Vertex v : sub.bottom) {
      for (int b = 0; b < d; ++b) piece.arcs.push_back({map(v), b_base + b});
    }
  }
  for (int b = 0; b < d; ++b) {
    piece.layers.back().push_back(b_base + b);
    piece.bottom.push_back(b_base + b);
  }
  return piece;
}

void check_degree_params(int k, int d) {
  if (k < 2) {
    throw Error(ErrorKind::ParameterInfeasible, "logarithm base k must be at least 2");
  }
  if (d < k) throw Error(ErrorKind::ParameterInfeasible, "requires d >= k");
}

}  // namespace

int ceil_log(std::int64_t base, long double target) {
  int l = 0;
  long double power = 1.0L;
  while (power < target) {
    power *= static_cast<long double>(base);
    ++l;
  }
  return l;
}

LayeredRooted out_arborescence(int branching, int height, const BuildOptions& opts) {
  if (branching < 1 || height < 0) {
    throw Error(ErrorKind::ParameterInfeasible, "arborescence needs d >= 1 and height >= 0");
  }
  const auto tree = tree_layout(branching, height);
  check_cap(tree.size, opts.vertex_cap, "out-arborescence");
  LayeredRooted out;
  std::vector<Arc> arcs;
  out.layers.resize(static_cast<std::size_t>(height) + 1);
  for (std::int64_t i = 0; i < tree.size; ++i) {
    out.layers[tree_depth(i, branching)].push_back(static_cast<Vertex>(i));
    if (i < tree.first_leaf) {
      for (int c = 1; c <= branching; ++c) {
        arcs.push_back({static_cast<Vertex>(i), static_cast<Vertex>(branching * i + c)});
      }
    }
  }
  out.graph = build_digraph(static_cast<Vertex>(tree.size), arcs);
  out.bottom = out.layers.back();
  return out;
}

int bipartite_gadget_height(int a, int k, int d) {
  long double binom = 1.0L;
  for (int i = 1; i <= k; ++i) binom = binom * (d - k + i) / i;
  return std::max(1, ceil_log(k, static_cast<long double>(a) * binom));
}

Gadget bipartite_gadget(int a, int b, int k, int d, const BuildOptions& opts) {
  if (a < 1 || b < 1) throw Error(ErrorKind::ParameterInfeasible, "a, b must be >= 1");
  if (k < b) throw Error(ErrorKind::ParameterInfeasible, "requires k >= b");
  check_degree_params(k, d);
  const int height = opts.height_override >= 0 ? opts.height_override
                                               : bipartite_gadget_height(a, k, d);
  if (height < 1) throw Error(ErrorKind::ParameterInfeasible, "height must be >= 1");
  const auto tree = tree_layout(d, height);
  check_cap(sat_mul(tree.size, d), opts.vertex_cap, "bipartite gadget");

  std::vector<Arc> arcs;
  std::vector<Vertex> roots;
  for (int c = 0; c < d; ++c) roots.push_back(static_cast<Vertex>(c * tree.size));
  for (int c = 0; c < d; ++c) {
    const auto off = static_cast<Vertex>(c * tree.size);
    for (std::int64_t i = 0; i < tree.first_leaf; ++i) {
      for (int ch = 1; ch <= d; ++ch) {
        arcs.push_back({off + static_cast<Vertex>(i), off + static_cast<Vertex>(d * i + ch)});
      }
    }
    for (std::int64_t leaf = tree.first_leaf; leaf < tree.size; ++leaf) {
      for (const Vertex r : roots) arcs.push_back({off + static_cast<Vertex>(leaf), r});
    }
  }
  Gadget g;
  g.graph = build_digraph(static_cast<Vertex>(d * tree.size), arcs);
  g.roots = std::move(roots);
  g.info.construction = "bipartite-gadget";
  g.info.parameters = {{"a", a}, {"b", b}, {"k", k}, {"d", d}, {"height", height}};
  for (int i = 0; i <= height; ++i) g.info.layer_sizes.push_back(sat_mul(sat_pow(d, i), d));
  g.info.faithful = opts.height_override < 0;
  return g;
}

int layered_gadget_height(int k, int d) {
  return ceil_log(k, std::pow(2.0L, static_cast<long double>(d)) * k);
}

std::int64_t layered_gadget_vertex_count(int d, int height, int t) {
  const auto tree = tree_layout(d, height);
  const std::int64_t leaves = tree.size - tree.first_leaf;
  std::int64_t count = 1;
  for (int level = 2; level <= t; ++level) {
    count = sat_add(sat_add(tree.first_leaf, sat_mul(leaves, count)), d);
  }
  return count;
}

LayeredRooted layered_gadget(int k, int d, int t, const BuildOptions& opts) {
  check_degree_params(k, d);
  if (t < 1) throw Error(ErrorKind::ParameterInfeasible, "t must be >= 1");
  const int height = opts.height_override >= 0 ? opts.height_override : layered_gadget_height(k, d);
  if (height < 1) throw Error(ErrorKind::ParameterInfeasible, "height must be >= 1");
  check_cap(layered_gadget_vertex_count(d, height, t), opts.vertex_cap, "layered gadget");
  Piece piece = build_layered(d, height, t);
  LayeredRooted out;
  out.graph = build_digraph(piece.n, piece.arcs);
  out.root = 0;
  out.layers = std::move(piece.layers);
  out.bottom = std::move(piece.bottom);
  out.faithful = opts.height_override < 0;
  return out;
}

std::int64_t forest_gadget_vertex_count(const Digraph& tree, int d, int height) {
  return sat_mul(d, layered_gadget_vertex_count(d, height, 2 * tree.order()));
}

Gadget forest_gadget(const Digraph& tree, int d, const BuildOptions& opts) {
  if (tree.order() < 1 || tree.size() + 1 != static_cast<std::size_t>(tree.order()) ||
      !is_oriented_forest(tree)) {
    throw Error(ErrorKind::NotATree, "input is not an oriented tree");
  }
  const int k = tree.order();
  check_degree_params(k, d);
  const int height = opts.height_override >= 0 ? opts.height_override : layered_gadget_height(k, d);
  check_cap(forest_gadget_vertex_count(tree, d, height), opts.vertex_cap, "forest gadget");
  BuildOptions inner = opts;
  inner.height_override = height;
  const auto copy = layered_gadget(k, d, 2 * k, inner);
  const Vertex size = copy.graph.order();

  std::vector<Arc> arcs;
  std::vector<Vertex> roots;
  for (int c = 0; c < d; ++c) roots.push_back(c * size + copy.root);
  for (int c = 0; c < d; ++c) {
    const Vertex off = c * size;
    for (const auto& a : copy.graph.arcs()) arcs.push_back({off + a.tail, off + a.head});
    for (const Vertex v : copy.bottom) {
      for (const Vertex r : roots) arcs.push_back({off + v, r});
    }
  }
  Gadget g;
  g.graph = build_digraph(d * size, arcs);
  g.roots = std::move(roots);
  g.info.construction = "forest-gadget";
  g.info.parameters = {{"tree_vertices", k}, {"d", d}, {"t", 2 * k}, {"height", height}};
  for (const auto& layer : copy.layers) {
    g.info.layer_sizes.push_back(static_cast<std::int64_t>(layer.size()) * d);
  }
  g.info.faithful = opts.height_override < 0;
  return g;
}

Digraph random_regular_digraph(Vertex n, int d, std::uint64_t seed, int max_attempts) {
  if (n < 0 || d < 0 || (d > 0 && d >= n)) {
    throw Error(ErrorKind::RetryBudgetExceeded,
                "no " + std::to_string(d) + "-regular digraph on " + std::to_string(n) +
                    " vertices");
  }
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::vector<Vertex>> out(un);
  const auto has = [&](Vertex u, Vertex v) {
    return u == v || std::find(out[u].begin(), out[u].end(), v) != out[u].end();
  };
  Rng rng(seed, 0x7e6);
  std::vector<Vertex> perm(un);
  for (int layer = 0; layer < d; ++layer) {
    bool done = false;
    for (int attempt = 0; attempt < max_attempts && !done; ++attempt) {
      for (Vertex v = 0; v < n; ++v) perm[v] = v;
      rng.shuffle(std::span<Vertex>(perm));
      // Repair loops and repeated arcs by swapping images between vertices.
      std::int64_t budget = 64LL * n + 1024;
      bool clean = false;
      while (budget-- > 0) {
        clean = true;
        for (Vertex v = 0; v < n && budget > 0; ++v) {
          if (!has(v, perm[v])) continue;
          clean = false;
          const auto u = static_cast<Vertex>(rng.below(un));
          --budget;
          if (!has(v, perm[u]) && !has(u, perm[v])) std::swap(perm[u], perm[v]);
        }
        if (clean) break;
      }
      if (!clean) continue;
      for (Vertex v = 0; v < n; ++v) out[v].push_back(perm[v]);
      done = true;
    }
    if (!done) {
      throw Error(ErrorKind::RetryBudgetExceeded,
                  "could not place permutation " + std::to_string(layer + 1) + " of " +
                      std::to_string(d));
    }
  }
  std::vector<Arc> arcs;
  arcs.reserve(un * static_cast<std::size_t>(d));
  for (Vertex v = 0; v < n; ++v) {
    for (const Vertex w : out[v]) arcs.push_back({v, w});
  }
  return build_digraph(n, arcs);
}

std::string validate_layered(const LayeredRooted& g) {
  const Digraph& d = g.graph;
  const auto n = static_cast<std::size_t>(d.order());
  if (g.layers.empty() || g.layers[0] != std::vector<Vertex>{g.root}) return "layer 0 is not {root}";
  std::vector<int> layer_of(n, -1);
  for (std::size_t i = 0; i < g.layers.size(); ++i) {
    for (const Vertex v : g.layers[i]) {
      if (v < 0 || static_cast<std::size_t>(v) >= n || layer_of[v] >= 0) {
        return "vertex " + std::to_string(v) + " listed twice or out of range";
      }
      layer_of[v] = static_cast<int>(i);
    }
  }
  std::vector<int> dist(n, -1);
  dist[g.root] = 0;
  std::deque<Vertex> queue{g.root};
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    for (const Vertex w : d.out(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  for (Vertex v = 0; v < d.order(); ++v) {
    if (dist[v] < 0) return "vertex " + std::to_string(v) + " unreachable from root";
    if (dist[v] != layer_of[v]) return "vertex " + std::to_string(v) + " in wrong layer";
  }
  for (const auto& a : d.arcs()) {
    if (layer_of[a.head] != layer_of[a.tail] + 1) {
      return "arc (" + std::to_string(a.tail) + "," + std::to_string(a.head) + ") skips a layer";
    }
  }
  std::vector<Vertex> sinks;
  for (Vertex v = 0; v < d.order(); ++v) {
    if (d.out_degree(v) == 0) {
      if (layer_of[v] != static_cast<int>(g.layers.size()) - 1) {
        return "sink " + std::to_string(v) + " outside the bottom layer";
      }
      sinks.push_back(v);
    }
  }
  auto bottom = g.bottom;
  std::sort(bottom.begin(), bottom.end());
  if (bottom != sinks) return "bottom set differs from the out-degree-zero vertices";
  return {};
}

}  // namespace avoid
