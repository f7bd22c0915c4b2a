#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avoid/digraph.hpp"
#include "avoid/patterns.hpp"

namespace avoid {

inline constexpr std::int64_t kDefaultVertexCap = 1'000'000;

struct BuildOptions {
  std::int64_t vertex_cap = kDefaultVertexCap;
  // When set, replaces the computed arborescence height. Outputs built this
  // way are flagged non-faithful.
  int height_override = -1;
};

// Rooted digraph whose arcs all go from layer i to layer i + 1 and whose
// out-degree-zero vertices all sit in the bottom layer.
struct LayeredRooted {
  Digraph graph;
  Vertex root = 0;
  std::vector<std::vector<Vertex>> layers;
  std::vector<Vertex> bottom;
  bool faithful = true;
};

struct GadgetInfo {
  std::string construction;
  std::vector<std::pair<std::string, std::int64_t>> parameters;
  std::vector<std::int64_t> layer_sizes;
  bool faithful = true;
};

struct Gadget {
  Digraph graph;
  // Roots of the disjoint copies, in copy order.
  std::vector<Vertex> roots;
  GadgetInfo info;
};

// Smallest l >= 0 with base^l >= target (base >= 2, target >= 1).
int ceil_log(std::int64_t base, long double target);

LayeredRooted out_arborescence(int branching, int height, const BuildOptions& opts = {});

// Height used by bipartite_gadget: ceil(log_k(a * C(d, k))), at least 1.
int bipartite_gadget_height(int a, int k, int d);
Gadget bipartite_gadget(int a, int b, int k, int d, const BuildOptions& opts = {});

int layered_gadget_height(int k, int d);
// Exact vertex count of layered_gadget(k, d, t) at the given arborescence
// height; saturates at INT64_MAX.
std::int64_t layered_gadget_vertex_count(int d, int height, int t);
LayeredRooted layered_gadget(int k, int d, int t, const BuildOptions& opts = {});

std::int64_t forest_gadget_vertex_count(const Digraph& tree, int d, int height);
Gadget forest_gadget(const Digraph& tree, int d, const BuildOptions& opts = {});

Digraph random_regular_digraph(Vertex n, int d, std::uint64_t seed, int max_attempts = 200);

// Structural validator for LayeredRooted; returns an empty string when valid.
std::string validate_layered(const LayeredRooted& g);

}  // namespace avoid
