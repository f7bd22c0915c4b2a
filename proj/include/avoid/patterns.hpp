#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avoid/digraph.hpp"

namespace avoid {

struct Pattern {
  Digraph graph;
  std::string name;
};

// Pattern vertex x maps to embedding[x].
using Embedding = std::vector<Vertex>;

// Optional per-pattern-vertex restriction for find_pattern: when
// allowed[x] is non-empty, pattern vertex x may only map to host vertices v
// with allowed[x][v] != 0.
struct MatchDomains {
  std::vector<std::vector<std::uint8_t>> allowed;
};

// C3_1, C3_2, C5_1..C5_4 as in the standard orientation catalog.
Pattern cycle_orientation(std::string_view name);
Pattern one_directed_bipartite(int a, int b);
Pattern single_arc();
Pattern directed_path(int vertices);

// Any name accepted by cycle_orientation, plus `arc`, `dipath_<n>` and
// `K_onedir_<a>_<b>`.
Pattern pattern_by_name(std::string_view name);

// Injective arc-preserving map F -> D (non-arcs of F may be arcs of D).
std::optional<Embedding> find_pattern(const Digraph& d, const Pattern& f,
                                      const MatchDomains* domains = nullptr);
std::optional<Embedding> find_pattern(const Digraph& d, const Digraph& f,
                                      const MatchDomains* domains = nullptr);

struct HeightFunction {
  std::vector<int> heights;
};

std::optional<HeightFunction> compute_height_function(const Digraph& f);

enum class GroundedVerdict { Grounded, NotGrounded };

struct GroundedCertificate {
  GroundedVerdict verdict = GroundedVerdict::Grounded;
  // Grounded: height function constant on vertices of in-degree >= 2.
  HeightFunction heights;
  // NotGrounded: in-degree >= 2 vertices u, v and the unique underlying path
  // between them (u first). Along that path forward != backward arc counts.
  Vertex u = -1;
  Vertex v = -1;
  std::vector<Vertex> path;
  int forward = 0;
  int backward = 0;
};

bool is_oriented_forest(const Digraph& f);
GroundedCertificate is_grounded_forest(const Digraph& f);
// Independent re-check of a certificate against its forest.
bool certificate_holds(const Digraph& f, const GroundedCertificate& cert);

// Canonical adjacency encoding, minimum over all relabelings (order <= 8).
std::uint64_t canonical_form(const Digraph& d);
bool isomorphic(const Digraph& a, const Digraph& b);

std::vector<Pattern> enumerate_orientations(int length);

// Number of arcs of the shortest cycle in the underlying multigraph, if any.
std::optional<int> shortest_underlying_cycle(const Digraph& d);

}  // namespace avoid
