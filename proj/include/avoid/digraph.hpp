#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace avoid {

using Vertex = std::int32_t;
using ArcId = std::size_t;

struct Arc {
  Vertex tail;
  Vertex head;
  auto operator<=>(const Arc&) const = default;
};

// Simple loop-free digraph on vertices [0, n). Arcs are stored sorted by
// (tail, head), so arc ids are stable indices and the out-arcs of a vertex
// occupy a contiguous id range.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(Vertex n);

  Vertex order() const noexcept { return n_; }
  std::size_t size() const noexcept { return arcs_.size(); }
  std::span<const Arc> arcs() const noexcept { return arcs_; }
  const Arc& arc(ArcId id) const { return arcs_[id]; }

  std::span<const Vertex> out(Vertex v) const;
  std::span<const Vertex> in(Vertex v) const;
  // Ids of the in-arcs of v, parallel to in(v).
  std::span<const ArcId> in_arc_ids(Vertex v) const;
  ArcId out_begin(Vertex v) const { return out_offset_[v]; }
  ArcId out_end(Vertex v) const { return out_offset_[v + 1]; }

  int out_degree(Vertex v) const { return static_cast<int>(out_end(v) - out_begin(v)); }
  int in_degree(Vertex v) const {
    return static_cast<int>(in_offset_[v + 1] - in_offset_[v]);
  }

  bool has_arc(Vertex tail, Vertex head) const;
  // Id of arc (tail, head), or size() when absent.
  ArcId find_arc(Vertex tail, Vertex head) const;

  bool operator==(const Digraph& other) const {
    return n_ == other.n_ && arcs_ == other.arcs_;
  }

  // Trusted constructor: arcs must already be sorted, unique and loop-free.
  static Digraph from_sorted(Vertex n, std::vector<Arc> arcs);

 private:
  void index();

  Vertex n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<ArcId> out_offset_{0};
  std::vector<Vertex> out_heads_;
  std::vector<std::size_t> in_offset_{0};
  std::vector<Vertex> in_tails_;
  std::vector<ArcId> in_ids_;
};

// Digraph with parallel arcs; tag records the witness vertex of each arc.
struct TaggedArc {
  Vertex tail;
  Vertex head;
  Vertex tag;
  auto operator<=>(const TaggedArc&) const = default;
};

struct MultiDigraph {
  Vertex n = 0;
  std::vector<TaggedArc> arcs;

  int multiplicity(Vertex tail, Vertex head) const;
  int max_out_multidegree() const;
};

struct DegreeStats {
  int min_out = 0;
  int min_in = 0;
  int max_out = 0;
  int max_in = 0;
  bool operator==(const DegreeStats&) const = default;
};

enum class Direction { Forward, Backward };

struct DegeneracyOrder {
  std::vector<Vertex> order;
  // Largest number of arc endpoints any vertex has among its predecessors.
  int degeneracy = 0;
};

Digraph build_digraph(Vertex n, std::span<const Arc> arcs);

DegreeStats degree_stats(const Digraph& d);
// Degree extremes restricted to the listed vertices.
DegreeStats degree_stats(const Digraph& d, std::span<const Vertex> vertices);

std::vector<Vertex> reachable_set(const Digraph& d, std::span<const Vertex> start, int length,
                                  Direction direction = Direction::Forward);

// Vertex set of the maximal induced subdigraph with all out-degrees >= k.
std::vector<Vertex> out_core_vertices(const Digraph& d, int k);
// The out-core as a digraph on the same vertex ids (peeled vertices keep no arcs).
Digraph out_core(const Digraph& d, int k);

DegeneracyOrder degeneracy_ordering(const MultiDigraph& m);

Digraph subsample_arcs(const Digraph& d, const std::function<bool(const Arc&)>& keep, double p,
                       std::uint64_t seed);

// Spanning subdigraph keeping arc id i iff keep[i] != 0.
Digraph arc_subgraph(const Digraph& d, std::span<const std::uint8_t> keep);
Digraph induced_subgraph(const Digraph& d, std::span<const Vertex> vertices);

// Keeps at most `limit` out-arcs of every vertex; selection is a seeded shuffle.
Digraph trim_out_degrees(const Digraph& d, std::span<const int> limits, std::uint64_t seed);
Digraph trim_out_degrees(const Digraph& d, int limit, std::uint64_t seed);

bool is_regular(const Digraph& d, int* degree = nullptr);

}  // namespace avoid
