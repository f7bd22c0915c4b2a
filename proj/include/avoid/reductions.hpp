#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avoid/digraph.hpp"
#include "avoid/resample.hpp"

namespace avoid {

enum class Part : std::uint8_t { A = 0, B = 1, C = 2 };

char to_char(Part p);

// 3-partition plus per-vertex s-type words: for every v and 1 <= i <= s, the
// vertices reachable from v by walks of length i all lie in types[v][i-1].
struct TypedPartition {
  std::vector<Part> classes;
  int s = 0;
  std::vector<std::vector<Part>> types;
};

struct ReductionReport {
  std::string stage;
  Vertex n = 0;
  std::size_t m = 0;
  int min_out_before = 0;
  int min_out_after = 0;
  std::int64_t rounds = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
  bool verified = false;
  std::vector<std::string> violations;
};

// First violation of the partition/typedness invariants, or empty.
std::string check_typed(const Digraph& d, const TypedPartition& tp);

// Vertex whose differently-coloured out-neighbours number fewer than
// ceil(d+(v) / colors), or -1.
Vertex majority_violation(const Digraph& d, const std::vector<Part>& coloring, int colors = 3);

struct ColoringRun {
  std::vector<Part> coloring;
  std::int64_t rounds = 0;
  int restarts = 0;
};

// Least-frequent-colour recolouring with random restarts. colors = 2 is the
// experimental half-majority variant; it carries no existence guarantee.
// strength > 0 additionally demands ceil(strength * deg) differently
// coloured out-neighbours at every vertex.
ColoringRun majority_coloring(const Digraph& d, const ResampleConfig& cfg, int colors = 3,
                              double strength = 0.0);
std::vector<Part> majority_3_coloring(const Digraph& d, const ResampleConfig& cfg);

struct Restricted {
  Digraph graph;
  TypedPartition partition;
};

Restricted tripartite_restrict(const Digraph& d, const std::vector<Part>& coloring);

Restricted extract_typed(const Digraph& d, const TypedPartition& partition, int s);

Digraph avoid_directed_cycles(const Digraph& d, const std::vector<int>& lengths, int k,
                              const ResampleConfig& cfg, ReductionReport* report = nullptr);

// ---- C5_2 avoidance from one class ----

// Auxiliary multidigraph on V: one arc (u, v) tagged w for every arc (u, w)
// with a directed 2-path from w to v, provided u and v share an out-neighbour.
MultiDigraph build_aux_H(const Digraph& d, const std::vector<Vertex>& v_set);

struct ClaimResult {
  Digraph sampled;
  std::vector<Vertex> order;  // ordering of V
  std::int64_t rounds = 0;
  int restarts = 0;
};

// Degree a V-vertex must keep after sampling: 3k^4, or just k in calibrated
// mode, where the sampled-degree window shrinks to [k, inf).
std::int64_t claim_min_degree(int k, const ResampleConfig& cfg);

ClaimResult claim_order_and_sample(const Digraph& d, const std::vector<Vertex>& v_set, int k,
                                   const ResampleConfig& cfg);

class RestrictionInfeasible : public Error {
 public:
  RestrictionInfeasible(Vertex v, const std::string& message)
      : Error(ErrorKind::RestrictionInfeasible, message), vertex_(v) {}
  Vertex vertex() const noexcept { return vertex_; }

 private:
  Vertex vertex_;
};

Digraph sequential_restriction(const Digraph& sampled, const std::vector<Vertex>& order,
                               const std::vector<Vertex>& v_set, int k);

// Vertices with an out-neighbour in `cls`.
std::vector<Vertex> in_neighbourhood_of_class(const Digraph& d, const TypedPartition& tp, Part cls);

// Witness of a C5_2 copy whose source lies in v_set, if any.
std::optional<std::vector<Vertex>> find_c5_2_from(const Digraph& d,
                                                  const std::vector<Vertex>& v_set);

Digraph avoid_c5_from_class(const Digraph& d, const TypedPartition& tp, Part cls, int k,
                            const ResampleConfig& cfg, ReductionReport* report = nullptr);

}  // namespace avoid
