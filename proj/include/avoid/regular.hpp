#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "avoid/digraph.hpp"
#include "avoid/patterns.hpp"
#include "avoid/reductions.hpp"
#include "avoid/resample.hpp"

namespace avoid {

using Rational = boost::multiprecision::cpp_rational;

// p_i = (r - 1) r^(i-1) / (r^t - 1) with r = 6k, i = 1..t.
struct PartitionProbabilities {
  std::vector<Rational> exact;
  std::vector<double> p;
};

PartitionProbabilities partition_probabilities(int t, int k);

struct LayeredPartition {
  int t = 0;
  std::vector<std::vector<Vertex>> parts;  // parts[0] is V_1
  // Part index (0-based) of every vertex.
  std::vector<int> part_of() const;
};

struct LayeredResult {
  Digraph graph;
  LayeredPartition partition;
  std::int64_t rounds_coloring = 0;
  std::int64_t rounds_in_arcs = 0;
  int restarts = 0;
};

// Empty when every arc goes V_i -> V_{i+1 mod t}, vertices outside V_1 have
// in-degree at most 1, and all out-degrees are at least k.
std::string check_layered_partition(const Digraph& d, const LayeredPartition& lp, int k);

// Empty when every underlying path of fewer than t arcs joining two V_1
// vertices has as many forward as backward arcs.
std::string check_layered_balance(const Digraph& d, const LayeredPartition& lp);

Digraph avoid_short_cycle_regular(const Digraph& d, int ell, int k, const ResampleConfig& cfg,
                                  ReductionReport* report = nullptr);

// The colour classes are found by resampling; calibrated runs use a
// min-conflicts repair instead, against the same degree bounds.
LayeredResult layered_partition(const Digraph& d, int t, int k, const ResampleConfig& cfg,
                                ReductionReport* report = nullptr);

class NotRegularAvoidable : public Error {
 public:
  NotRegularAvoidable(const std::string& message, GroundedCertificate cert)
      : Error(ErrorKind::NotRegularAvoidable, message), cert_(std::move(cert)) {}
  const GroundedCertificate& certificate() const noexcept { return cert_; }

 private:
  GroundedCertificate cert_;
};

struct RegularAvoidResult {
  Digraph graph;
  std::string branch;  // "cycle" or "layered"
  int parameter = 0;   // cycle length or part count
  LayeredPartition partition;
  ReductionReport report;
};

// Cycle branch length: shortest underlying cycle of F. Forest branch part
// count: one more than the shortest unbalanced path between two vertices of
// in-degree >= 2, and at least 2.
int regular_avoid_parts(const GroundedCertificate& cert);

// In the cycle branch p = k^-l unless cfg.calibrated, in which case cfg.p is used.
RegularAvoidResult regular_avoid(const Digraph& d, const Pattern& f, int k,
                                 const ResampleConfig& cfg);

}  // namespace avoid
