#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avoid/digraph.hpp"
#include "avoid/reductions.hpp"

namespace avoid {

struct StageParams {
  int k = 2;
  ResampleConfig cfg;
};

// Parameters of every stage of the C3/C5 pipeline. `cycles` removes
// directed 3- and 5-cycles; `classes` runs the C5_2 procedure for A, B, C.
struct PipelineProfile {
  std::string name;
  StageParams cycles;
  ResampleConfig coloring;
  double coloring_strength = 0.0;
  StageParams classes[3];
};

// Proof constants: k >= 100, d = k^20, p = k^-15 per class stage and
// 27 k^(20^3) after cycle removal. Unrunnable beyond the degree caps.
PipelineProfile paper_faithful_profile(int k, std::uint64_t seed);

// Calibrated small constants for final degree k; see README for the ladder.
PipelineProfile desk_profile(int k, std::uint64_t seed);

struct PipelineResult {
  Digraph graph;
  TypedPartition partition;
  std::vector<ReductionReport> reports;
};

class PipelineError : public Error {
 public:
  PipelineError(ErrorKind kind, const std::string& stage, const std::string& message,
                std::vector<ReductionReport> reports)
      : Error(kind, stage + ": " + message), stage_(stage), reports_(std::move(reports)) {}
  const std::string& stage() const noexcept { return stage_; }
  const std::vector<ReductionReport>& reports() const noexcept { return reports_; }

 private:
  std::string stage_;
  std::vector<ReductionReport> reports_;
};

PipelineResult pipeline_avoid_c3_c5(const Digraph& d, const PipelineProfile& profile);

}  // namespace avoid
