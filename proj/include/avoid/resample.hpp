#pragma once

#include <climits>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "avoid/error.hpp"
#include "avoid/random.hpp"

namespace avoid {

struct ResampleConfig {
  double p = 1.0;                   // arc-keep probability
  std::int64_t d_trim = 0;          // trimming out-degree
  std::int64_t max_rounds = 200'000;  // resamplings per restart
  int restarts = 4;
  std::uint64_t seed = 0;
  // Relaxes proof-only arithmetic gates (e.g. d_trim * p / 2 >= 3k^4) to
  // what the verified postconditions need. Outputs are always re-verified.
  bool calibrated = false;
  std::size_t max_events = 20'000'000;
};

enum class EventKind {
  DegreeOutOfRange,
  TooManyHInNeighbors,
  CycleSurvives,
  OutDegreeLow,
  PartitionDegree,
};

std::string_view to_string(EventKind kind);

// A bad event over a family of integer-valued variables. By default the
// event holds iff the number of non-zero variables in `variables` lies
// outside [lo, hi]; other kinds may supply a custom evaluator.
struct BadEvent {
  EventKind kind = EventKind::CycleSurvives;
  std::int64_t scope = 0;
  std::vector<std::size_t> variables;
  std::int64_t lo = 0;
  std::int64_t hi = LLONG_MAX;
};

using VariableSampler = std::function<std::int32_t(std::size_t var, Rng& rng)>;
using EventEvaluator = std::function<bool(std::size_t event, const BadEvent& e,
                                          std::span<const std::int32_t> assignment)>;

bool count_event_holds(const BadEvent& e, std::span<const std::int32_t> assignment);

struct ResampleOutcome {
  std::vector<std::int32_t> assignment;
  std::int64_t rounds = 0;    // resamplings in the successful restart
  int restarts_used = 0;
  std::vector<std::size_t> transcript;  // resampled event indices, last restart
};

class ResampleBudgetExceeded : public Error {
 public:
  ResampleBudgetExceeded(const std::string& message, std::vector<BadEvent> surviving)
      : Error(ErrorKind::ResampleBudgetExceeded, message), surviving_(std::move(surviving)) {}

  const std::vector<BadEvent>& surviving() const noexcept { return surviving_; }

 private:
  std::vector<BadEvent> surviving_;
};

// Moser-Tardos resampling. Every variable is drawn by `sampler`; while some
// event holds, the lowest-index holding event has its variables redrawn.
ResampleOutcome mt_resample(std::size_t num_variables, const VariableSampler& sampler,
                            std::span<const BadEvent> events, const ResampleConfig& cfg,
                            const EventEvaluator& evaluate = {});

// Boolean variables, each 1 independently with probability p.
ResampleOutcome mt_resample(std::size_t num_variables, double p, std::span<const BadEvent> events,
                            const ResampleConfig& cfg, const EventEvaluator& evaluate = {});

}  // namespace avoid
