#include "avoid/resample.hpp"

#include <algorithm>
#include <set>

namespace avoid {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::DegreeOutOfRange: return "degree_out_of_range";
    case EventKind::TooManyHInNeighbors: return "too_many_H_in_neighbors";
    case EventKind::CycleSurvives: return "cycle_survives";
    case EventKind::OutDegreeLow: return "out_degree_low";
    case EventKind::PartitionDegree: return "partition_degree";
  }
  return "unknown";
}

bool count_event_holds(const BadEvent& e, std::span<const std::int32_t> assignment) {
  std::int64_t count = 0;
  for (const auto v : e.variables) count += assignment[v] != 0;
  return count < e.lo || count > e.hi;
}

ResampleOutcome mt_resample(std::size_t num_variables, const VariableSampler& sampler,
                            std::span<const BadEvent> events, const ResampleConfig& cfg,
                            const EventEvaluator& evaluate) {
  const auto holds = [&](std::size_t i, std::span<const std::int32_t> a) {
    return evaluate ? evaluate(i, events[i], a) : count_event_holds(events[i], a);
  };

  std::vector<std::vector<std::size_t>> touching(num_variables);
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (const auto v : events[i].variables) touching[v].push_back(i);
  }
  for (auto& row : touching) row.erase(std::unique(row.begin(), row.end()), row.end());

  Rng rng(cfg.seed, 0x11a);
  ResampleOutcome out;
  out.assignment.resize(num_variables);
  std::set<std::size_t> violated;
  std::vector<std::size_t> affected;
  std::vector<std::uint8_t> mark(events.size(), 0);
  const int restarts = std::max(1, cfg.restarts);

  for (int attempt = 0; attempt < restarts; ++attempt) {
    for (std::size_t v = 0; v < num_variables; ++v) out.assignment[v] = sampler(v, rng);
    violated.clear();
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (holds(i, out.assignment)) violated.insert(i);
    }
    out.rounds = 0;
    out.transcript.clear();
    while (!violated.empty() && out.rounds < cfg.max_rounds) {
      const std::size_t e = *violated.begin();
      ++out.rounds;
      out.transcript.push_back(e);
      affected.clear();
      for (const auto v : events[e].variables) {
        out.assignment[v] = sampler(v, rng);
        for (const auto j : touching[v]) {
          if (!mark[j]) {
            mark[j] = 1;
            affected.push_back(j);
          }
        }
      }
      for (const auto j : affected) {
        mark[j] = 0;
        if (holds(j, out.assignment)) {
          violated.insert(j);
        } else {
          violated.erase(j);
        }
      }
    }
    if (violated.empty()) {
      out.restarts_used = attempt;
      return out;
    }
  }

  std::vector<BadEvent> surviving;
  for (const auto i : violated) {
    if (surviving.size() >= 32) break;
    surviving.push_back(events[i]);
  }
  throw ResampleBudgetExceeded(std::to_string(violated.size()) + " events still hold after " +
                                   std::to_string(restarts) + " restarts of " +
                                   std::to_string(cfg.max_rounds) + " rounds",
                               std::move(surviving));
}

ResampleOutcome mt_resample(std::size_t num_variables, double p, std::span<const BadEvent> events,
                            const ResampleConfig& cfg, const EventEvaluator& evaluate) {
  const VariableSampler sampler = [p](std::size_t, Rng& rng) -> std::int32_t {
    return rng.bernoulli(p) ? 1 : 0;
  };
  return mt_resample(num_variables, sampler, events, cfg, evaluate);
}

}  // namespace avoid
