#include "avoid/pipeline.hpp"

#include <climits>
#include <cmath>

#include "avoid/patterns.hpp"

namespace avoid {
namespace {

// k^e saturated at INT64_MAX.
std::int64_t saturating_pow(std::int64_t k, int e) {
  long double v = std::pow(static_cast<long double>(k), e);
  return v >= static_cast<long double>(LLONG_MAX) ? LLONG_MAX : static_cast<std::int64_t>(v);
}

int saturating_int(std::int64_t v) { return v > INT_MAX ? INT_MAX : static_cast<int>(v); }

ResampleConfig seeded(std::uint64_t seed, std::uint64_t stage) {
  ResampleConfig cfg;
  cfg.seed = keyed_bits(seed, 0x919e, stage);
  return cfg;
}

}  // namespace

PipelineProfile paper_faithful_profile(int k, std::uint64_t seed) {
  if (k < 100) throw Error(ErrorKind::ParameterInfeasible, "proof constants need k >= 100");
  PipelineProfile prof;
  prof.name = "paper_faithful";
  // Stage degrees k^(20^3) -> k^(20^2) -> k^20 -> k, all saturated.
  const std::int64_t k_stage[3] = {saturating_pow(k, 400), saturating_pow(k, 20), k};
  prof.cycles.k = saturating_int(27 * saturating_pow(k, 8000));
  prof.cycles.cfg = seeded(seed, 0);
  prof.cycles.cfg.d_trim = LLONG_MAX;
  prof.coloring = seeded(seed, 1);
  for (int c = 0; c < 3; ++c) {
    auto& st = prof.classes[c];
    st.k = saturating_int(k_stage[c]);
    st.cfg = seeded(seed, 2 + static_cast<std::uint64_t>(c));
    st.cfg.d_trim = saturating_pow(k_stage[c], 20);
    st.cfg.p = std::pow(static_cast<double>(k_stage[c]), -15.0);
  }
  return prof;
}

PipelineProfile desk_profile(int k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorKind::ParameterInfeasible, "k must be >= 1");
  PipelineProfile prof;
  prof.name = "desk";
  prof.cycles.k = 8 * k;
  prof.cycles.cfg = seeded(seed, 0);
  prof.cycles.cfg.d_trim = 10 * k;
  prof.cycles.cfg.p = 0.9;
  prof.cycles.cfg.max_rounds = 6'000'000;
  prof.cycles.cfg.restarts = 2;
  prof.coloring = seeded(seed, 1);
  prof.coloring.max_rounds = 2'000'000;
  prof.coloring_strength = 0.6;
  for (int c = 0; c < 3; ++c) {
    auto& st = prof.classes[c];
    st.k = k;
    st.cfg = seeded(seed, 2 + static_cast<std::uint64_t>(c));
    st.cfg.d_trim = 4 * k;
    st.cfg.p = 1.0;
    st.cfg.calibrated = true;
  }
  return prof;
}

PipelineResult pipeline_avoid_c3_c5(const Digraph& d, const PipelineProfile& profile) {
  PipelineResult result;
  std::string stage;
  const auto fail = [&](ErrorKind kind, const std::string& message) {
    return PipelineError(kind, stage, message, result.reports);
  };
  try {
    stage = "avoid-dicycles";
    ReductionReport rep;
    Digraph current =
        avoid_directed_cycles(d, {3, 5}, profile.cycles.k, profile.cycles.cfg, &rep);
    result.reports.push_back(rep);

    stage = "majority-color";
    const auto before = degree_stats(current).min_out;
    const auto coloring = majority_coloring(current, profile.coloring, 3, profile.coloring_strength);
    auto restricted = tripartite_restrict(current, coloring.coloring);
    current = std::move(restricted.graph);
    rep = {stage, current.order(), current.size(), before, degree_stats(current).min_out,
           coloring.rounds, coloring.restarts, profile.coloring.seed, true, {}};
    result.reports.push_back(rep);

    stage = "typed";
    const auto before_typed = degree_stats(current).min_out;
    auto typed = extract_typed(current, restricted.partition, 2);
    current = std::move(typed.graph);
    result.partition = std::move(typed.partition);
    rep = {stage, current.order(), current.size(), before_typed, degree_stats(current).min_out,
           0, 0, 0, true, {}};
    result.reports.push_back(rep);

    for (int c = 0; c < 3; ++c) {
      const Part cls = static_cast<Part>(c);
      stage = std::string("avoid-c5-from-") + to_char(cls);
      const auto& st = profile.classes[c];
      current = avoid_c5_from_class(current, result.partition, cls, st.k, st.cfg, &rep);
      result.reports.push_back(rep);
    }

    stage = "final-verify";
    const int k_final = profile.classes[2].k;
    rep = {stage, current.order(), current.size(), k_final, degree_stats(current).min_out,
           0, 0, 0, false, {}};
    if (rep.min_out_after < k_final) rep.violations.push_back("minimum out-degree below k");
    for (const char* name : {"C3_1", "C3_2", "C5_1", "C5_2", "C5_3", "C5_4"}) {
      if (find_pattern(current, cycle_orientation(name))) {
        rep.violations.push_back(std::string("contains ") + name);
      }
    }
    rep.verified = rep.violations.empty();
    result.reports.push_back(rep);
    if (!rep.verified) throw std::logic_error("pipeline output failed verification");
    result.graph = std::move(current);
  } catch (const PipelineError&) {
    throw;
  } catch (const Error& e) {
    throw fail(e.kind(), e.what());
  }
  return result;
}

}  // namespace avoid
