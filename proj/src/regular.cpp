#include "avoid/regular.hpp"

#include <algorithm>
#include <cmath>

#include "avoid/cycles.hpp"

namespace avoid {
namespace {

std::int64_t ceil_of(const Rational& q) {
  using boost::multiprecision::cpp_int;
  const cpp_int num = boost::multiprecision::numerator(q);
  const cpp_int den = boost::multiprecision::denominator(q);
  cpp_int c = num / den;
  if (c * den < num) ++c;
  return c.convert_to<std::int64_t>();
}

std::int64_t floor_of(const Rational& q) {
  using boost::multiprecision::cpp_int;
  const cpp_int num = boost::multiprecision::numerator(q);
  const cpp_int den = boost::multiprecision::denominator(q);
  cpp_int f = num / den;
  if (f * den > num) --f;
  return f.convert_to<std::int64_t>();
}

int require_regular(const Digraph& d) {
  int degree = 0;
  if (!is_regular(d, &degree)) throw Error(ErrorKind::NotRegular, "host digraph is not regular");
  return degree;
}


// Focused repair for the colour classes: a vertex with too few out-neighbours
// in V_i pulls one random out-neighbour into V_i; one with too many
// in-neighbours in V_i pushes one of them out by redrawing its colour.
std::vector<std::int32_t> repair_colouring(const Digraph& d, std::size_t t,
                                           const std::vector<std::int64_t>& out_lo,
                                           const std::vector<std::int64_t>& in_hi,
                                           const std::vector<double>& cumulative,
                                           const ResampleConfig& cfg, std::int64_t* rounds,
                                           int* restarts_used) {
  const auto n = static_cast<std::size_t>(d.order());
  std::vector<std::int32_t> colour(n);
  std::vector<std::int64_t> out_cnt(n * t), in_cnt(n * t);
  const auto draw = [&](Rng& rng) {
    const double u = rng.uniform();
    for (std::size_t i = 0; i < t; ++i) {
      if (u < cumulative[i]) return static_cast<std::int32_t>(i);
    }
    return static_cast<std::int32_t>(t - 1);
  };
  const auto bad = [&](Vertex v) {
    for (std::size_t i = 0; i < t; ++i) {
      if (out_cnt[v * t + i] < out_lo[i] || in_cnt[v * t + i] > in_hi[i]) return true;
    }
    return false;
  };
  // Violated vertices with O(1) insert, erase and uniform pick.
  std::vector<Vertex> violated;
  std::vector<std::int64_t> slot(n, -1);
  const auto refresh = [&](Vertex v) {
    const bool now = bad(v);
    if (now && slot[v] < 0) {
      slot[v] = static_cast<std::int64_t>(violated.size());
      violated.push_back(v);
    } else if (!now && slot[v] >= 0) {
      const Vertex last = violated.back();
      violated[static_cast<std::size_t>(slot[v])] = last;
      slot[last] = slot[v];
      violated.pop_back();
      slot[v] = -1;
    }
  };
  // Bounds broken minus bounds repaired by recolouring w to `to`.
  const auto move_score = [&](Vertex w, std::int32_t to) {
    const auto a = static_cast<std::size_t>(colour[w]);
    const auto b = static_cast<std::size_t>(to);
    std::int64_t score = 0;
    for (const Vertex u : d.in(w)) {
      score += out_cnt[u * t + a] == out_lo[a];
      score -= out_cnt[u * t + b] == out_lo[b] - 1;
    }
    for (const Vertex u : d.out(w)) {
      score += in_cnt[u * t + b] == in_hi[b];
      score -= in_cnt[u * t + a] == in_hi[a] + 1;
    }
    return score;
  };
  const auto recolour = [&](Vertex w, std::int32_t to) {
    const auto from = static_cast<std::size_t>(colour[w]);
    colour[w] = to;
    for (const Vertex u : d.in(w)) {
      --out_cnt[u * t + from];
      ++out_cnt[u * t + static_cast<std::size_t>(to)];
      refresh(u);
    }
    for (const Vertex u : d.out(w)) {
      --in_cnt[u * t + from];
      ++in_cnt[u * t + static_cast<std::size_t>(to)];
      refresh(u);
    }
  };

  const int restarts = std::max(1, cfg.restarts);
  for (int attempt = 0; attempt < restarts; ++attempt) {
    Rng rng(cfg.seed, 0x1a7 + static_cast<std::uint64_t>(attempt));
    for (auto& c : colour) c = draw(rng);
    std::fill(out_cnt.begin(), out_cnt.end(), 0);
    std::fill(in_cnt.begin(), in_cnt.end(), 0);
    for (const Arc& a : d.arcs()) {
      ++out_cnt[a.tail * t + static_cast<std::size_t>(colour[a.head])];
      ++in_cnt[a.head * t + static_cast<std::size_t>(colour[a.tail])];
    }
    violated.clear();
    std::fill(slot.begin(), slot.end(), -1);
    for (Vertex v = 0; v < d.order(); ++v) refresh(v);
    *rounds = 0;
    while (!violated.empty() && *rounds < cfg.max_rounds) {
      ++*rounds;
      const Vertex v = violated[rng.below(violated.size())];
      std::size_t cls = 0;
      bool low = false;
      for (; cls < t; ++cls) {
        if (out_cnt[v * t + cls] < out_lo[cls]) {
          low = true;
          break;
        }
        if (in_cnt[v * t + cls] > in_hi[cls]) break;
      }
      const auto target = static_cast<std::int32_t>(cls);
      // Min-conflicts move with a little noise: among the neighbours the move
      // would change, prefer the recolouring that breaks the fewest bounds.
      const bool noisy = rng.uniform() < 0.1;
      Vertex pick = -1;
      std::int32_t to = target;
      std::int64_t best = 0;
      std::uint64_t ties = 0;
      for (const Vertex w : low ? d.out(v) : d.in(v)) {
        if ((colour[w] == target) == low) continue;
        for (std::size_t c = 0; c < t; ++c) {
          const auto b = static_cast<std::int32_t>(c);
          if (low ? b != target : b == target) continue;
          const std::int64_t score = noisy ? 0 : move_score(w, b);
          if (pick < 0 || score < best) {
            pick = w;
            to = b;
            best = score;
            ties = 1;
          } else if (score == best && rng.below(++ties) == 0) {
            pick = w;
            to = b;
          }
        }
      }
      if (pick < 0) break;
      recolour(pick, to);
    }
    if (violated.empty()) {
      *restarts_used = attempt;
      return colour;
    }
  }
  throw ResampleBudgetExceeded(std::to_string(violated.size()) +
                                   " vertices violate the class degree bounds after " +
                                   std::to_string(restarts) + " restarts",
                               {});
}

}  // namespace

PartitionProbabilities partition_probabilities(int t, int k) {
  if (t < 1 || k < 1) throw Error(ErrorKind::ParameterInfeasible, "t and k must be >= 1");
  const Rational r = 6 * k;
  Rational rt = 1;
  for (int i = 0; i < t; ++i) rt *= r;
  PartitionProbabilities out;
  Rational power = 1;
  for (int i = 1; i <= t; ++i) {
    out.exact.push_back(t == 1 ? Rational(1) : (r - 1) * power / (rt - 1));
    out.p.push_back(out.exact.back().convert_to<double>());
    power *= r;
  }
  return out;
}

std::vector<int> LayeredPartition::part_of() const {
  Vertex n = 0;
  for (const auto& part : parts) {
    for (const Vertex v : part) n = std::max(n, v + 1);
  }
  std::vector<int> out(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (const Vertex v : parts[i]) out[v] = static_cast<int>(i);
  }
  return out;
}

std::string check_layered_partition(const Digraph& d, const LayeredPartition& lp, int k) {
  if (lp.t < 1 || lp.parts.size() != static_cast<std::size_t>(lp.t)) return "part count differs from t";
  std::vector<int> part(static_cast<std::size_t>(d.order()), -1);
  for (std::size_t i = 0; i < lp.parts.size(); ++i) {
    for (const Vertex v : lp.parts[i]) {
      if (v < 0 || v >= d.order()) return "part lists unknown vertex " + std::to_string(v);
      if (part[v] >= 0) return "vertex " + std::to_string(v) + " lies in two parts";
      part[v] = static_cast<int>(i);
    }
  }
  for (Vertex v = 0; v < d.order(); ++v) {
    if (part[v] < 0) return "vertex " + std::to_string(v) + " lies in no part";
  }
  for (const auto& a : d.arcs()) {
    if (part[a.head] != (part[a.tail] + 1) % lp.t) {
      return "arc (" + std::to_string(a.tail) + "," + std::to_string(a.head) + ") goes from V_" +
             std::to_string(part[a.tail] + 1) + " to V_" + std::to_string(part[a.head] + 1);
    }
  }
  for (Vertex v = 0; v < d.order(); ++v) {
    if (part[v] != 0 && d.in_degree(v) > 1) {
      return "vertex " + std::to_string(v) + " outside V_1 has in-degree " +
             std::to_string(d.in_degree(v));
    }
    if (d.out_degree(v) < k) {
      return "vertex " + std::to_string(v) + " has out-degree " + std::to_string(d.out_degree(v));
    }
  }
  return {};
}

std::string check_layered_balance(const Digraph& d, const LayeredPartition& lp) {
  const auto part = lp.part_of();
  std::vector<std::uint8_t> on_path(static_cast<std::size_t>(d.order()), 0);
  std::string failure;
  // Depth-first over simple underlying paths; balance = forward - backward.
  const auto walk = [&](auto&& self, Vertex start, Vertex v, int length, int balance) -> void {
    if (!failure.empty()) return;
    if (length > 0 && part[v] == 0 && balance != 0) {
      failure = "path of length " + std::to_string(length) + " from " + std::to_string(start) +
                " to " + std::to_string(v) + " is unbalanced";
      return;
    }
    if (length + 1 >= lp.t) return;
    on_path[v] = 1;
    for (const Vertex w : d.out(v)) {
      if (!on_path[w]) self(self, start, w, length + 1, balance + 1);
    }
    for (const Vertex w : d.in(v)) {
      if (!on_path[w]) self(self, start, w, length + 1, balance - 1);
    }
    on_path[v] = 0;
  };
  for (Vertex v = 0; v < d.order() && failure.empty(); ++v) {
    if (part[v] == 0) walk(walk, v, v, 0, 0);
  }
  return failure;
}

Digraph avoid_short_cycle_regular(const Digraph& d, int ell, int k, const ResampleConfig& cfg,
                                  ReductionReport* report) {
  const int degree = require_regular(d);
  if (ell < 2 || k < 1) throw Error(ErrorKind::ParameterInfeasible, "need l >= 2 and k >= 1");
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw Error(ErrorKind::ParameterInfeasible, "p must lie in (0, 1]");
  // Calibrated runs only need the expected kept degree to reach k.
  const double reach = degree * cfg.p / (cfg.calibrated ? 1.0 : 2.0);
  if (reach < k) {
    throw Error(ErrorKind::ParameterInfeasible,
                std::string(cfg.calibrated ? "d * p = " : "d * p / 2 = ") +
                    std::to_string(reach) + " is below k");
  }
  if (!cfg.calibrated) {
    const long double needed = 2.0L * std::pow(static_cast<long double>(k), ell + 1);
    if (static_cast<long double>(degree) < needed) {
      throw Error(ErrorKind::ParameterInfeasible,
                  "degree " + std::to_string(degree) + " is below 2k^(l+1)");
    }
  }

  std::vector<BadEvent> events;
  for (Vertex v = 0; v < d.order(); ++v) {
    BadEvent e{EventKind::OutDegreeLow, v, {}, k, LLONG_MAX};
    for (ArcId id = d.out_begin(v); id < d.out_end(v); ++id) e.variables.push_back(id);
    events.push_back(std::move(e));
  }
  std::int64_t scope = d.order();
  for (auto& cycle : underlying_cycles(d, ell, cfg.max_events)) {
    const auto len = static_cast<std::int64_t>(cycle.size());
    std::sort(cycle.begin(), cycle.end());
    events.push_back({EventKind::CycleSurvives, scope++, std::move(cycle), 0, len - 1});
  }
  const auto outcome = mt_resample(d.size(), cfg.p, events, cfg);
  std::vector<std::uint8_t> keep(outcome.assignment.begin(), outcome.assignment.end());
  Digraph out = arc_subgraph(d, keep);

  ReductionReport r{"regular-cycle", out.order(), out.size(), degree, 0, outcome.rounds,
                    outcome.restarts_used, cfg.seed, false, {}};
  r.min_out_after = degree_stats(out).min_out;
  if (r.min_out_after < k) r.violations.push_back("minimum out-degree below k");
  if (has_underlying_cycle(out, ell)) {
    r.violations.push_back("cycle of length " + std::to_string(ell) + " survives");
  }
  r.verified = r.violations.empty();
  if (report) *report = r;
  if (!r.verified) throw std::logic_error("avoid_short_cycle_regular: " + r.violations.front());
  return out;
}

LayeredResult layered_partition(const Digraph& d, int t, int k, const ResampleConfig& cfg,
                                ReductionReport* report) {
  const int degree = require_regular(d);
  const auto probs = partition_probabilities(t, k);
  if (probs.exact.front() * degree < 2 * k) {
    throw Error(ErrorKind::ParameterInfeasible,
                "p_1 * d = " + std::to_string(probs.p.front() * degree) + " is below 2k");
  }
  if (!cfg.calibrated) {
    const long double needed = std::pow(static_cast<long double>(k), 2 * t);
    if (static_cast<long double>(degree) < needed) {
      throw Error(ErrorKind::ParameterInfeasible,
                  "degree " + std::to_string(degree) + " is below k^(2t)");
    }
  }
  const auto n = static_cast<std::size_t>(d.order());
  const auto tt = static_cast<std::size_t>(t);

  // Phase 1: colour classes with d+(v, V_i) >= p_i d / 2 and d-(v, V_i) <= 3 p_i d / 2.
  std::vector<std::int64_t> out_lo(tt), in_hi(tt);
  for (std::size_t i = 0; i < tt; ++i) {
    out_lo[i] = ceil_of(probs.exact[i] * degree / 2);
    in_hi[i] = floor_of(probs.exact[i] * degree * 3 / 2);
  }
  std::vector<double> cumulative(tt);
  {
    Rational acc = 0;
    for (std::size_t i = 0; i < tt; ++i) {
      acc += probs.exact[i];
      cumulative[i] = acc.convert_to<double>();
    }
    cumulative.back() = 1.0;
  }
  std::vector<BadEvent> colour_events;
  for (Vertex v = 0; v < d.order(); ++v) {
    BadEvent e{EventKind::PartitionDegree, v, {}, 0, LLONG_MAX};
    for (const Vertex w : d.out(v)) e.variables.push_back(static_cast<std::size_t>(w));
    for (const Vertex w : d.in(v)) e.variables.push_back(static_cast<std::size_t>(w));
    std::sort(e.variables.begin(), e.variables.end());
    e.variables.erase(std::unique(e.variables.begin(), e.variables.end()), e.variables.end());
    colour_events.push_back(std::move(e));
  }
  std::vector<std::int64_t> counts(2 * tt);
  const EventEvaluator colour_bad = [&](std::size_t idx, const BadEvent&,
                                        std::span<const std::int32_t> colour) {
    const auto v = static_cast<Vertex>(idx);
    std::fill(counts.begin(), counts.end(), 0);
    for (const Vertex w : d.out(v)) ++counts[colour[w]];
    for (const Vertex w : d.in(v)) ++counts[tt + colour[w]];
    for (std::size_t i = 0; i < tt; ++i) {
      if (counts[i] < out_lo[i] || counts[tt + i] > in_hi[i]) return true;
    }
    return false;
  };
  const VariableSampler colour_sampler = [&](std::size_t, Rng& rng) -> std::int32_t {
    const double u = rng.uniform();
    for (std::size_t i = 0; i < tt; ++i) {
      if (u < cumulative[i]) return static_cast<std::int32_t>(i);
    }
    return static_cast<std::int32_t>(tt - 1);
  };
  LayeredResult result;
  std::vector<std::int32_t> part;
  if (cfg.calibrated) {
    part = repair_colouring(d, tt, out_lo, in_hi, cumulative, cfg, &result.rounds_coloring,
                            &result.restarts);
  } else {
    auto coloured = mt_resample(n, colour_sampler, colour_events, cfg, colour_bad);
    part = std::move(coloured.assignment);
    result.rounds_coloring = coloured.rounds;
    result.restarts = coloured.restarts_used;
  }

  result.partition.t = t;
  result.partition.parts.resize(tt);
  for (Vertex v = 0; v < d.order(); ++v) result.partition.parts[part[v]].push_back(v);

  // Phase 2: keep arcs V_i -> V_{i+1}.
  std::vector<std::uint8_t> forward(d.size());
  for (ArcId id = 0; id < d.size(); ++id) {
    const auto& a = d.arc(id);
    forward[id] = part[a.head] == (part[a.tail] + 1) % t;
  }
  const Digraph f = arc_subgraph(d, forward);

  // Phase 3: every vertex outside V_1 keeps one uniformly chosen in-arc.
  std::vector<std::size_t> slot(f.size());
  for (Vertex u = 0; u < f.order(); ++u) {
    const auto ids = f.in_arc_ids(u);
    for (std::size_t j = 0; j < ids.size(); ++j) slot[ids[j]] = j;
  }
  std::vector<BadEvent> degree_events;
  for (Vertex v = 0; v < f.order(); ++v) {
    BadEvent e{EventKind::OutDegreeLow, v, {}, k, LLONG_MAX};
    for (const Vertex u : f.out(v)) {
      if (part[u] != 0) e.variables.push_back(static_cast<std::size_t>(u));
    }
    degree_events.push_back(std::move(e));
  }
  const EventEvaluator degree_low = [&](std::size_t idx, const BadEvent& e,
                                        std::span<const std::int32_t> choice) {
    const auto v = static_cast<Vertex>(idx);
    std::int64_t kept = 0;
    for (ArcId id = f.out_begin(v); id < f.out_end(v); ++id) {
      const Vertex u = f.arc(id).head;
      kept += part[u] == 0 || static_cast<std::size_t>(choice[u]) == slot[id];
    }
    return kept < e.lo;
  };
  const VariableSampler in_arc_sampler = [&](std::size_t u, Rng& rng) -> std::int32_t {
    const int indeg = f.in_degree(static_cast<Vertex>(u));
    return indeg > 0 ? static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(indeg))) : 0;
  };
  ResampleConfig phase3 = cfg;
  phase3.seed = mix64(cfg.seed + 3);
  const auto chosen = mt_resample(n, in_arc_sampler, degree_events, phase3, degree_low);
  result.rounds_in_arcs = chosen.rounds;

  std::vector<std::uint8_t> keep(f.size());
  for (ArcId id = 0; id < f.size(); ++id) {
    const Vertex u = f.arc(id).head;
    keep[id] = part[u] == 0 || static_cast<std::size_t>(chosen.assignment[u]) == slot[id];
  }
  result.graph = arc_subgraph(f, keep);

  ReductionReport r{"layered-partition", result.graph.order(), result.graph.size(), degree, 0,
                    result.rounds_coloring + result.rounds_in_arcs, result.restarts, cfg.seed,
                    false, {}};
  r.min_out_after = degree_stats(result.graph).min_out;
  for (Vertex v = 0; v < d.order(); ++v) {
    if (colour_bad(static_cast<std::size_t>(v), colour_events[v], part)) {
      r.violations.push_back("colour class degree bound fails at " + std::to_string(v));
      break;
    }
  }
  if (auto why = check_layered_partition(result.graph, result.partition, k); !why.empty()) {
    r.violations.push_back(std::move(why));
  }
  r.verified = r.violations.empty();
  if (report) *report = r;
  if (!r.verified) throw std::logic_error("layered_partition: " + r.violations.front());
  return result;
}

int regular_avoid_parts(const GroundedCertificate& cert) {
  const int path_arcs = static_cast<int>(cert.path.size()) - 1;
  return std::max(2, path_arcs + 1);
}

RegularAvoidResult regular_avoid(const Digraph& d, const Pattern& f, int k,
                                 const ResampleConfig& cfg) {
  require_regular(d);
  RegularAvoidResult result;
  if (const auto ell = shortest_underlying_cycle(f.graph)) {
    ResampleConfig c = cfg;
    if (!cfg.calibrated) c.p = std::pow(static_cast<double>(k), -*ell);
    result.branch = "cycle";
    result.parameter = *ell;
    result.graph = avoid_short_cycle_regular(d, *ell, k, c, &result.report);
  } else {
    auto cert = is_grounded_forest(f.graph);
    if (cert.verdict == GroundedVerdict::Grounded) {
      throw NotRegularAvoidable(f.name + " is a grounded forest", std::move(cert));
    }
    const int t = regular_avoid_parts(cert);
    auto layered = layered_partition(d, t, k, cfg, &result.report);
    result.branch = "layered";
    result.parameter = t;
    result.graph = std::move(layered.graph);
    result.partition = std::move(layered.partition);
  }
  if (const auto copy = find_pattern(result.graph, f)) {
    throw std::logic_error("regular_avoid output still contains " + f.name);
  }
  return result;
}

}  // namespace avoid
