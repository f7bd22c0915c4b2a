#include <algorithm>
#include <cmath>
#include <numeric>

#include "avoid/cycles.hpp"
#include "avoid/patterns.hpp"
#include "avoid/reductions.hpp"

namespace avoid {
namespace {

std::vector<std::uint8_t> membership(Vertex n, const std::vector<Vertex>& v_set) {
  std::vector<std::uint8_t> in(static_cast<std::size_t>(n), 0);
  for (const Vertex v : v_set) {
    if (v < 0 || v >= n) throw Error(ErrorKind::InvalidVertex, std::to_string(v));
    in[v] = 1;
  }
  return in;
}

void require_independent(const Digraph& d, const std::vector<std::uint8_t>& in_v) {
  for (const auto& a : d.arcs()) {
    if (in_v[a.tail] && in_v[a.head]) {
      throw Error(ErrorKind::VNotIndependent, "arc (" + std::to_string(a.tail) + "," +
                                                  std::to_string(a.head) + ") inside V");
    }
  }
}

// Number of distinct H-in-neighbours of each vertex that precede it in `pos`.
std::vector<int> earlier_in_neighbours(const MultiDigraph& h, const std::vector<int>& pos) {
  std::vector<std::vector<Vertex>> from(static_cast<std::size_t>(h.n));
  for (const auto& a : h.arcs) {
    if (pos[a.tail] >= 0 && pos[a.head] >= 0 && pos[a.tail] < pos[a.head]) {
      from[a.head].push_back(a.tail);
    }
  }
  std::vector<int> count(static_cast<std::size_t>(h.n), 0);
  for (Vertex v = 0; v < h.n; ++v) {
    auto& row = from[v];
    std::sort(row.begin(), row.end());
    count[v] = static_cast<int>(std::unique(row.begin(), row.end()) - row.begin());
  }
  return count;
}

std::vector<int> positions(Vertex n, const std::vector<Vertex>& order) {
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  return pos;
}

}  // namespace

MultiDigraph build_aux_H(const Digraph& d, const std::vector<Vertex>& v_set) {
  const auto in_v = membership(d.order(), v_set);
  require_independent(d, in_v);
  MultiDigraph h{d.order(), {}};
  const auto n = static_cast<std::size_t>(d.order());
  std::vector<std::uint8_t> is_out(n, 0);
  // Per-u caches: whether v shares an out-neighbour with u (0 unknown, 1 no, 2 yes),
  // and the last w for which (u, v) was emitted.
  std::vector<std::uint8_t> shares(n, 0);
  std::vector<Vertex> emitted_for(n, -1);
  std::vector<Vertex> touched;
  std::vector<Vertex> sorted_v = v_set;
  std::sort(sorted_v.begin(), sorted_v.end());
  sorted_v.erase(std::unique(sorted_v.begin(), sorted_v.end()), sorted_v.end());

  for (const Vertex u : sorted_v) {
    for (const Vertex w : d.out(u)) is_out[w] = 1;
    for (const Vertex w : d.out(u)) {
      for (const Vertex x : d.out(w)) {
        for (const Vertex v : d.out(x)) {
          if (v == u || !in_v[v] || emitted_for[v] == w) continue;
          if (shares[v] == 0) {
            touched.push_back(v);
            shares[v] = 1;
            for (const Vertex a : d.out(v)) {
              if (is_out[a]) {
                shares[v] = 2;
                break;
              }
            }
          }
          if (shares[v] != 2) continue;
          emitted_for[v] = w;
          h.arcs.push_back({u, v, w});
        }
      }
    }
    for (const Vertex w : d.out(u)) is_out[w] = 0;
    for (const Vertex v : touched) {
      shares[v] = 0;
      emitted_for[v] = -1;
    }
    touched.clear();
  }
  std::sort(h.arcs.begin(), h.arcs.end());
  return h;
}

std::int64_t claim_min_degree(int k, const ResampleConfig& cfg) {
  if (cfg.calibrated) return k;
  const auto kk = static_cast<std::int64_t>(k);
  return 3 * kk * kk * kk * kk;
}

ClaimResult claim_order_and_sample(const Digraph& d, const std::vector<Vertex>& v_set, int k,
                                   const ResampleConfig& cfg) {
  if (k < 1) throw Error(ErrorKind::ParameterInfeasible, "k must be >= 1");
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw Error(ErrorKind::ParameterInfeasible, "p must lie in (0, 1]");
  const auto in_v = membership(d.order(), v_set);
  require_independent(d, in_v);
  const double half = static_cast<double>(cfg.d_trim) * cfg.p / 2.0;
  const std::int64_t need = claim_min_degree(k, cfg);
  if (!v_set.empty()) {
    // Calibrated runs only need the expected sampled degree to reach k.
    const double reach = cfg.calibrated ? 2.0 * half : half;
    if (reach < static_cast<double>(need) || cfg.d_trim < k) {
      throw Error(ErrorKind::ParameterInfeasible,
                  std::string(cfg.calibrated ? "d_trim * p = " : "d_trim * p / 2 = ") +
                      std::to_string(reach) + " is below " + std::to_string(need));
    }
  }
  for (Vertex v = 0; v < d.order(); ++v) {
    // Calibrated runs trim V-vertices to at most d_trim instead of requiring it.
    const std::int64_t want = !cfg.calibrated && !v_set.empty() ? cfg.d_trim : k;
    if (d.out_degree(v) < want) {
      throw Error(ErrorKind::ParameterInfeasible, "vertex " + std::to_string(v) +
                                                      " has out-degree " +
                                                      std::to_string(d.out_degree(v)) +
                                                      ", needs " + std::to_string(want));
    }
  }

  std::vector<int> limits(static_cast<std::size_t>(d.order()));
  for (Vertex v = 0; v < d.order(); ++v) limits[v] = in_v[v] || cfg.calibrated ? static_cast<int>(cfg.d_trim) : k;
  const Digraph f0 = trim_out_degrees(d, limits, cfg.seed);

  ClaimResult result;
  if (v_set.empty()) {
    result.sampled = f0;
    return result;
  }

  const MultiDigraph h0 = build_aux_H(f0, v_set);
  for (const Vertex v : degeneracy_ordering(h0).order) {
    if (in_v[v]) result.order.push_back(v);
  }
  const auto pos = positions(d.order(), result.order);

  const auto n = static_cast<std::size_t>(d.order());

  const auto lo = cfg.calibrated ? need : static_cast<std::int64_t>(std::ceil(half));
  const auto hi = cfg.calibrated ? LLONG_MAX : static_cast<std::int64_t>(std::floor(3.0 * half));
  std::vector<BadEvent> events;
  for (const Vertex v : result.order) {
    BadEvent e{EventKind::DegreeOutOfRange, v, {}, lo, hi};
    for (ArcId id = f0.out_begin(v); id < f0.out_end(v); ++id) e.variables.push_back(id);
    events.push_back(std::move(e));
  }

  // B events: v_i with more than 2k distinct earlier H(F0)-in-neighbours.
  // Paths w -> x -> v_i never use arcs out of V, so the tags stay valid.
  struct Earlier {
    Vertex vj;
    std::vector<ArcId> tag_arcs;  // arcs (v_j, w) whose tag w reaches v_i
  };
  std::vector<std::vector<Earlier>> b_data;
  std::vector<Vertex> b_vertex;
  {
    std::vector<std::vector<TaggedArc>> into(n);
    for (const auto& a : h0.arcs) {
      if (pos[a.tail] < pos[a.head]) into[a.head].push_back(a);
    }
    for (const Vertex v : result.order) {
      auto& arcs = into[v];
      std::sort(arcs.begin(), arcs.end());
      std::vector<Earlier> rows;
      for (const auto& a : arcs) {
        if (rows.empty() || rows.back().vj != a.tail) rows.push_back({a.tail, {}});
        rows.back().tag_arcs.push_back(f0.find_arc(a.tail, a.tag));
      }
      if (rows.size() <= static_cast<std::size_t>(2 * k)) continue;
      BadEvent e{EventKind::TooManyHInNeighbors, static_cast<std::int64_t>(n) + v, {}, 0,
                 2 * static_cast<std::int64_t>(k)};
      for (ArcId id = f0.out_begin(v); id < f0.out_end(v); ++id) e.variables.push_back(id);
      for (const auto& r : rows) {
        for (ArcId id = f0.out_begin(r.vj); id < f0.out_end(r.vj); ++id) e.variables.push_back(id);
      }
      std::sort(e.variables.begin(), e.variables.end());
      events.push_back(std::move(e));
      b_data.push_back(std::move(rows));
      b_vertex.push_back(v);
    }
  }
  const std::size_t first_b = result.order.size();

  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t clock = 0;
  const EventEvaluator evaluate = [&](std::size_t idx, const BadEvent& e,
                                      std::span<const std::int32_t> a) {
    if (idx < first_b) return count_event_holds(e, a);
    const std::size_t b = idx - first_b;
    const Vertex vi = b_vertex[b];
    ++clock;
    for (ArcId id = f0.out_begin(vi); id < f0.out_end(vi); ++id) {
      if (a[id]) stamp[f0.arc(id).head] = clock;
    }
    std::int64_t count = 0;
    for (const auto& row : b_data[b]) {
      const bool tagged = std::any_of(row.tag_arcs.begin(), row.tag_arcs.end(),
                                      [&](ArcId id) { return a[id] != 0; });
      if (!tagged) continue;
      for (ArcId id = f0.out_begin(row.vj); id < f0.out_end(row.vj); ++id) {
        if (a[id] && stamp[f0.arc(id).head] == clock) {
          ++count;
          break;
        }
      }
    }
    return count > e.hi;
  };
  const double p = cfg.p;
  const VariableSampler sampler = [&](std::size_t var, Rng& rng) -> std::int32_t {
    if (!in_v[f0.arc(var).tail]) return 1;
    return rng.bernoulli(p) ? 1 : 0;
  };
  const auto outcome = mt_resample(f0.size(), sampler, events, cfg, evaluate);
  std::vector<std::uint8_t> keep(outcome.assignment.begin(), outcome.assignment.end());
  result.sampled = arc_subgraph(f0, keep);
  result.rounds = outcome.rounds;
  result.restarts = outcome.restarts_used;

  for (Vertex v = 0; v < d.order(); ++v) {
    const int deg = result.sampled.out_degree(v);
    if (in_v[v] ? deg < need : (cfg.calibrated ? deg < k : deg != k)) {
      throw std::logic_error("claim_order_and_sample: degree check failed at " + std::to_string(v));
    }
  }
  const auto earlier = earlier_in_neighbours(build_aux_H(result.sampled, v_set), pos);
  for (const Vertex v : result.order) {
    if (earlier[v] > 2 * k) {
      throw std::logic_error("claim_order_and_sample: too many earlier H-in-neighbours at " +
                             std::to_string(v));
    }
  }
  return result;
}

Digraph sequential_restriction(const Digraph& sampled, const std::vector<Vertex>& order,
                               const std::vector<Vertex>& v_set, int k) {
  const auto n = static_cast<std::size_t>(sampled.order());
  const auto in_v = membership(sampled.order(), v_set);
  if (v_set.empty()) return sampled;
  const auto pos = positions(sampled.order(), order);
  for (const Vertex v : v_set) {
    if (pos[v] < 0) throw Error(ErrorKind::ParameterInfeasible, "ordering misses vertex " + std::to_string(v));
  }
  const MultiDigraph h = build_aux_H(sampled, v_set);
  std::vector<std::vector<Vertex>> earlier_in(n);
  for (const auto& a : h.arcs) {
    if (pos[a.tail] < pos[a.head]) earlier_in[a.head].push_back(a.tail);
  }
  for (auto& row : earlier_in) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }

  std::vector<std::vector<Vertex>> chosen(n);
  std::vector<std::uint8_t> processed(n, 0);
  const auto current_out = [&](Vertex v) -> std::span<const Vertex> {
    if (in_v[v] && processed[v]) return chosen[v];
    return sampled.out(v);
  };

  std::vector<int> local(n, -1);
  std::vector<std::uint8_t> banned(n, 0);
  for (const Vertex vi : order) {
    if (!in_v[vi]) continue;
    for (const Vertex vj : earlier_in[vi]) {
      for (const Vertex w : chosen[vj]) banned[w] = 1;
    }
    std::vector<Vertex> candidates;
    for (const Vertex w : sampled.out(vi)) {
      if (!banned[w]) candidates.push_back(w);
    }
    for (const Vertex vj : earlier_in[vi]) {
      for (const Vertex w : chosen[vj]) banned[w] = 0;
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) local[candidates[i]] = static_cast<int>(i);

    // Conflict graph: w1 ~ w2 when w1 -> x -> v_j -> w2 for a processed v_j.
    const std::size_t m = candidates.size();
    std::vector<std::vector<int>> adj(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (const Vertex x : current_out(candidates[i])) {
        for (const Vertex vj : current_out(x)) {
          if (!in_v[vj] || !processed[vj]) continue;
          for (const Vertex w2 : chosen[vj]) {
            const int j = local[w2];
            if (j < 0 || static_cast<std::size_t>(j) == i) continue;
            adj[i].push_back(j);
            adj[j].push_back(static_cast<int>(i));
          }
        }
      }
    }
    std::vector<int> degree(m);
    for (std::size_t i = 0; i < m; ++i) {
      auto& row = adj[i];
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
      degree[i] = static_cast<int>(row.size());
    }
    std::vector<std::uint8_t> alive(m, 1);
    std::vector<Vertex> picked;
    while (static_cast<int>(picked.size()) < k) {
      int best = -1;
      for (std::size_t i = 0; i < m; ++i) {
        if (!alive[i]) continue;
        if (best < 0 || degree[i] < degree[best] ||
            (degree[i] == degree[best] && candidates[i] < candidates[best])) {
          best = static_cast<int>(i);
        }
      }
      if (best < 0) break;
      picked.push_back(candidates[best]);
      const auto drop = [&](int i) {
        if (!alive[i]) return;
        alive[i] = 0;
        for (const int j : adj[i]) --degree[j];
      };
      drop(best);
      for (const int j : adj[best]) drop(j);
    }
    for (const Vertex w : candidates) local[w] = -1;
    if (static_cast<int>(picked.size()) < k) {
      throw RestrictionInfeasible(
          vi, "vertex " + std::to_string(vi) + ": independent set of size " +
                  std::to_string(picked.size()) + " among " + std::to_string(m) +
                  " admissible out-neighbours, need " + std::to_string(k));
    }
    std::sort(picked.begin(), picked.end());
    chosen[vi] = std::move(picked);
    processed[vi] = 1;
  }

  std::vector<Arc> arcs;
  for (Vertex v = 0; v < sampled.order(); ++v) {
    for (const Vertex w : current_out(v)) arcs.push_back({v, w});
  }
  Digraph out = Digraph::from_sorted(sampled.order(), std::move(arcs));
  if (const auto copy = find_c5_2_from(out, v_set)) {
    throw std::logic_error("sequential_restriction left a C5_2 copy with source " +
                           std::to_string(copy->front()));
  }
  return out;
}

std::vector<Vertex> in_neighbourhood_of_class(const Digraph& d, const TypedPartition& tp, Part cls) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < d.order(); ++v) {
    const auto nb = d.out(v);
    if (std::any_of(nb.begin(), nb.end(), [&](Vertex w) { return tp.classes[w] == cls; })) {
      out.push_back(v);
    }
  }
  return out;
}

std::optional<std::vector<Vertex>> find_c5_2_from(const Digraph& d,
                                                  const std::vector<Vertex>& v_set) {
  static const Pattern c5_2 = cycle_orientation("C5_2");
  MatchDomains domains;
  domains.allowed.resize(5);
  domains.allowed[0] = membership(d.order(), v_set);
  return find_pattern(d, c5_2, &domains);
}

Digraph avoid_c5_from_class(const Digraph& d, const TypedPartition& tp, Part cls, int k,
                            const ResampleConfig& cfg, ReductionReport* report) {
  if (k < 1) throw Error(ErrorKind::ParameterInfeasible, "k must be >= 1");
  if (tp.s < 1) throw Error(ErrorKind::ParameterInfeasible, "input must be at least 1-typed");
  if (const auto why = check_typed(d, tp); !why.empty()) throw Error(ErrorKind::NotTripartite, why);
  if (has_directed_cycle(d, 3)) {
    throw Error(ErrorKind::ParameterInfeasible, "input contains a directed triangle");
  }
  const auto before = degree_stats(d);
  const auto v_set = in_neighbourhood_of_class(d, tp, cls);

  ReductionReport r;
  r.stage = std::string("avoid-c5-from-") + to_char(cls);
  r.seed = cfg.seed;
  r.min_out_before = before.min_out;
  Digraph out;
  if (v_set.empty()) {
    if (before.min_out < k) {
      throw Error(ErrorKind::ParameterInfeasible, "minimum out-degree " +
                                                      std::to_string(before.min_out) +
                                                      " is below k = " + std::to_string(k));
    }
    out = trim_out_degrees(d, k, cfg.seed);
  } else {
    const auto claim = claim_order_and_sample(d, v_set, k, cfg);
    r.rounds = claim.rounds;
    r.restarts = claim.restarts;
    out = sequential_restriction(claim.sampled, claim.order, v_set, k);
  }

  r.n = out.order();
  r.m = out.size();
  const auto after = degree_stats(out);
  r.min_out_after = after.min_out;
  if (cfg.calibrated) {
    // Calibrated runs leave vertices outside V with up to d_trim out-arcs.
    const auto in_v = membership(out.order(), v_set);
    for (Vertex v = 0; v < out.order(); ++v) {
      if (out.out_degree(v) < k || (in_v[v] && out.out_degree(v) != k)) {
        r.violations.push_back("vertex " + std::to_string(v) + " has out-degree " +
                               std::to_string(out.out_degree(v)));
        break;
      }
    }
  } else if (after.min_out != k || after.max_out != k) {
    r.violations.push_back("out-degrees not all equal to k");
  }
  if (!v_set.empty() && find_c5_2_from(out, v_set)) {
    r.violations.push_back("C5_2 copy with source in the class in-neighbourhood");
  }
  r.verified = r.violations.empty();
  if (report) *report = r;
  if (!r.verified) throw std::logic_error("avoid_c5_from_class: " + r.violations.front());
  return out;
}

}  // namespace avoid
