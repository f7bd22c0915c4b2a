#include "avoid/reductions.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "avoid/cycles.hpp"
#include "avoid/error.hpp"

namespace avoid {

char to_char(Part p) { return static_cast<char>('A' + static_cast<int>(p)); }

std::string check_typed(const Digraph& d, const TypedPartition& tp) {
  const auto n = static_cast<std::size_t>(d.order());
  if (tp.classes.size() != n) return "partition size differs from vertex count";
  for (const auto& a : d.arcs()) {
    if (tp.classes[a.tail] == tp.classes[a.head]) {
      return "arc (" + std::to_string(a.tail) + "," + std::to_string(a.head) +
             ") inside class " + to_char(tp.classes[a.tail]);
    }
  }
  if (tp.s == 0) return {};
  if (tp.types.size() != n) return "type table size differs from vertex count";
  std::vector<std::uint8_t> in_frontier(n, 0);
  std::vector<Vertex> frontier;
  std::vector<Vertex> next;
  for (Vertex v = 0; v < d.order(); ++v) {
    if (tp.types[v].size() != static_cast<std::size_t>(tp.s)) {
      return "vertex " + std::to_string(v) + " has a type of the wrong length";
    }
    frontier.assign(1, v);
    for (int i = 1; i <= tp.s && !frontier.empty(); ++i) {
      next.clear();
      for (const Vertex u : frontier) {
        for (const Vertex w : d.out(u)) {
          if (!in_frontier[w]) {
            in_frontier[w] = 1;
            next.push_back(w);
          }
        }
      }
      for (const Vertex w : next) {
        in_frontier[w] = 0;
        if (tp.classes[w] != tp.types[v][i - 1]) {
          return "vertex " + std::to_string(v) + ": walk of length " + std::to_string(i) +
                 " reaches " + std::to_string(w) + " outside class " +
                 to_char(tp.types[v][i - 1]);
        }
      }
      frontier.swap(next);
    }
  }
  return {};
}

Vertex majority_violation(const Digraph& d, const std::vector<Part>& coloring, int colors) {
  for (Vertex v = 0; v < d.order(); ++v) {
    int different = 0;
    for (const Vertex w : d.out(v)) different += coloring[w] != coloring[v];
    if (different * colors < d.out_degree(v)) {
      // different < ceil(deg / colors)
      const int need = (d.out_degree(v) + colors - 1) / colors;
      if (different < need) return v;
    }
  }
  return -1;
}

ColoringRun majority_coloring(const Digraph& d, const ResampleConfig& cfg, int colors,
                              double strength) {
  if (colors != 2 && colors != 3) {
    throw Error(ErrorKind::ParameterInfeasible, "majority colouring supports 2 or 3 colours");
  }
  const auto n = static_cast<std::size_t>(d.order());
  ColoringRun run;
  run.coloring.resize(n);
  if (strength < 0.0 || strength > 1.0) {
    throw Error(ErrorKind::ParameterInfeasible, "colouring strength must lie in [0, 1]");
  }
  const auto violated = [&](Vertex v) {
    int different = 0;
    for (const Vertex w : d.out(v)) different += run.coloring[w] != run.coloring[v];
    const int deg = d.out_degree(v);
    const int strong = static_cast<int>(std::ceil(strength * deg - 1e-9));
    return different < std::max((deg + colors - 1) / colors, strong);
  };
  const int restarts = std::max(1, cfg.restarts);
  for (int attempt = 0; attempt < restarts; ++attempt) {
    Rng rng(cfg.seed, 0xc01 + static_cast<std::uint64_t>(attempt));
    for (auto& c : run.coloring) c = static_cast<Part>(rng.below(static_cast<std::uint64_t>(colors)));
    run.rounds = 0;
    bool clean = false;
    while (!clean && run.rounds < cfg.max_rounds) {
      clean = true;
      for (Vertex v = 0; v < d.order() && run.rounds < cfg.max_rounds; ++v) {
        if (!violated(v)) continue;
        clean = false;
        std::array<int, 3> freq{};
        for (const Vertex w : d.out(v)) ++freq[static_cast<int>(run.coloring[w])];
        int best = 0;
        for (int c = 1; c < colors; ++c) {
          if (freq[c] < freq[best]) best = c;
        }
        run.coloring[v] = static_cast<Part>(best);
        ++run.rounds;
      }
    }
    if (clean && majority_violation(d, run.coloring, colors) < 0) {
      run.restarts = attempt;
      return run;
    }
  }
  throw ResampleBudgetExceeded("no majority colouring within " + std::to_string(restarts) +
                                   " restarts of " + std::to_string(cfg.max_rounds) +
                                   " recolourings",
                               {});
}

std::vector<Part> majority_3_coloring(const Digraph& d, const ResampleConfig& cfg) {
  return majority_coloring(d, cfg, 3).coloring;
}

Restricted tripartite_restrict(const Digraph& d, const std::vector<Part>& coloring) {
  if (coloring.size() != static_cast<std::size_t>(d.order())) {
    throw Error(ErrorKind::ColoringInvalid, "colouring size differs from vertex count");
  }
  if (const Vertex bad = majority_violation(d, coloring); bad >= 0) {
    throw Error(ErrorKind::ColoringInvalid,
                "vertex " + std::to_string(bad) + " violates the majority condition");
  }
  std::vector<std::uint8_t> keep(d.size());
  for (ArcId i = 0; i < d.size(); ++i) {
    keep[i] = coloring[d.arc(i).tail] != coloring[d.arc(i).head];
  }
  Restricted out{arc_subgraph(d, keep), {coloring, 0, {}}};
  return out;
}

Restricted extract_typed(const Digraph& d, const TypedPartition& partition, int s) {
  if (s < 0 || s > 30) throw Error(ErrorKind::ParameterInfeasible, "s must lie in [0, 30]");
  TypedPartition base{partition.classes, 0, {}};
  if (const auto why = check_typed(d, base); !why.empty()) throw Error(ErrorKind::NotTripartite, why);

  const auto n = static_cast<std::size_t>(d.order());
  Digraph current = d;
  std::vector<std::vector<Part>> types(n);
  for (int level = 1; level <= s; ++level) {
    // Extended type of u: its class followed by its current type.
    const auto key_of = [&](Vertex u) {
      std::uint64_t key = static_cast<std::uint64_t>(partition.classes[u]);
      for (const Part p : types[u]) key = key * 3 + static_cast<std::uint64_t>(p);
      return key;
    };
    std::vector<std::uint8_t> keep(current.size(), 0);
    std::vector<std::vector<Part>> next(n);
    std::vector<std::pair<std::uint64_t, int>> tally;
    for (Vertex v = 0; v < d.order(); ++v) {
      tally.clear();
      for (const Vertex u : current.out(v)) {
        const auto key = key_of(u);
        auto it = std::find_if(tally.begin(), tally.end(),
                               [&](const auto& t) { return t.first == key; });
        if (it == tally.end()) {
          tally.emplace_back(key, 1);
        } else {
          ++it->second;
        }
      }
      if (tally.empty()) {
        next[v].assign(static_cast<std::size_t>(level), Part::A);
        continue;
      }
      auto best = tally.front();
      for (const auto& t : tally) {
        if (t.second > best.second || (t.second == best.second && t.first < best.first)) best = t;
      }
      for (ArcId id = current.out_begin(v); id < current.out_end(v); ++id) {
        keep[id] = key_of(current.arc(id).head) == best.first;
      }
      next[v].resize(static_cast<std::size_t>(level));
      std::uint64_t key = best.first;
      for (int i = level - 1; i >= 0; --i) {
        next[v][i] = static_cast<Part>(key % 3);
        key /= 3;
      }
    }
    current = arc_subgraph(current, keep);
    types = std::move(next);
  }
  Restricted out{std::move(current), {partition.classes, s, std::move(types)}};
  if (s == 0) out.partition.types.clear();
  if (const auto why = check_typed(out.graph, out.partition); !why.empty()) {
    throw std::logic_error("extract_typed produced an untyped graph: " + why);
  }
  return out;
}

Digraph avoid_directed_cycles(const Digraph& d, const std::vector<int>& lengths, int k,
                              const ResampleConfig& cfg, ReductionReport* report) {
  if (k < 1) throw Error(ErrorKind::ParameterInfeasible, "k must be >= 1");
  if (cfg.d_trim < k || static_cast<double>(cfg.d_trim) * cfg.p < k) {
    throw Error(ErrorKind::ParameterInfeasible,
                "d_trim * p = " + std::to_string(static_cast<double>(cfg.d_trim) * cfg.p) +
                    " is below k = " + std::to_string(k));
  }
  const auto before = degree_stats(d);
  if (before.min_out < cfg.d_trim) {
    throw Error(ErrorKind::ParameterInfeasible, "minimum out-degree " +
                                                    std::to_string(before.min_out) +
                                                    " is below d_trim " +
                                                    std::to_string(cfg.d_trim));
  }
  const Digraph trimmed = trim_out_degrees(d, static_cast<int>(cfg.d_trim), cfg.seed);

  std::vector<BadEvent> events;
  for (Vertex v = 0; v < trimmed.order(); ++v) {
    BadEvent e{EventKind::OutDegreeLow, v, {}, k, LLONG_MAX};
    for (ArcId id = trimmed.out_begin(v); id < trimmed.out_end(v); ++id) e.variables.push_back(id);
    events.push_back(std::move(e));
  }
  std::int64_t scope = trimmed.order();
  for (const int len : lengths) {
    for (auto& cycle : directed_cycles(trimmed, len, cfg.max_events)) {
      const auto size = static_cast<std::int64_t>(cycle.size());
      events.push_back({EventKind::CycleSurvives, scope++, std::move(cycle), 0, size - 1});
    }
  }
  const auto outcome = mt_resample(trimmed.size(), cfg.p, events, cfg);
  std::vector<std::uint8_t> keep(outcome.assignment.begin(), outcome.assignment.end());
  Digraph out = arc_subgraph(trimmed, keep);

  ReductionReport r{"avoid-dicycles", out.order(), out.size(), before.min_out, 0,
                    outcome.rounds, outcome.restarts_used, cfg.seed, false, {}};
  const auto after = degree_stats(out);
  r.min_out_after = after.min_out;
  if (after.min_out < k) r.violations.push_back("minimum out-degree below k");
  for (const int len : lengths) {
    if (has_directed_cycle(out, len)) {
      r.violations.push_back("directed cycle of length " + std::to_string(len) + " survives");
    }
  }
  r.verified = r.violations.empty();
  if (report) *report = r;
  if (!r.verified) throw std::logic_error("avoid_directed_cycles: " + r.violations.front());
  return out;
}

}  // namespace avoid
