#include "avoid/digraph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "avoid/error.hpp"
#include "avoid/random.hpp"

namespace avoid {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArc: return "InvalidArc";
    case ErrorKind::InvalidVertex: return "InvalidVertex";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownPattern: return "UnknownPattern";
    case ErrorKind::NotAForest: return "NotAForest";
    case ErrorKind::NotATree: return "NotATree";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ParameterInfeasible: return "ParameterInfeasible";
    case ErrorKind::RetryBudgetExceeded: return "RetryBudgetExceeded";
    case ErrorKind::ResampleBudgetExceeded: return "ResampleBudgetExceeded";
    case ErrorKind::ColoringInvalid: return "ColoringInvalid";
    case ErrorKind::NotTripartite: return "NotTripartite";
    case ErrorKind::VNotIndependent: return "VNotIndependent";
    case ErrorKind::RestrictionInfeasible: return "RestrictionInfeasible";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::NotRegularAvoidable: return "NotRegularAvoidable";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

Digraph::Digraph(Vertex n) : n_(n) { index(); }

Digraph Digraph::from_sorted(Vertex n, std::vector<Arc> arcs) {
  Digraph d;
  d.n_ = n;
  d.arcs_ = std::move(arcs);
  d.index();
  return d;
}

void Digraph::index() {
  const auto n = static_cast<std::size_t>(n_);
  out_offset_.assign(n + 1, 0);
  in_offset_.assign(n + 1, 0);
  out_heads_.resize(arcs_.size());
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    ++out_offset_[arcs_[i].tail + 1];
    ++in_offset_[arcs_[i].head + 1];
    out_heads_[i] = arcs_[i].head;
  }
  std::partial_sum(out_offset_.begin(), out_offset_.end(), out_offset_.begin());
  std::partial_sum(in_offset_.begin(), in_offset_.end(), in_offset_.begin());
  in_tails_.resize(arcs_.size());
  in_ids_.resize(arcs_.size());
  std::vector<std::size_t> fill(in_offset_.begin(), in_offset_.end() - 1);
  // Arcs are sorted by tail, so each in-list comes out sorted by tail.
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const auto slot = fill[arcs_[i].head]++;
    in_tails_[slot] = arcs_[i].tail;
    in_ids_[slot] = i;
  }
}

std::span<const Vertex> Digraph::out(Vertex v) const {
  return std::span<const Vertex>(out_heads_).subspan(out_offset_[v],
                                                     out_offset_[v + 1] - out_offset_[v]);
}

std::span<const Vertex> Digraph::in(Vertex v) const {
  return std::span<const Vertex>(in_tails_).subspan(in_offset_[v],
                                                    in_offset_[v + 1] - in_offset_[v]);
}

std::span<const ArcId> Digraph::in_arc_ids(Vertex v) const {
  return std::span<const ArcId>(in_ids_).subspan(in_offset_[v],
                                                 in_offset_[v + 1] - in_offset_[v]);
}

ArcId Digraph::find_arc(Vertex tail, Vertex head) const {
  if (tail < 0 || tail >= n_) return arcs_.size();
  const auto row = out(tail);
  const auto it = std::lower_bound(row.begin(), row.end(), head);
  if (it == row.end() || *it != head) return arcs_.size();
  return out_offset_[tail] + static_cast<std::size_t>(it - row.begin());
}

bool Digraph::has_arc(Vertex tail, Vertex head) const { return find_arc(tail, head) != size(); }

int MultiDigraph::multiplicity(Vertex tail, Vertex head) const {
  return static_cast<int>(std::count_if(arcs.begin(), arcs.end(), [&](const TaggedArc& a) {
    return a.tail == tail && a.head == head;
  }));
}

int MultiDigraph::max_out_multidegree() const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& a : arcs) ++deg[a.tail];
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

Digraph build_digraph(Vertex n, std::span<const Arc> arcs) {
  if (n < 0) throw Error(ErrorKind::InvalidVertex, "negative vertex count");
  std::vector<Arc> sorted(arcs.begin(), arcs.end());
  for (const auto& a : sorted) {
    if (a.tail < 0 || a.tail >= n || a.head < 0 || a.head >= n) {
      throw Error(ErrorKind::InvalidVertex, "arc (" + std::to_string(a.tail) + "," +
                                                std::to_string(a.head) + ") outside [0," +
                                                std::to_string(n) + ")");
    }
    if (a.tail == a.head) {
      throw Error(ErrorKind::InvalidArc, "self-loop at " + std::to_string(a.tail));
    }
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return Digraph::from_sorted(n, std::move(sorted));
}

DegreeStats degree_stats(const Digraph& d) {
  std::vector<Vertex> all(static_cast<std::size_t>(d.order()));
  std::iota(all.begin(), all.end(), 0);
  return degree_stats(d, all);
}

DegreeStats degree_stats(const Digraph& d, std::span<const Vertex> vertices) {
  if (vertices.empty()) return {};
  DegreeStats s{d.out_degree(vertices[0]), d.in_degree(vertices[0]), d.out_degree(vertices[0]),
                d.in_degree(vertices[0])};
  for (const Vertex v : vertices) {
    s.min_out = std::min(s.min_out, d.out_degree(v));
    s.max_out = std::max(s.max_out, d.out_degree(v));
    s.min_in = std::min(s.min_in, d.in_degree(v));
    s.max_in = std::max(s.max_in, d.in_degree(v));
  }
  return s;
}

std::vector<Vertex> reachable_set(const Digraph& d, std::span<const Vertex> start, int length,
                                  Direction direction) {
  std::vector<std::uint8_t> current(static_cast<std::size_t>(d.order()), 0);
  for (const Vertex v : start) current[v] = 1;
  std::vector<std::uint8_t> next(current.size());
  for (int step = 0; step < length; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (Vertex v = 0; v < d.order(); ++v) {
      if (!current[v]) continue;
      const auto nbrs = direction == Direction::Forward ? d.out(v) : d.in(v);
      for (const Vertex w : nbrs) next[w] = 1;
    }
    current.swap(next);
  }
  std::vector<Vertex> result;
  for (Vertex v = 0; v < d.order(); ++v) {
    if (current[v]) result.push_back(v);
  }
  return result;
}

std::vector<Vertex> out_core_vertices(const Digraph& d, int k) {
  const auto n = static_cast<std::size_t>(d.order());
  std::vector<int> deg(n);
  std::vector<std::uint8_t> alive(n, 1);
  std::vector<Vertex> queue;
  for (Vertex v = 0; v < d.order(); ++v) {
    deg[v] = d.out_degree(v);
    if (deg[v] < k) {
      alive[v] = 0;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const Vertex v = queue.back();
    queue.pop_back();
    for (const Vertex u : d.in(v)) {
      if (alive[u] && --deg[u] < k) {
        alive[u] = 0;
        queue.push_back(u);
      }
    }
  }
  std::vector<Vertex> core;
  for (Vertex v = 0; v < d.order(); ++v) {
    if (alive[v]) core.push_back(v);
  }
  return core;
}

Digraph out_core(const Digraph& d, int k) { return induced_subgraph(d, out_core_vertices(d, k)); }

DegeneracyOrder degeneracy_ordering(const MultiDigraph& m) {
  const auto n = static_cast<std::size_t>(m.n);
  std::vector<std::vector<Vertex>> nbrs(n);
  for (const auto& a : m.arcs) {
    nbrs[a.tail].push_back(a.head);
    nbrs[a.head].push_back(a.tail);
  }
  std::vector<int> deg(n);
  std::set<std::pair<int, Vertex>> queue;
  for (Vertex v = 0; v < m.n; ++v) {
    deg[v] = static_cast<int>(nbrs[v].size());
    queue.emplace(deg[v], v);
  }
  std::vector<std::uint8_t> removed(n, 0);
  DegeneracyOrder result;
  result.order.reserve(n);
  while (!queue.empty()) {
    const auto [dv, v] = *queue.begin();
    queue.erase(queue.begin());
    removed[v] = 1;
    result.degeneracy = std::max(result.degeneracy, dv);
    result.order.push_back(v);
    for (const Vertex u : nbrs[v]) {
      if (removed[u]) continue;
      queue.erase({deg[u], u});
      queue.emplace(--deg[u], u);
    }
  }
  // Peeled last-to-first: each vertex's remaining degree at removal counts
  // exactly its neighbours that come earlier in the emitted order.
  std::reverse(result.order.begin(), result.order.end());
  return result;
}

Digraph subsample_arcs(const Digraph& d, const std::function<bool(const Arc&)>& keep, double p,
                       std::uint64_t seed) {
  std::vector<std::uint8_t> mask(d.size(), 1);
  for (ArcId i = 0; i < d.size(); ++i) {
    if (keep(d.arc(i))) {
      mask[i] = p >= 1.0 || bits_to_unit(keyed_bits(seed, 0x5ab5, i)) < p;
    }
  }
  return arc_subgraph(d, mask);
}

Digraph arc_subgraph(const Digraph& d, std::span<const std::uint8_t> keep) {
  std::vector<Arc> arcs;
  for (ArcId i = 0; i < d.size(); ++i) {
    if (keep[i]) arcs.push_back(d.arc(i));
  }
  return Digraph::from_sorted(d.order(), std::move(arcs));
}

Digraph induced_subgraph(const Digraph& d, std::span<const Vertex> vertices) {
  std::vector<std::uint8_t> in_set(static_cast<std::size_t>(d.order()), 0);
  for (const Vertex v : vertices) in_set[v] = 1;
  std::vector<std::uint8_t> keep(d.size());
  for (ArcId i = 0; i < d.size(); ++i) keep[i] = in_set[d.arc(i).tail] && in_set[d.arc(i).head];
  return arc_subgraph(d, keep);
}

Digraph trim_out_degrees(const Digraph& d, std::span<const int> limits, std::uint64_t seed) {
  std::vector<std::uint8_t> keep(d.size(), 0);
  std::vector<ArcId> ids;
  for (Vertex v = 0; v < d.order(); ++v) {
    const int limit = limits[v];
    if (d.out_degree(v) <= limit) {
      for (ArcId i = d.out_begin(v); i < d.out_end(v); ++i) keep[i] = 1;
      continue;
    }
    ids.resize(static_cast<std::size_t>(d.out_degree(v)));
    std::iota(ids.begin(), ids.end(), d.out_begin(v));
    Rng rng(seed, static_cast<std::uint64_t>(v));
    rng.shuffle(std::span<ArcId>(ids));
    for (int j = 0; j < limit; ++j) keep[ids[j]] = 1;
  }
  return arc_subgraph(d, keep);
}

Digraph trim_out_degrees(const Digraph& d, int limit, std::uint64_t seed) {
  std::vector<int> limits(static_cast<std::size_t>(d.order()), limit);
  return trim_out_degrees(d, limits, seed);
}

bool is_regular(const Digraph& d, int* degree) {
  if (d.order() == 0) {
    if (degree) *degree = 0;
    return true;
  }
  const int r = d.out_degree(0);
  for (Vertex v = 0; v < d.order(); ++v) {
    if (d.out_degree(v) != r || d.in_degree(v) != r) return false;
  }
  if (degree) *degree = r;
  return true;
}

}  // namespace avoid
