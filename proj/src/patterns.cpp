#include "avoid/patterns.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <limits>
#include <numeric>
#include <set>

#include "avoid/error.hpp"

namespace avoid {
namespace {

Pattern make_pattern(std::string name, Vertex n, std::vector<Arc> arcs) {
  return Pattern{build_digraph(n, arcs), std::move(name)};
}

bool parse_int(std::string_view s, int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::vector<Vertex>> underlying_neighbours(const Digraph& d) {
  std::vector<std::vector<Vertex>> nbrs(static_cast<std::size_t>(d.order()));
  for (const auto& a : d.arcs()) {
    nbrs[a.tail].push_back(a.head);
    nbrs[a.head].push_back(a.tail);
  }
  for (auto& row : nbrs) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return nbrs;
}

struct StepPlan {
  Vertex vertex;
  // Earlier pattern vertices joined to this one, and how.
  std::vector<std::pair<Vertex, bool>> out_to;  // (y, true): arc vertex -> y
  std::vector<Vertex> in_from;                  // arc y -> vertex
};

class Matcher {
 public:
  Matcher(const Digraph& host, const Digraph& pattern, const MatchDomains* domains)
      : host_(host), pattern_(pattern), domains_(domains) {
    plan();
  }

  std::optional<Embedding> run() {
    const auto k = static_cast<std::size_t>(pattern_.order());
    if (k == 0) return Embedding{};
    if (pattern_.order() > host_.order()) return std::nullopt;
    image_.assign(k, -1);
    used_.assign(static_cast<std::size_t>(host_.order()), 0);
    if (extend(0)) return image_;
    return std::nullopt;
  }

 private:
  void plan() {
    const Vertex k = pattern_.order();
    const auto nbrs = underlying_neighbours(pattern_);
    std::vector<std::uint8_t> placed(static_cast<std::size_t>(k), 0);
    std::vector<int> links(static_cast<std::size_t>(k), 0);
    for (Vertex step = 0; step < k; ++step) {
      Vertex best = -1;
      for (Vertex x = 0; x < k; ++x) {
        if (placed[x]) continue;
        if (best < 0) {
          best = x;
          continue;
        }
        const auto deg = [&](Vertex y) { return pattern_.out_degree(y) + pattern_.in_degree(y); };
        if (links[x] > links[best] || (links[x] == links[best] && deg(x) > deg(best))) best = x;
      }
      placed[best] = 1;
      for (const Vertex y : nbrs[best]) ++links[y];
      StepPlan s{best, {}, {}};
      for (const auto& p : steps_) {
        if (pattern_.has_arc(best, p.vertex)) s.out_to.emplace_back(p.vertex, true);
        if (pattern_.has_arc(p.vertex, best)) s.in_from.push_back(p.vertex);
      }
      steps_.push_back(std::move(s));
    }
  }

  bool admissible(const StepPlan& s, Vertex c) const {
    if (used_[c]) return false;
    if (host_.out_degree(c) < pattern_.out_degree(s.vertex)) return false;
    if (host_.in_degree(c) < pattern_.in_degree(s.vertex)) return false;
    if (domains_ && static_cast<std::size_t>(s.vertex) < domains_->allowed.size()) {
      const auto& mask = domains_->allowed[s.vertex];
      if (!mask.empty() && !mask[c]) return false;
    }
    for (const auto& [y, _] : s.out_to) {
      if (!host_.has_arc(c, image_[y])) return false;
    }
    for (const Vertex y : s.in_from) {
      if (!host_.has_arc(image_[y], c)) return false;
    }
    return true;
  }

  bool try_candidate(std::size_t depth, Vertex c) {
    const auto& s = steps_[depth];
    if (!admissible(s, c)) return false;
    image_[s.vertex] = c;
    used_[c] = 1;
    if (extend(depth + 1)) return true;
    used_[c] = 0;
    image_[s.vertex] = -1;
    return false;
  }

  bool extend(std::size_t depth) {
    if (depth == steps_.size()) return true;
    const auto& s = steps_[depth];
    // Candidates come from the adjacency of an already matched neighbour.
    if (!s.in_from.empty()) {
      for (const Vertex c : host_.out(image_[s.in_from.front()])) {
        if (try_candidate(depth, c)) return true;
      }
      return false;
    }
    if (!s.out_to.empty()) {
      for (const Vertex c : host_.in(image_[s.out_to.front().first])) {
        if (try_candidate(depth, c)) return true;
      }
      return false;
    }
    for (Vertex c = 0; c < host_.order(); ++c) {
      if (try_candidate(depth, c)) return true;
    }
    return false;
  }

  const Digraph& host_;
  const Digraph& pattern_;
  const MatchDomains* domains_;
  std::vector<StepPlan> steps_;
  Embedding image_;
  std::vector<std::uint8_t> used_;
};

}  // namespace

Pattern cycle_orientation(std::string_view name) {
  if (name == "C3_1") return make_pattern("C3_1", 3, {{0, 1}, {1, 2}, {2, 0}});
  if (name == "C3_2") return make_pattern("C3_2", 3, {{0, 1}, {1, 2}, {0, 2}});
  if (name == "C5_1") return make_pattern("C5_1", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  if (name == "C5_2") return make_pattern("C5_2", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
  if (name == "C5_3") return make_pattern("C5_3", 5, {{0, 1}, {1, 2}, {2, 3}, {4, 3}, {0, 4}});
  if (name == "C5_4") return make_pattern("C5_4", 5, {{0, 1}, {1, 2}, {3, 2}, {3, 4}, {0, 4}});
  throw Error(ErrorKind::UnknownPattern, std::string(name));
}

Pattern one_directed_bipartite(int a, int b) {
  if (a < 1 || b < 1) throw Error(ErrorKind::ParameterInfeasible, "bipartite sides must be >= 1");
  std::vector<Arc> arcs;
  for (Vertex x = 0; x < a; ++x) {
    for (Vertex y = 0; y < b; ++y) arcs.push_back({x, a + y});
  }
  return make_pattern("K_onedir_" + std::to_string(a) + "_" + std::to_string(b), a + b,
                      std::move(arcs));
}

Pattern single_arc() { return make_pattern("arc", 2, {{0, 1}}); }

Pattern directed_path(int vertices) {
  if (vertices < 1) throw Error(ErrorKind::ParameterInfeasible, "path needs a vertex");
  std::vector<Arc> arcs;
  for (Vertex v = 0; v + 1 < vertices; ++v) arcs.push_back({v, v + 1});
  return make_pattern("dipath_" + std::to_string(vertices), vertices, std::move(arcs));
}

Pattern pattern_by_name(std::string_view name) {
  if (name == "arc") return single_arc();
  if (name.starts_with("dipath_")) {
    int n = 0;
    if (parse_int(name.substr(7), n) && n >= 1) return directed_path(n);
  }
  if (name.starts_with("K_onedir_")) {
    const auto rest = name.substr(9);
    const auto sep = rest.find('_');
    int a = 0;
    int b = 0;
    if (sep != std::string_view::npos && parse_int(rest.substr(0, sep), a) &&
        parse_int(rest.substr(sep + 1), b) && a >= 1 && b >= 1) {
      return one_directed_bipartite(a, b);
    }
  }
  return cycle_orientation(name);
}

std::optional<Embedding> find_pattern(const Digraph& d, const Digraph& f,
                                      const MatchDomains* domains) {
  return Matcher(d, f, domains).run();
}

std::optional<Embedding> find_pattern(const Digraph& d, const Pattern& f,
                                      const MatchDomains* domains) {
  return find_pattern(d, f.graph, domains);
}

std::optional<HeightFunction> compute_height_function(const Digraph& f) {
  const auto n = static_cast<std::size_t>(f.order());
  constexpr int unset = std::numeric_limits<int>::min();
  std::vector<int> h(n, unset);
  std::vector<Vertex> component;
  for (Vertex root = 0; root < f.order(); ++root) {
    if (h[root] != unset) continue;
    component.clear();
    h[root] = 0;
    std::deque<Vertex> queue{root};
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      component.push_back(v);
      for (const Vertex w : f.out(v)) {
        if (h[w] == unset) {
          h[w] = h[v] + 1;
          queue.push_back(w);
        } else if (h[w] != h[v] + 1) {
          return std::nullopt;
        }
      }
      for (const Vertex w : f.in(v)) {
        if (h[w] == unset) {
          h[w] = h[v] - 1;
          queue.push_back(w);
        } else if (h[w] != h[v] - 1) {
          return std::nullopt;
        }
      }
    }
    int low = 0;
    for (const Vertex v : component) low = std::min(low, h[v]);
    for (const Vertex v : component) h[v] -= low;
  }
  return HeightFunction{std::move(h)};
}

bool is_oriented_forest(const Digraph& f) {
  std::vector<Vertex> parent(static_cast<std::size_t>(f.order()));
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& a : f.arcs()) {
    const Vertex ra = find(a.tail);
    const Vertex rb = find(a.head);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

namespace {

// BFS tree of the underlying graph from `source`: parent pointers and distances.
void underlying_bfs(const Digraph& f, Vertex source, std::vector<Vertex>& parent,
                    std::vector<int>& dist) {
  parent.assign(static_cast<std::size_t>(f.order()), -1);
  dist.assign(static_cast<std::size_t>(f.order()), -1);
  dist[source] = 0;
  std::deque<Vertex> queue{source};
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    const auto visit = [&](Vertex w) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        parent[w] = v;
        queue.push_back(w);
      }
    };
    for (const Vertex w : f.out(v)) visit(w);
    for (const Vertex w : f.in(v)) visit(w);
  }
}

}  // namespace

GroundedCertificate is_grounded_forest(const Digraph& f) {
  if (!is_oriented_forest(f)) {
    throw Error(ErrorKind::NotAForest, "underlying graph contains a cycle");
  }
  auto heights = compute_height_function(f).value();
  auto& h = heights.heights;
  std::vector<Vertex> heavy;
  for (Vertex v = 0; v < f.order(); ++v) {
    if (f.in_degree(v) >= 2) heavy.push_back(v);
  }

  GroundedCertificate cert;
  std::vector<Vertex> parent;
  std::vector<int> dist;
  int best = std::numeric_limits<int>::max();
  for (const Vertex u : heavy) {
    underlying_bfs(f, u, parent, dist);
    for (const Vertex v : heavy) {
      if (v <= u || dist[v] < 0 || h[u] == h[v] || dist[v] >= best) continue;
      best = dist[v];
      cert.verdict = GroundedVerdict::NotGrounded;
      cert.u = u;
      cert.v = v;
      cert.path.clear();
      for (Vertex x = v; x != -1; x = parent[x]) cert.path.push_back(x);
      std::reverse(cert.path.begin(), cert.path.end());
    }
  }
  if (cert.verdict == GroundedVerdict::NotGrounded) {
    cert.forward = 0;
    cert.backward = 0;
    for (std::size_t i = 0; i + 1 < cert.path.size(); ++i) {
      if (f.has_arc(cert.path[i], cert.path[i + 1])) {
        ++cert.forward;
      } else {
        ++cert.backward;
      }
    }
    return cert;
  }

  // Shift each component so that its in-degree >= 2 vertices sit at a common level.
  std::vector<int> comp(static_cast<std::size_t>(f.order()), -1);
  int comps = 0;
  for (Vertex r = 0; r < f.order(); ++r) {
    if (comp[r] >= 0) continue;
    underlying_bfs(f, r, parent, dist);
    for (Vertex v = 0; v < f.order(); ++v) {
      if (dist[v] >= 0) comp[v] = comps;
    }
    ++comps;
  }
  std::vector<int> level(static_cast<std::size_t>(comps), std::numeric_limits<int>::min());
  int top = 0;
  for (const Vertex v : heavy) {
    level[comp[v]] = h[v];
    top = std::max(top, h[v]);
  }
  for (Vertex v = 0; v < f.order(); ++v) {
    if (level[comp[v]] != std::numeric_limits<int>::min()) h[v] += top - level[comp[v]];
  }
  cert.heights = std::move(heights);
  return cert;
}

bool certificate_holds(const Digraph& f, const GroundedCertificate& cert) {
  if (!is_oriented_forest(f)) return false;
  if (cert.verdict == GroundedVerdict::Grounded) {
    const auto& h = cert.heights.heights;
    if (h.size() != static_cast<std::size_t>(f.order())) return false;
    for (const auto& a : f.arcs()) {
      if (h[a.head] != h[a.tail] + 1) return false;
    }
    std::optional<int> common;
    for (Vertex v = 0; v < f.order(); ++v) {
      if (f.in_degree(v) < 2) continue;
      if (common && *common != h[v]) return false;
      common = h[v];
    }
    return true;
  }
  if (cert.u < 0 || cert.v < 0 || cert.u >= f.order() || cert.v >= f.order()) return false;
  if (f.in_degree(cert.u) < 2 || f.in_degree(cert.v) < 2) return false;
  if (cert.path.size() < 2 || cert.path.front() != cert.u || cert.path.back() != cert.v) {
    return false;
  }
  std::set<Vertex> seen(cert.path.begin(), cert.path.end());
  if (seen.size() != cert.path.size()) return false;
  int forward = 0;
  int backward = 0;
  for (std::size_t i = 0; i + 1 < cert.path.size(); ++i) {
    if (f.has_arc(cert.path[i], cert.path[i + 1])) {
      ++forward;
    } else if (f.has_arc(cert.path[i + 1], cert.path[i])) {
      ++backward;
    } else {
      return false;
    }
  }
  return forward == cert.forward && backward == cert.backward && forward != backward;
}

std::uint64_t canonical_form(const Digraph& d) {
  const Vertex n = d.order();
  if (n > 8) throw Error(ErrorKind::TooLarge, "canonical form limited to 8 vertices");
  std::vector<Vertex> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  do {
    // perm[i] is the original vertex placed at position i.
    std::uint64_t code = 0;
    for (Vertex i = 0; i < n; ++i) {
      for (Vertex j = 0; j < n; ++j) {
        code <<= 1;
        if (i != j && d.has_arc(perm[i], perm[j])) code |= 1;
      }
    }
    best = std::min(best, code);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool isomorphic(const Digraph& a, const Digraph& b) {
  return a.order() == b.order() && a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

std::vector<Pattern> enumerate_orientations(int length) {
  if (length < 3 || length > 8) {
    throw Error(ErrorKind::ParameterInfeasible, "cycle length must lie in [3, 8]");
  }
  std::vector<Pattern> catalog;
  for (const char* name : {"C3_1", "C3_2", "C5_1", "C5_2", "C5_3", "C5_4"}) {
    catalog.push_back(cycle_orientation(name));
  }
  std::set<std::uint64_t> seen;
  std::vector<Pattern> result;
  for (unsigned mask = 0; mask < (1u << length); ++mask) {
    std::vector<Arc> arcs;
    for (Vertex i = 0; i < length; ++i) {
      const Vertex j = (i + 1) % length;
      if (mask & (1u << i)) {
        arcs.push_back({i, j});
      } else {
        arcs.push_back({j, i});
      }
    }
    auto g = build_digraph(length, arcs);
    if (!seen.insert(canonical_form(g)).second) continue;
    std::string name = "C" + std::to_string(length) + "_o" + std::to_string(result.size() + 1);
    for (const auto& known : catalog) {
      if (isomorphic(known.graph, g)) name = known.name;
    }
    result.push_back({std::move(g), std::move(name)});
  }
  return result;
}

std::optional<int> shortest_underlying_cycle(const Digraph& d) {
  for (const auto& a : d.arcs()) {
    if (d.has_arc(a.head, a.tail)) return 2;
  }
  const auto nbrs = underlying_neighbours(d);
  int best = std::numeric_limits<int>::max();
  std::vector<int> dist;
  std::vector<Vertex> parent;
  for (Vertex root = 0; root < d.order(); ++root) {
    dist.assign(static_cast<std::size_t>(d.order()), -1);
    parent.assign(static_cast<std::size_t>(d.order()), -1);
    dist[root] = 0;
    std::deque<Vertex> queue{root};
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      for (const Vertex w : nbrs[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          parent[w] = v;
          queue.push_back(w);
        } else if (parent[v] != w) {
          best = std::min(best, dist[v] + dist[w] + 1);
        }
      }
    }
  }
  if (best == std::numeric_limits<int>::max()) return std::nullopt;
  return best;
}

}  // namespace avoid
