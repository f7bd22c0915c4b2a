#include <doctest.h>

#include <algorithm>
#include <set>

#include "avoid/cycles.hpp"
#include "avoid/patterns.hpp"
#include "avoid/reductions.hpp"
#include "support.hpp"

using namespace avoid;
using namespace testing;

namespace {

std::vector<TaggedArc> brute_H(const Digraph& d, const std::vector<Vertex>& v_set) {
  std::vector<TaggedArc> arcs;
  for (const Vertex u : v_set) {
    for (const Vertex v : v_set) {
      if (u == v) continue;
      bool share = false;
      for (const Vertex a : d.out(u)) share = share || d.has_arc(v, a);
      if (!share) continue;
      for (const Vertex w : d.out(u)) {
        bool path = false;
        for (const Vertex x : d.out(w)) path = path || d.has_arc(x, v);
        if (path) arcs.push_back({u, v, w});
      }
    }
  }
  std::sort(arcs.begin(), arcs.end());
  return arcs;
}

// Vertices 0..4 of C5_2 map to s, a, b, c, e with s->a->b->c->e and s->e.
bool brute_c5_2_from(const Digraph& d, const std::vector<Vertex>& v_set) {
  for (const Vertex s : v_set) {
    for (const Vertex a : d.out(s)) {
      for (const Vertex b : d.out(a)) {
        for (const Vertex c : d.out(b)) {
          for (const Vertex e : d.out(c)) {
            const std::set<Vertex> five{s, a, b, c, e};
            if (five.size() == 5 && d.has_arc(s, e)) return true;
          }
        }
      }
    }
  }
  return false;
}

// 1-typed triangle-free instance from a random tripartite digraph.
Restricted typed_instance(Vertex n, int deg, Rng& rng) {
  for (;;) {
    auto t = random_tripartite(n, deg, rng);
    if (has_directed_cycle(t.graph, 3)) {
      // Drop every arc on a directed triangle, keep trying if degrees collapse.
      std::vector<std::uint8_t> keep(t.graph.size(), 1);
      for (const auto& cyc : directed_cycles(t.graph, 3)) {
        for (const ArcId id : cyc) keep[id] = 0;
      }
      t.graph = arc_subgraph(t.graph, keep);
    }
    auto typed = extract_typed(t.graph, t.partition, 1);
    if (min_out_of(typed.graph) >= 2) return typed;
  }
}

}  // namespace

TEST_CASE("build_aux_H examples") {
  // u=0, v=1, a=2, w=3, x=4.
  const Digraph d = make(5, {{0, 2}, {1, 2}, {0, 3}, {3, 4}, {4, 1}});
  const auto h = build_aux_H(d, {0, 1});
  REQUIRE(h.arcs.size() == 1);
  CHECK(h.arcs[0] == TaggedArc{0, 1, 3});
  CHECK(build_aux_H(d, {}).arcs.empty());
  CHECK(build_aux_H(make(3, {{0, 1}, {2, 1}}), {0, 2}).arcs.empty());
}

TEST_CASE("build_aux_H agrees with its definition") {
  Rng rng(14);
  for (int trial = 0; trial < 150; ++trial) {
    const Digraph d = random_digraph(8, 0.3, rng);
    // Random independent set.
    std::vector<Vertex> v_set;
    for (Vertex v = 0; v < 8; ++v) {
      bool free = rng.bernoulli(0.6);
      for (const Vertex u : v_set) free = free && !d.has_arc(u, v) && !d.has_arc(v, u);
      if (free) v_set.push_back(v);
    }
    auto got = build_aux_H(d, v_set).arcs;
    std::sort(got.begin(), got.end());
    CHECK(got == brute_H(d, v_set));
  }
}

TEST_CASE("claim_order_and_sample gates and trivial cases") {
  Rng rng(1);
  const auto t = typed_instance(60, 5, rng);
  ResampleConfig cfg;
  const auto trivial = claim_order_and_sample(t.graph, {}, 2, cfg);
  CHECK(trivial.order.empty());
  CHECK(degree_stats(trivial.sampled).max_out == 2);
  CHECK(degree_stats(trivial.sampled).min_out == 2);

  const auto v_set = in_neighbourhood_of_class(t.graph, t.partition, Part::A);
  REQUIRE_FALSE(v_set.empty());
  cfg.d_trim = 100;
  cfg.p = 0.5;  // 25 < 3 * 2^4
  try {
    claim_order_and_sample(t.graph, v_set, 2, cfg);
    FAIL("expected gate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParameterInfeasible);
  }
  CHECK(claim_min_degree(2, cfg) == 48);
}

TEST_CASE("claim with proof constants on a layered instance") {
  // Classes A, B, C of 200 vertices; A -> B, B -> C and C -> B complete.
  const Vertex s = 200;
  std::vector<Arc> arcs;
  for (Vertex i = 0; i < s; ++i) {
    for (Vertex j = 0; j < s; ++j) {
      arcs.push_back({i, s + j});
      arcs.push_back({s + i, 2 * s + j});
      arcs.push_back({2 * s + i, s + j});
    }
  }
  const Digraph d = make(3 * s, arcs);
  std::vector<Part> classes(3 * s);
  for (Vertex v = 0; v < 3 * s; ++v) classes[v] = static_cast<Part>(v / s);
  const auto typed = extract_typed(d, {classes, 0, {}}, 1);
  const auto v_set = in_neighbourhood_of_class(typed.graph, typed.partition, Part::B);
  CHECK(v_set.size() == 2 * s);

  ResampleConfig cfg;
  cfg.d_trim = 192;
  cfg.p = 0.5;
  cfg.seed = 6;
  const auto claim = claim_order_and_sample(typed.graph, v_set, 2, cfg);
  CHECK(claim.order.size() == v_set.size());
  for (const Vertex v : v_set) {
    CHECK(claim.sampled.out_degree(v) >= 48);
    CHECK(claim.sampled.out_degree(v) <= 144);
  }
  const Digraph out = sequential_restriction(claim.sampled, claim.order, v_set, 2);
  for (const Vertex v : v_set) CHECK(out.out_degree(v) == 2);
  CHECK_FALSE(find_c5_2_from(out, v_set));
}

TEST_CASE("sequential_restriction with empty V") {
  Rng rng(2);
  const auto t = typed_instance(30, 4, rng);
  CHECK(sequential_restriction(t.graph, {}, {}, 2) == t.graph);
}

TEST_CASE("calibrated C5_2 removal on random typed instances") {
  Rng rng(19);
  int done = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const auto t = typed_instance(8000, 12, rng);
    const Part cls = static_cast<Part>(trial % 3);
    const auto v_set = in_neighbourhood_of_class(t.graph, t.partition, cls);
    ResampleConfig cfg;
    cfg.calibrated = true;
    cfg.d_trim = 8;
    cfg.p = 1.0;
    cfg.seed = static_cast<std::uint64_t>(trial);
    ReductionReport rep;
    Digraph out;
    try {
      out = avoid_c5_from_class(t.graph, t.partition, cls, 2, cfg, &rep);
    } catch (const Error& e) {
      // Honest failures; the success rate is checked below.
      CHECK((e.kind() == ErrorKind::RestrictionInfeasible ||
             e.kind() == ErrorKind::ResampleBudgetExceeded));
      continue;
    }
    ++done;
    CHECK(rep.verified);
    CHECK(min_out_of(out) >= 2);
    for (const Vertex v : v_set) CHECK(out.out_degree(v) == 2);
    for (const Arc& a : out.arcs()) CHECK(t.graph.has_arc(a.tail, a.head));
    CHECK_FALSE(brute_c5_2_from(out, v_set));
    CHECK(brute_c5_2_from(out, v_set) == find_c5_2_from(out, v_set).has_value());
  }
  CHECK(done >= 10);
}

TEST_CASE("find_c5_2_from agrees with enumeration") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Digraph d = random_digraph(7, 0.35, rng);
    std::vector<Vertex> v_set;
    for (Vertex v = 0; v < 7; ++v) {
      if (rng.bernoulli(0.4)) v_set.push_back(v);
    }
    CHECK(find_c5_2_from(d, v_set).has_value() == brute_c5_2_from(d, v_set));
  }
}

TEST_CASE("avoid_c5_from_class edge cases") {
  Rng rng(4);
  const auto t = typed_instance(60, 5, rng);
  ResampleConfig cfg;
  cfg.calibrated = true;
  cfg.d_trim = 4;

  // No vertex points into A: plain trim.
  std::vector<std::uint8_t> keep(t.graph.size());
  for (ArcId i = 0; i < t.graph.size(); ++i) {
    keep[i] = t.partition.classes[t.graph.arc(i).head] != Part::A;
  }
  const Digraph no_a = arc_subgraph(t.graph, keep);
  if (min_out_of(no_a) >= 2) {
    const Digraph out = avoid_c5_from_class(no_a, t.partition, Part::A, 2, cfg);
    CHECK(degree_stats(out).max_out == 2);
  }

  ResampleConfig proof;
  proof.d_trim = 100LL * 100 * 100;
  proof.p = 1e-6;
  CHECK_THROWS_AS(avoid_c5_from_class(t.graph, t.partition, Part::A, 100, proof), Error);

  const TypedPartition zero{t.partition.classes, 0, {}};
  CHECK_THROWS_AS(avoid_c5_from_class(t.graph, zero, Part::A, 2, cfg), Error);
}
