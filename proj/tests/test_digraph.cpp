#include <doctest.h>

#include <algorithm>
#include <set>

#include "avoid/error.hpp"
#include "support.hpp"

using namespace avoid;
using namespace testing;

TEST_CASE("build_digraph") {
  const Digraph t = triangle();
  CHECK(t.order() == 3);
  CHECK(t.size() == 3);
  CHECK(t.has_arc(2, 0));

  const Digraph dup = make(2, {{0, 1}, {0, 1}});
  CHECK(dup.size() == 1);
  CHECK(dup.has_arc(0, 1));

  try {
    make(2, {{0, 0}});
    FAIL("self-loop accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArc);
  }
  CHECK_THROWS_AS(make(2, {{0, 2}}), Error);
}

TEST_CASE("degree_stats") {
  CHECK(degree_stats(triangle()) == DegreeStats{1, 1, 1, 1});
  const auto s = degree_stats(make(2, {{0, 1}}));
  CHECK(s.min_out == 0);
  CHECK(s.max_out == 1);
  CHECK(s.min_in == 0);
  CHECK(s.max_in == 1);
}

TEST_CASE("reachable_set") {
  const std::vector<Vertex> zero{0};
  CHECK(reachable_set(triangle(), zero, 2) == std::vector<Vertex>{2});
  CHECK(reachable_set(triangle(), zero, 0) == zero);
  const Digraph path = make(3, {{0, 1}, {1, 2}});
  const std::vector<Vertex> two{2};
  CHECK(reachable_set(path, two, 1, Direction::Backward) == std::vector<Vertex>{1});
}

TEST_CASE("reachable_set matches walk enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Digraph d = random_digraph(7, 0.3, rng);
    const Vertex s = static_cast<Vertex>(rng.below(7));
    const int len = static_cast<int>(rng.below(4));
    std::set<Vertex> frontier{s};
    for (int i = 0; i < len; ++i) {
      std::set<Vertex> next;
      for (const Arc& a : d.arcs()) {
        if (frontier.count(a.tail)) next.insert(a.head);
      }
      frontier = next;
    }
    const std::vector<Vertex> start{s};
    const auto got = reachable_set(d, start, len);
    CHECK(std::set<Vertex>(got.begin(), got.end()) == frontier);
  }
}

TEST_CASE("out_core") {
  CHECK(out_core(make(3, {{0, 1}, {1, 2}}), 1).size() == 0);
  CHECK(out_core(triangle(), 1) == triangle());
  const Digraph pendant = make(4, {{0, 1}, {1, 2}, {2, 0}, {3, 0}});
  CHECK(out_core_vertices(pendant, 1).size() == 4);
}

TEST_CASE("out_core is the largest fixed point") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Digraph d = random_digraph(6, 0.35, rng);
    const int k = 1 + static_cast<int>(rng.below(2));
    // Largest vertex subset whose induced subdigraph has min out-degree >= k.
    std::uint32_t best = 0;
    for (std::uint32_t mask = 1; mask < 64; ++mask) {
      bool ok = true;
      for (Vertex v = 0; v < 6 && ok; ++v) {
        if (!(mask >> v & 1)) continue;
        int deg = 0;
        for (const Vertex w : d.out(v)) deg += mask >> w & 1;
        ok = deg >= k;
      }
      if (ok) best |= mask;  // union of closed sets is closed
    }
    std::uint32_t got = 0;
    for (const Vertex v : out_core_vertices(d, k)) got |= 1u << v;
    CHECK(got == best);
  }
}

TEST_CASE("degeneracy_ordering") {
  SUBCASE("directed 4-cycle") {
    MultiDigraph m{4, {{0, 1, 0}, {1, 2, 0}, {2, 3, 0}, {3, 0, 0}}};
    const auto ord = degeneracy_ordering(m);
    std::vector<int> pos(4);
    for (int i = 0; i < 4; ++i) pos[ord.order[i]] = i;
    for (Vertex v = 0; v < 4; ++v) {
      int earlier = 0;
      for (const auto& a : m.arcs) {
        if (a.tail == v && pos[a.head] < pos[v]) ++earlier;
        if (a.head == v && pos[a.tail] < pos[v]) ++earlier;
      }
      CHECK(earlier <= 2);
    }
  }
  SUBCASE("single arc") {
    MultiDigraph m{2, {{0, 1, 0}}};
    const auto ord = degeneracy_ordering(m);
    REQUIRE(ord.order.size() == 2);
    CHECK(ord.degeneracy == 1);
  }
}

TEST_CASE("degeneracy ordering respects twice the max out-multidegree") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    MultiDigraph m{8, {}};
    const int arcs = static_cast<int>(rng.below(20));
    for (int i = 0; i < arcs; ++i) {
      const auto u = static_cast<Vertex>(rng.below(8));
      auto v = static_cast<Vertex>(rng.below(7));
      if (v >= u) ++v;
      m.arcs.push_back({u, v, static_cast<Vertex>(i)});
    }
    const auto ord = degeneracy_ordering(m);
    std::vector<int> pos(8);
    for (int i = 0; i < 8; ++i) pos[ord.order[i]] = i;
    int worst = 0;
    for (Vertex v = 0; v < 8; ++v) {
      int earlier = 0;
      for (const auto& a : m.arcs) {
        if (a.tail == v && pos[a.head] < pos[v]) ++earlier;
        if (a.head == v && pos[a.tail] < pos[v]) ++earlier;
      }
      worst = std::max(worst, earlier);
    }
    CHECK(worst == ord.degeneracy);
    CHECK(worst <= 2 * m.max_out_multidegree());
  }
}

TEST_CASE("subsample_arcs") {
  const auto all = [](const Arc&) { return true; };
  CHECK(subsample_arcs(triangle(), all, 1.0, 3) == triangle());
  CHECK(subsample_arcs(triangle(), all, 0.0, 3).size() == 0);
  CHECK(subsample_arcs(triangle(), all, 0.5, 9) == subsample_arcs(triangle(), all, 0.5, 9));
}

TEST_CASE("trim_out_degrees keeps a subset within limits") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const Digraph d = random_digraph(9, 0.5, rng);
    const int limit = static_cast<int>(rng.below(5));
    const Digraph t = trim_out_degrees(d, limit, trial);
    for (Vertex v = 0; v < d.order(); ++v) {
      CHECK(t.out_degree(v) == std::min(limit, d.out_degree(v)));
      for (const Vertex w : t.out(v)) CHECK(d.has_arc(v, w));
    }
  }
}
