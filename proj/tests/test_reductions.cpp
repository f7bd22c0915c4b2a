#include <doctest.h>

#include <cmath>
#include <functional>

#include "avoid/constructions.hpp"
#include "avoid/cycles.hpp"
#include "avoid/patterns.hpp"
#include "avoid/reductions.hpp"
#include "support.hpp"

using namespace avoid;
using namespace testing;

namespace {

// Directed cycles of the given length, counted as vertex sequences / length.
std::size_t brute_directed_cycles(const Digraph& d, int length) {
  std::size_t closed = 0;
  std::vector<Vertex> walk;
  std::vector<bool> used(static_cast<std::size_t>(d.order()));
  std::function<void(Vertex)> extend = [&](Vertex v) {
    if (static_cast<int>(walk.size()) == length) {
      closed += d.has_arc(v, walk.front());
      return;
    }
    for (const Vertex w : d.out(v)) {
      if (used[w]) continue;
      used[w] = true;
      walk.push_back(w);
      extend(w);
      walk.pop_back();
      used[w] = false;
    }
  };
  for (Vertex s = 0; s < d.order(); ++s) {
    used[s] = true;
    walk = {s};
    extend(s);
    used[s] = false;
  }
  return closed / static_cast<std::size_t>(length);
}

bool differently_coloured_enough(const Digraph& d, const std::vector<Part>& c) {
  for (Vertex v = 0; v < d.order(); ++v) {
    int diff = 0;
    for (const Vertex w : d.out(v)) diff += c[w] != c[v];
    if (3 * diff < d.out_degree(v)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("directed and underlying cycle enumeration") {
  Rng rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    const Digraph d = random_digraph(7, 0.3, rng);
    for (int len = 2; len <= 5; ++len) {
      const auto cycles = directed_cycles(d, len);
      CHECK(cycles.size() == brute_directed_cycles(d, len));
      CHECK(has_directed_cycle(d, len) == !cycles.empty());
      for (const auto& c : cycles) {
        REQUIRE(static_cast<int>(c.size()) == len);
        for (std::size_t i = 0; i < c.size(); ++i) {
          CHECK(d.arc(c[i]).head == d.arc(c[(i + 1) % c.size()]).tail);
        }
      }
    }
    const auto tri = underlying_cycles(d, 3);
    bool any = false;
    for (const char* name : {"C3_1", "C3_2"}) any = any || brute_contains(d, cycle_orientation(name).graph);
    CHECK(!tri.empty() == any);
  }
}

TEST_CASE("majority colouring") {
  ResampleConfig cfg;
  cfg.seed = 1;
  CHECK(differently_coloured_enough(triangle(), majority_3_coloring(triangle(), cfg)));
  const Digraph empty(4);
  CHECK(majority_3_coloring(empty, cfg).size() == 4);
  const Digraph d = random_regular_digraph(300, 12, 6);
  const auto c = majority_3_coloring(d, cfg);
  CHECK(differently_coloured_enough(d, c));
  CHECK(majority_violation(d, c) == -1);
}

TEST_CASE("stronger colouring target") {
  const Digraph d = random_regular_digraph(2000, 16, 2);
  ResampleConfig cfg;
  cfg.seed = 3;
  cfg.max_rounds = 1'000'000;
  const auto run = majority_coloring(d, cfg, 3, 0.6);
  for (Vertex v = 0; v < d.order(); ++v) {
    int diff = 0;
    for (const Vertex w : d.out(v)) diff += run.coloring[w] != run.coloring[v];
    CHECK(diff >= 10);
  }
  CHECK_THROWS_AS(majority_coloring(d, cfg, 3, 1.5), Error);
}

TEST_CASE("tripartite_restrict") {
  const std::vector<Part> abc{Part::A, Part::B, Part::C};
  const auto r = tripartite_restrict(triangle(), abc);
  CHECK(r.graph == triangle());
  CHECK(r.partition.s == 0);

  const Digraph one = make(3, {{0, 1}, {0, 2}, {1, 2}, {2, 0}, {1, 0}});
  const std::vector<Part> c{Part::A, Part::A, Part::B};
  const auto s = tripartite_restrict(one, c);
  CHECK_FALSE(s.graph.has_arc(0, 1));
  CHECK_FALSE(s.graph.has_arc(1, 0));
  CHECK(s.graph.size() == 3);

  CHECK_THROWS_AS(tripartite_restrict(triangle(), {Part::A, Part::A, Part::A}), Error);

  const Digraph d = random_regular_digraph(500, 15, 4);
  ResampleConfig cfg;
  cfg.seed = 8;
  const auto rr = tripartite_restrict(d, majority_3_coloring(d, cfg));
  CHECK(3 * min_out_of(rr.graph) >= min_out_of(d));
  CHECK(check_typed(rr.graph, rr.partition).empty());
}

TEST_CASE("extract_typed examples") {
  const TypedPartition abc{{Part::A, Part::B, Part::C}, 0, {}};
  const auto r = extract_typed(triangle(), abc, 1);
  CHECK(r.graph == triangle());
  CHECK(r.partition.s == 1);
  CHECK(r.partition.types[0] == std::vector<Part>{Part::B});
  CHECK(r.partition.types[1] == std::vector<Part>{Part::C});
  CHECK(r.partition.types[2] == std::vector<Part>{Part::A});

  Rng rng(5);
  const auto t = random_tripartite(90, 6, rng);
  const auto zero = extract_typed(t.graph, t.partition, 0);
  CHECK(zero.graph == t.graph);
}

TEST_CASE("typing keeps a ninth of the degree and kills the easy orientations") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_tripartite(300, 27, rng);
    const int before = min_out_of(t.graph);
    const auto r = extract_typed(t.graph, t.partition, 2);
    CHECK(check_typed(r.graph, r.partition).empty());
    CHECK(min_out_of(r.graph) >= (before + 8) / 9);
    for (const Arc& a : r.graph.arcs()) CHECK(t.graph.has_arc(a.tail, a.head));
    for (const char* name : {"C3_2", "C5_3", "C5_4"}) {
      CHECK_FALSE(find_pattern(r.graph, cycle_orientation(name)));
    }
  }
}

TEST_CASE("check_typed detects broken types") {
  const TypedPartition bad{{Part::A, Part::B, Part::C}, 1, {{Part::C}, {Part::C}, {Part::A}}};
  CHECK_FALSE(check_typed(triangle(), bad).empty());
  const TypedPartition same{{Part::A, Part::A, Part::C}, 0, {}};
  CHECK_FALSE(check_typed(triangle(), same).empty());
}

TEST_CASE("avoid_directed_cycles") {
  SUBCASE("already free") {
    // Circulant on Z_7 with steps 1 and 2: three steps sum to 3..6, never 0.
    std::vector<Arc> arcs;
    for (Vertex v = 0; v < 7; ++v) {
      arcs.push_back({v, (v + 1) % 7});
      arcs.push_back({v, (v + 2) % 7});
    }
    const Digraph free = make(7, arcs);
    ResampleConfig cfg;
    cfg.d_trim = 2;
    ReductionReport rep;
    REQUIRE_FALSE(has_directed_cycle(free, 3));
    const Digraph out = avoid_directed_cycles(free, {3}, 2, cfg, &rep);
    CHECK(rep.rounds == 0);
    CHECK(rep.verified);
    CHECK(out == free);
  }
  SUBCASE("triangle cannot lose an arc") {
    ResampleConfig cfg;
    cfg.d_trim = 1;
    cfg.max_rounds = 100;
    cfg.restarts = 1;
    try {
      avoid_directed_cycles(triangle(), {3}, 1, cfg);
      FAIL("expected failure");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ResampleBudgetExceeded);
    }
  }
  SUBCASE("random regular host") {
    const Digraph d = random_regular_digraph(2000, 60, 7);
    ResampleConfig cfg;
    cfg.seed = 3;
    cfg.d_trim = 12;
    cfg.p = 0.5;
    cfg.max_rounds = 1'000'000;
    const Digraph out = avoid_directed_cycles(d, {3, 5}, 2, cfg);
    CHECK(min_out_of(out) >= 2);
    CHECK_FALSE(has_directed_cycle(out, 3));
    CHECK_FALSE(has_directed_cycle(out, 5));
    for (const Arc& a : out.arcs()) CHECK(d.has_arc(a.tail, a.head));
  }
  SUBCASE("gates") {
    ResampleConfig cfg;
    cfg.d_trim = 4;
    cfg.p = 0.25;
    CHECK_THROWS_AS(avoid_directed_cycles(random_regular_digraph(50, 6, 1), {3}, 2, cfg), Error);
    cfg.p = 1.0;
    cfg.d_trim = 7;
    CHECK_THROWS_AS(avoid_directed_cycles(random_regular_digraph(50, 6, 1), {3}, 2, cfg), Error);
  }
}
