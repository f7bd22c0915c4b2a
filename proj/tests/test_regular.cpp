#include <doctest.h>

#include "avoid/constructions.hpp"
#include "avoid/cycles.hpp"
#include "avoid/patterns.hpp"
#include "avoid/regular.hpp"
#include "support.hpp"

using namespace avoid;
using namespace testing;

namespace {

// Independent check of the three layered-partition invariant families.
bool layered_ok(const Digraph& d, const LayeredPartition& lp, int k) {
  const int t = lp.t;
  std::vector<int> part(static_cast<std::size_t>(d.order()), -1);
  for (int i = 0; i < t; ++i) {
    for (const Vertex v : lp.parts[i]) {
      if (part[v] != -1) return false;
      part[v] = i;
    }
  }
  for (Vertex v = 0; v < d.order(); ++v) {
    if (part[v] < 0 || d.out_degree(v) < k) return false;
    if (part[v] != 0 && d.in_degree(v) > 1) return false;
  }
  for (const Arc& a : d.arcs()) {
    if (part[a.head] != (part[a.tail] + 1) % t) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("partition probabilities") {
  const auto one = partition_probabilities(1, 5);
  CHECK(one.exact.front() == 1);
  const auto two = partition_probabilities(2, 2);
  CHECK(two.exact[1] / two.exact[0] == 12);
  for (int t = 1; t <= 6; ++t) {
    for (int k = 1; k <= 5; ++k) {
      const auto pp = partition_probabilities(t, k);
      Rational sum = 0;
      double fsum = 0;
      // Same value written as (1 - 1/r) / (1 - r^-t) * r^(i-t).
      const Rational r = 6 * k;
      Rational rt = 1;
      for (int i = 0; i < t; ++i) rt *= r;
      for (int i = 0; i < t; ++i) {
        sum += pp.exact[i];
        fsum += pp.p[i];
        if (i + 1 < t) CHECK(pp.exact[i + 1] / pp.exact[i] == r);
        Rational scale = 1;
        for (int j = i + 1; j < t; ++j) scale *= r;
        CHECK(pp.exact[i] == (1 - 1 / r) / (1 - 1 / rt) / scale);
      }
      CHECK(sum == 1);
      CHECK(std::abs(fsum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("avoid_short_cycle_regular") {
  SUBCASE("no cycles of that length") {
    const Digraph c = random_regular_digraph(40, 1, 2);
    if (!has_underlying_cycle(c, 3)) {
      ResampleConfig cfg;
      cfg.calibrated = true;
      CHECK(avoid_short_cycle_regular(c, 3, 1, cfg) == c);
    }
  }
  SUBCASE("directed triangle is impossible") {
    ResampleConfig cfg;
    cfg.calibrated = true;
    cfg.max_rounds = 200;
    cfg.restarts = 1;
    try {
      avoid_short_cycle_regular(triangle(), 3, 1, cfg);
      FAIL("expected failure");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ResampleBudgetExceeded);
    }
  }
  SUBCASE("not regular") {
    CHECK_THROWS_AS(avoid_short_cycle_regular(make(3, {{0, 1}, {1, 2}}), 3, 1, {}), Error);
  }
  SUBCASE("random regular host") {
    const Digraph d = random_regular_digraph(600, 40, 5);
    ResampleConfig cfg;
    cfg.p = 1.0 / 8;
    cfg.seed = 2;
    ReductionReport rep;
    const Digraph out = avoid_short_cycle_regular(d, 3, 2, cfg, &rep);
    CHECK(rep.verified);
    CHECK(min_out_of(out) >= 2);
    CHECK(underlying_cycles(out, 3).empty());
    for (const Arc& a : out.arcs()) CHECK(d.has_arc(a.tail, a.head));
  }
  SUBCASE("proof degree gate") {
    ResampleConfig cfg;
    cfg.p = 1.0 / 8;
    CHECK_THROWS_AS(avoid_short_cycle_regular(random_regular_digraph(100, 24, 1), 3, 2, cfg),
                    Error);
  }
}

TEST_CASE("layered_partition") {
  SUBCASE("t = 1 keeps everything") {
    const Digraph d = random_regular_digraph(50, 6, 3);
    const auto r = layered_partition(d, 1, 2, {});
    CHECK(r.graph == d);
    CHECK(r.partition.parts.size() == 1);
  }
  SUBCASE("desk instance with t = 2") {
    const Digraph d = random_regular_digraph(2000, 104, 8);
    ResampleConfig cfg;
    cfg.calibrated = true;
    cfg.seed = 4;
    ReductionReport rep;
    const auto r = layered_partition(d, 2, 2, cfg, &rep);
    CHECK(rep.verified);
    CHECK(layered_ok(r.graph, r.partition, 2));
    CHECK(check_layered_partition(r.graph, r.partition, 2).empty());
    CHECK(check_layered_balance(r.graph, r.partition).empty());
    for (const Arc& a : r.graph.arcs()) CHECK(d.has_arc(a.tail, a.head));
  }
  SUBCASE("gates") {
    ResampleConfig cfg;
    cfg.calibrated = true;
    // p_1 = 1/13 for k = 2, t = 2, so d = 16 gives p_1 d < 2k.
    CHECK_THROWS_AS(layered_partition(random_regular_digraph(200, 16, 1), 2, 2, cfg), Error);
  }
}

TEST_CASE("layered checkers reject broken partitions") {
  // 0 -> 1 -> 2 -> 0 with parts {0}, {1, 2}: arc 1 -> 2 stays inside V_2.
  const LayeredPartition lp{2, {{0}, {1, 2}}};
  CHECK_FALSE(check_layered_partition(triangle(), lp, 1).empty());
  // V_1 = {0, 2}, V_2 = {1, 3} on 0 -> 1 <- 2 and 2 -> 3: balanced.
  const Digraph anti = make(4, {{0, 1}, {2, 1}, {2, 3}});
  CHECK(check_layered_balance(anti, {3, {{0, 2}, {1, 3}, {}}}).empty());
  // V_1 = {0, 1}: the arc 0 -> 1 is an unbalanced path of one arc.
  const Digraph arc = make(3, {{0, 1}, {1, 2}});
  CHECK_FALSE(check_layered_balance(arc, {2, {{0, 1}, {2}}}).empty());
}

TEST_CASE("regular_avoid dispatch") {
  SUBCASE("directed triangle uses the cycle branch") {
    const Digraph d = random_regular_digraph(600, 40, 6);
    ResampleConfig cfg;
    cfg.seed = 1;
    const auto r = regular_avoid(d, cycle_orientation("C3_1"), 2, cfg);
    CHECK(r.branch == "cycle");
    CHECK(r.parameter == 3);
    CHECK_FALSE(find_pattern(r.graph, cycle_orientation("C3_1")));
    CHECK(min_out_of(r.graph) >= 2);
  }
  SUBCASE("grounded forest is refused with a certificate") {
    const Pattern path = directed_path(3);
    try {
      regular_avoid(random_regular_digraph(30, 4, 1), path, 2, {});
      FAIL("expected NotRegularAvoidable");
    } catch (const NotRegularAvoidable& e) {
      CHECK(e.certificate().verdict == GroundedVerdict::Grounded);
      CHECK(certificate_holds(path.graph, e.certificate()));
    }
  }
  SUBCASE("non-grounded forest uses the layered branch") {
    const Pattern f{make(5, {{0, 2}, {1, 2}, {2, 3}, {4, 3}}), "forest"};
    const auto cert = is_grounded_forest(f.graph);
    REQUIRE(cert.verdict == GroundedVerdict::NotGrounded);
    CHECK(regular_avoid_parts(cert) == 2);
    ResampleConfig cfg;
    cfg.calibrated = true;
    cfg.seed = 3;
    const auto r = regular_avoid(random_regular_digraph(2000, 104, 2), f, 2, cfg);
    CHECK(r.branch == "layered");
    CHECK(r.parameter == 2);
    CHECK_FALSE(find_pattern(r.graph, f));
    CHECK(min_out_of(r.graph) >= 2);
  }
}

TEST_CASE("regular_avoid_parts follows the shortest unbalanced path") {
  // In-degree-2 vertices 2 and 5 joined by 2 -> 3 -> 4 -> 5 (three forward arcs).
  const Digraph f = make(7, {{0, 2}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {6, 5}});
  const auto cert = is_grounded_forest(f);
  REQUIRE(cert.verdict == GroundedVerdict::NotGrounded);
  CHECK(certificate_holds(f, cert));
  CHECK(regular_avoid_parts(cert) == 4);
}
