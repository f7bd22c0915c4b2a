#include "avoid/oracle.hpp"

#include <algorithm>

namespace avoid {
namespace {

class Search {
 public:
  Search(const Digraph& d, const Pattern& f, int k, const OracleCaps& caps, std::int64_t& nodes)
      : d_(d), f_(f), k_(k), caps_(caps), nodes_(nodes) {}

  std::optional<OracleResult> run() {
    const std::uint64_t all = d_.size() == 64 ? ~0ULL : (1ULL << d_.size()) - 1;
    if (k_ == 0) return zero_case();
    return branch(all, 0);
  }

 private:
  // Vertices surviving iterated removal of out-degree < k within `mask`.
  std::vector<std::uint8_t> core(std::uint64_t& mask) const {
    const auto n = static_cast<std::size_t>(d_.order());
    std::vector<std::uint8_t> alive(n, 1);
    std::vector<int> deg(n, 0);
    for (ArcId i = 0; i < d_.size(); ++i) {
      if (mask >> i & 1) ++deg[d_.arc(i).tail];
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (Vertex v = 0; v < d_.order(); ++v) {
        if (alive[v] && deg[v] < k_) {
          alive[v] = 0;
          changed = true;
          for (ArcId i = 0; i < d_.size(); ++i) {
            const auto& a = d_.arc(i);
            if ((mask >> i & 1) && (a.head == v || a.tail == v)) {
              mask &= ~(1ULL << i);
              if (a.head == v && alive[a.tail]) --deg[a.tail];
            }
          }
        }
      }
    }
    return alive;
  }

  Digraph graph_of(std::uint64_t mask) const {
    std::vector<std::uint8_t> keep(d_.size());
    for (ArcId i = 0; i < d_.size(); ++i) keep[i] = mask >> i & 1;
    return arc_subgraph(d_, keep);
  }

  void count_node() {
    if (++nodes_ > caps_.max_nodes_expanded) {
      throw Error(ErrorKind::BudgetExceeded,
                  "more than " + std::to_string(caps_.max_nodes_expanded) + " search nodes");
    }
  }

  std::optional<OracleResult> branch(std::uint64_t mask, std::uint64_t forced) {
    count_node();
    const auto alive = core(mask);
    if ((mask & forced) != forced) return std::nullopt;
    std::vector<Vertex> vertices;
    for (Vertex v = 0; v < d_.order(); ++v) {
      if (alive[v]) vertices.push_back(v);
    }
    if (vertices.empty()) return std::nullopt;
    const Digraph g = graph_of(mask);
    MatchDomains domains;
    domains.allowed.assign(static_cast<std::size_t>(f_.graph.order()), alive);
    const auto copy = find_pattern(g, f_, &domains);
    if (!copy) return OracleResult{k_, std::move(vertices), g, nodes_};

    std::vector<ArcId> arcs;
    for (const auto& fa : f_.graph.arcs()) {
      arcs.push_back(d_.find_arc((*copy)[fa.tail], (*copy)[fa.head]));
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    std::stable_sort(arcs.begin(), arcs.end(), [&](ArcId a, ArcId b) {
      return g.out_degree(d_.arc(a).tail) < g.out_degree(d_.arc(b).tail);
    });
    std::uint64_t now_forced = forced;
    for (const ArcId id : arcs) {
      const std::uint64_t bit = 1ULL << id;
      if (forced & bit) continue;
      if (auto found = branch(mask & ~bit, now_forced)) return found;
      now_forced |= bit;
    }
    return std::nullopt;
  }

  std::optional<OracleResult> zero_case() {
    count_node();
    if (d_.order() == 0) return std::nullopt;
    if (f_.graph.order() >= 2) {
      OracleResult r{0, {0}, Digraph(d_.order()), nodes_};
      return r;
    }
    return std::nullopt;
  }

  const Digraph& d_;
  const Pattern& f_;
  int k_;
  const OracleCaps& caps_;
  std::int64_t& nodes_;
};

void check_caps(const Digraph& d, const OracleCaps& caps) {
  if (d.order() > caps.max_vertices || d.size() > static_cast<std::size_t>(caps.max_arcs) ||
      d.size() > 64) {
    throw Error(ErrorKind::TooLarge, std::to_string(d.order()) + " vertices and " +
                                         std::to_string(d.size()) + " arcs exceed the oracle caps");
  }
}

}  // namespace

std::optional<OracleResult> f_free_subgraph(const Digraph& d, const Pattern& f, int k,
                                            const OracleCaps& caps) {
  check_caps(d, caps);
  std::int64_t nodes = 0;
  auto found = Search(d, f, std::max(k, 0), caps, nodes).run();
  if (found) found->nodes = nodes;
  return found;
}

OracleResult max_f_free_min_outdegree(const Digraph& d, const Pattern& f, const OracleCaps& caps) {
  check_caps(d, caps);
  std::int64_t nodes = 0;
  OracleResult best;
  const int top = degree_stats(d).max_out;
  for (int k = 0; k <= top; ++k) {
    auto found = Search(d, f, k, caps, nodes).run();
    if (!found) break;
    best = std::move(*found);
  }
  best.nodes = nodes;
  return best;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::UnavoidableWitness: return "unavoidable_witness";
    case Verdict::AvoidableHere: return "avoidable_here";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

UnavoidableCheck check_unavoidable(const Digraph& d, const Pattern& f, int k,
                                   const OracleCaps& caps) {
  UnavoidableCheck out;
  try {
    check_caps(d, caps);
    std::int64_t nodes = 0;
    auto found = Search(d, f, std::max(k, 0), caps, nodes).run();
    out.nodes = nodes;
    if (found) {
      out.verdict = Verdict::AvoidableHere;
      out.witness = std::move(found);
    } else {
      out.verdict = Verdict::UnavoidableWitness;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExceeded && e.kind() != ErrorKind::TooLarge) throw;
    out.verdict = Verdict::Unknown;
    out.note = e.what();
  }
  return out;
}

VerificationReport verify(const Digraph& d, const VerificationSpec& spec) {
  VerificationReport report;
  const auto add = [&](CheckResult c) {
    report.passed = report.passed && c.passed;
    report.checks.push_back(std::move(c));
  };

  CheckResult degree{"min_out>=" + std::to_string(spec.min_out), true, {}, {}};
  for (Vertex v = 0; v < d.order(); ++v) {
    if (d.out_degree(v) < spec.min_out) {
      degree.passed = false;
      degree.detail = "vertex " + std::to_string(v) + " has out-degree " +
                      std::to_string(d.out_degree(v));
      degree.witness = {v};
      break;
    }
  }
  add(std::move(degree));

  for (const auto& f : spec.forbidden) {
    CheckResult c{"free_of:" + f.name, true, {}, {}};
    if (auto copy = find_pattern(d, f)) {
      c.passed = false;
      c.detail = "copy found";
      c.witness = std::move(*copy);
    }
    add(std::move(c));
  }
  if (spec.typed) {
    const auto why = check_typed(d, *spec.typed);
    add({"typed:s=" + std::to_string(spec.typed->s), why.empty(), why, {}});
  }
  if (spec.layered) {
    const auto why = check_layered_partition(d, *spec.layered, spec.min_out);
    add({"layered:t=" + std::to_string(spec.layered->t), why.empty(), why, {}});
  }
  return report;
}

}  // namespace avoid
