#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avoid/digraph.hpp"
#include "avoid/patterns.hpp"
#include "avoid/reductions.hpp"
#include "avoid/regular.hpp"

namespace avoid {

struct OracleCaps {
  int max_vertices = 12;
  int max_arcs = 30;
  std::int64_t max_nodes_expanded = 10'000'000;
};

struct OracleResult {
  // Largest k such that some nonempty F-free subdigraph has minimum
  // out-degree k; -1 when every nonempty subdigraph contains F.
  int value = -1;
  std::vector<Vertex> witness_vertices;
  Digraph witness;  // same vertex ids as the host
  std::int64_t nodes = 0;
};

// Throws TooLarge past the size caps and BudgetExceeded past the node cap.
OracleResult max_f_free_min_outdegree(const Digraph& d, const Pattern& f,
                                      const OracleCaps& caps = {});

// Nonempty F-free subdigraph of minimum out-degree >= k, if one exists.
std::optional<OracleResult> f_free_subgraph(const Digraph& d, const Pattern& f, int k,
                                            const OracleCaps& caps = {});

enum class Verdict { UnavoidableWitness, AvoidableHere, Unknown };

std::string_view to_string(Verdict v);

struct UnavoidableCheck {
  Verdict verdict = Verdict::Unknown;
  std::optional<OracleResult> witness;  // set for AvoidableHere
  std::int64_t nodes = 0;
  std::string note;
};

UnavoidableCheck check_unavoidable(const Digraph& d, const Pattern& f, int k,
                                   const OracleCaps& caps = {});

struct VerificationSpec {
  int min_out = 0;
  std::vector<Pattern> forbidden;
  std::optional<TypedPartition> typed;
  std::optional<LayeredPartition> layered;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  std::vector<Vertex> witness;  // embedding or offending vertex
};

struct VerificationReport {
  bool passed = true;
  std::vector<CheckResult> checks;
};

VerificationReport verify(const Digraph& d, const VerificationSpec& spec);

}  // namespace avoid
