#pragma once

#include <cstddef>
#include <vector>

#include "avoid/digraph.hpp"

namespace avoid {

// Each cycle is returned once, as the ids of its arcs.
using ArcCycle = std::vector<ArcId>;

// Directed cycles with exactly `length` arcs. Throws TooLarge past `limit`.
std::vector<ArcCycle> directed_cycles(const Digraph& d, int length,
                                      std::size_t limit = static_cast<std::size_t>(-1));

// Cycles of the underlying multigraph with exactly `length` arcs, in any
// orientation. A pair of opposite arcs is a cycle of length 2.
std::vector<ArcCycle> underlying_cycles(const Digraph& d, int length,
                                        std::size_t limit = static_cast<std::size_t>(-1));

bool has_directed_cycle(const Digraph& d, int length);
bool has_underlying_cycle(const Digraph& d, int length);

}  // namespace avoid
