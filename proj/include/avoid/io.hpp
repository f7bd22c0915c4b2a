#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "avoid/digraph.hpp"

namespace avoid {

// Arc-list text format: optional `#` comment lines, a header line `n m`,
// then m lines `u v` with 0-based vertex ids.
Digraph parse_graph_file(std::string_view text);

// Comment lines are written verbatim after a leading "# ".
std::string emit_arc_list(const Digraph& d, const std::vector<std::string>& comments = {});

// The `# pattern: <name>` header of a pattern file, or empty when absent.
std::string pattern_name_comment(std::string_view text);

std::string to_dot(const Digraph& d, std::string_view name = "D");

Digraph read_graph_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace avoid
