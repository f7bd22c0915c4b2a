#include "avoid/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "avoid/error.hpp"

namespace avoid {
namespace {

struct LineCursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 0;

  // Next non-blank, non-comment line; false at end of input.
  bool next(std::string_view& out) {
    while (pos < text.size()) {
      const auto end = text.find('\n', pos);
      const auto stop = end == std::string_view::npos ? text.size() : end;
      std::string_view row = text.substr(pos, stop - pos);
      pos = stop + 1;
      ++line;
      if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
      const auto first = row.find_first_not_of(" \t");
      if (first == std::string_view::npos || row[first] == '#') continue;
      out = row;
      return true;
    }
    return false;
  }
};

[[noreturn]] void syntax_error(int line, std::size_t column, const std::string& what) {
  throw Error(ErrorKind::SyntaxError,
              "line " + std::to_string(line) + ", column " + std::to_string(column + 1) + ": " +
                  what);
}

// Parses exactly two non-negative integers from a row.
std::pair<long long, long long> parse_pair(std::string_view row, int line) {
  long long values[2];
  std::size_t i = 0;
  for (auto& value : values) {
    while (i < row.size() && (row[i] == ' ' || row[i] == '\t')) ++i;
    const auto [ptr, ec] = std::from_chars(row.data() + i, row.data() + row.size(), value);
    if (ec != std::errc() || value < 0) syntax_error(line, i, "expected a non-negative integer");
    i = static_cast<std::size_t>(ptr - row.data());
  }
  while (i < row.size() && (row[i] == ' ' || row[i] == '\t')) ++i;
  if (i != row.size()) syntax_error(line, i, "trailing characters");
  return {values[0], values[1]};
}

}  // namespace

Digraph parse_graph_file(std::string_view text) {
  LineCursor cursor{text};
  std::string_view row;
  if (!cursor.next(row)) syntax_error(cursor.line, 0, "missing `n m` header");
  const auto [n, m] = parse_pair(row, cursor.line);
  if (n > (1LL << 30)) syntax_error(cursor.line, 0, "vertex count too large");
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!cursor.next(row)) {
      syntax_error(cursor.line, 0, "expected " + std::to_string(m) + " arcs, found " +
                                       std::to_string(i));
    }
    const auto [u, v] = parse_pair(row, cursor.line);
    if (u >= n || v >= n) {
      throw Error(ErrorKind::InvalidVertex, "line " + std::to_string(cursor.line) + ": arc (" +
                                                std::to_string(u) + "," + std::to_string(v) +
                                                ") outside [0," + std::to_string(n) + ")");
    }
    if (u == v) {
      throw Error(ErrorKind::InvalidArc,
                  "line " + std::to_string(cursor.line) + ": self-loop at " + std::to_string(u));
    }
    arcs.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  if (cursor.next(row)) syntax_error(cursor.line, 0, "unexpected data after the last arc");
  return build_digraph(static_cast<Vertex>(n), arcs);
}

std::string emit_arc_list(const Digraph& d, const std::vector<std::string>& comments) {
  std::string out;
  out.reserve(16 * (d.size() + 1));
  for (const auto& c : comments) out += "# " + c + "\n";
  out += std::to_string(d.order()) + " " + std::to_string(d.size()) + "\n";
  for (const auto& a : d.arcs()) {
    out += std::to_string(a.tail);
    out += ' ';
    out += std::to_string(a.head);
    out += '\n';
  }
  return out;
}

std::string pattern_name_comment(std::string_view text) {
  constexpr std::string_view key = "# pattern:";
  const auto at = text.find(key);
  if (at == std::string_view::npos) return {};
  auto rest = text.substr(at + key.size());
  rest = rest.substr(0, rest.find('\n'));
  const auto first = rest.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = rest.find_last_not_of(" \t\r");
  return std::string(rest.substr(first, last - first + 1));
}

std::string to_dot(const Digraph& d, std::string_view name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (Vertex v = 0; v < d.order(); ++v) os << "  " << v << ";\n";
  for (const auto& a : d.arcs()) os << "  " << a.tail << " -> " << a.head << ";\n";
  os << "}\n";
  return os.str();
}

Digraph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graph_file(buffer.str());
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

}  // namespace avoid
