#include "avoid/cycles.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "avoid/error.hpp"

namespace avoid {
namespace {

struct Link {
  Vertex to;
  std::array<ArcId, 2> arcs;
  int count;
};

std::vector<std::vector<Link>> underlying_links(const Digraph& d) {
  std::vector<std::vector<Link>> links(static_cast<std::size_t>(d.order()));
  for (Vertex v = 0; v < d.order(); ++v) {
    auto& row = links[v];
    for (ArcId id = d.out_begin(v); id < d.out_end(v); ++id) {
      row.push_back({d.arc(id).head, {id, 0}, 1});
    }
    const auto tails = d.in(v);
    const auto ids = d.in_arc_ids(v);
    for (std::size_t i = 0; i < tails.size(); ++i) row.push_back({tails[i], {ids[i], 0}, 1});
    std::sort(row.begin(), row.end(), [](const Link& a, const Link& b) { return a.to < b.to; });
    std::vector<Link> merged;
    for (const auto& l : row) {
      if (!merged.empty() && merged.back().to == l.to) {
        merged.back().arcs[1] = l.arcs[0];
        merged.back().count = 2;
      } else {
        merged.push_back(l);
      }
    }
    row = std::move(merged);
  }
  return links;
}

[[noreturn]] void too_many(std::size_t limit) {
  throw Error(ErrorKind::TooLarge, "more than " + std::to_string(limit) + " cycles");
}

class DirectedSearch {
 public:
  DirectedSearch(const Digraph& d, int length, std::size_t limit)
      : d_(d),
        length_(length),
        limit_(limit),
        on_path_(static_cast<std::size_t>(d.order()), 0),
        dist_(static_cast<std::size_t>(d.order()), kFar) {}

  std::vector<ArcCycle> run() {
    for (Vertex s = 0; s < d_.order(); ++s) {
      start_ = s;
      mark_ball();
      on_path_[s] = 1;
      walk(s);
      on_path_[s] = 0;
      for (const Vertex v : ball_) dist_[v] = kFar;
      ball_.clear();
    }
    return std::move(found_);
  }

 private:
  static constexpr std::uint8_t kFar = 255;

  // Backward distances 1 and 2 to the start, through vertices above it.
  void mark_ball() {
    for (const Vertex u : d_.in(start_)) {
      if (u > start_ && dist_[u] == kFar) {
        dist_[u] = 1;
        ball_.push_back(u);
      }
    }
    const std::size_t first = ball_.size();
    for (std::size_t i = 0; i < first; ++i) {
      for (const Vertex u : d_.in(ball_[i])) {
        if (u > start_ && dist_[u] == kFar) {
          dist_[u] = 2;
          ball_.push_back(u);
        }
      }
    }
  }

  void walk(Vertex v) {
    const int depth = static_cast<int>(path_.size());
    for (ArcId id = d_.out_begin(v); id < d_.out_end(v); ++id) {
      const Vertex w = d_.arc(id).head;
      if (depth + 1 == length_) {
        if (w == start_) {
          path_.push_back(id);
          found_.push_back(path_);
          path_.pop_back();
          if (found_.size() > limit_) too_many(limit_);
        }
        continue;
      }
      if (w <= start_ || on_path_[w]) continue;
      const int remaining = length_ - depth - 1;
      if (remaining <= 2 && dist_[w] > remaining) continue;
      on_path_[w] = 1;
      path_.push_back(id);
      walk(w);
      path_.pop_back();
      on_path_[w] = 0;
    }
  }

  const Digraph& d_;
  int length_;
  std::size_t limit_;
  Vertex start_ = 0;
  std::vector<std::uint8_t> on_path_;
  std::vector<std::uint8_t> dist_;
  std::vector<Vertex> ball_;
  ArcCycle path_;
  std::vector<ArcCycle> found_;
};

class UnderlyingSearch {
 public:
  UnderlyingSearch(const Digraph& d, int length, std::size_t limit)
      : links_(underlying_links(d)),
        length_(length),
        limit_(limit),
        on_path_(static_cast<std::size_t>(d.order()), 0) {}

  std::vector<ArcCycle> run() {
    for (Vertex s = 0; s < static_cast<Vertex>(links_.size()); ++s) {
      start_ = s;
      on_path_[s] = 1;
      steps_.clear();
      walk(s);
      on_path_[s] = 0;
    }
    return std::move(found_);
  }

 private:
  void emit() {
    // Expand every choice of arc per underlying edge.
    ArcCycle cycle(steps_.size());
    const auto expand = [&](auto&& self, std::size_t i) -> void {
      if (i == steps_.size()) {
        found_.push_back(cycle);
        if (found_.size() > limit_) too_many(limit_);
        return;
      }
      for (int c = 0; c < steps_[i]->count; ++c) {
        cycle[i] = steps_[i]->arcs[c];
        self(self, i + 1);
      }
    };
    expand(expand, 0);
  }

  void walk(Vertex v) {
    const int depth = static_cast<int>(steps_.size());
    for (const auto& l : links_[v]) {
      if (depth + 1 == length_) {
        // Fix a traversal direction: second vertex below the last one.
        if (l.to == start_ && depth >= 2 && first_ < v) {
          steps_.push_back(&l);
          emit();
          steps_.pop_back();
        }
        continue;
      }
      if (l.to <= start_ || on_path_[l.to]) continue;
      if (depth == 0) first_ = l.to;
      on_path_[l.to] = 1;
      steps_.push_back(&l);
      walk(l.to);
      steps_.pop_back();
      on_path_[l.to] = 0;
    }
  }

  std::vector<std::vector<Link>> links_;
  int length_;
  std::size_t limit_;
  Vertex start_ = 0;
  Vertex first_ = 0;
  std::vector<std::uint8_t> on_path_;
  std::vector<const Link*> steps_;
  std::vector<ArcCycle> found_;
};

}  // namespace

std::vector<ArcCycle> directed_cycles(const Digraph& d, int length, std::size_t limit) {
  if (length < 2) return {};
  return DirectedSearch(d, length, limit).run();
}

std::vector<ArcCycle> underlying_cycles(const Digraph& d, int length, std::size_t limit) {
  if (length < 2) return {};
  if (length == 2) {
    std::vector<ArcCycle> found;
    for (ArcId id = 0; id < d.size(); ++id) {
      const auto& a = d.arc(id);
      if (a.tail < a.head) {
        const ArcId back = d.find_arc(a.head, a.tail);
        if (back != d.size()) {
          found.push_back({id, back});
          if (found.size() > limit) too_many(limit);
        }
      }
    }
    return found;
  }
  return UnderlyingSearch(d, length, limit).run();
}

namespace {

// Limit 0 makes the search throw on the first hit.
bool any_cycle(const std::function<void()>& search) {
  try {
    search();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::TooLarge) return true;
    throw;
  }
  return false;
}

}  // namespace

bool has_directed_cycle(const Digraph& d, int length) {
  return any_cycle([&] { directed_cycles(d, length, 0); });
}

bool has_underlying_cycle(const Digraph& d, int length) {
  return any_cycle([&] { underlying_cycles(d, length, 0); });
}

}  // namespace avoid
