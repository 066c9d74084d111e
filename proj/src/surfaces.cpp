#include "treedecay/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "treedecay/errors.hpp"

namespace treedecay {

Face root_face(int d) {
  if (d < 2) throw std::domain_error("root_face: d must be >= 2");
  return Face{0, std::vector<int>(static_cast<std::size_t>(d), 0)};
}

// ---------------------------------------------------------------------------
// Covering trees

CoveringTree covering_tree(const Surface& s) {
  if (s.faces.empty()) throw std::domain_error("covering_tree: empty surface");
  return covering_tree(s, s.faces[0]);
}

CoveringTree covering_tree(const Surface& s, const Face& root) {
  if (!s.faces.contains(root)) throw std::domain_error("covering_tree: root not in surface");
  const auto& faces = s.faces.items();
  auto index = [&](const Face& f) {
    auto it = std::lower_bound(faces.begin(), faces.end(), f);
    return (it != faces.end() && *it == f) ? static_cast<int>(it - faces.begin()) : -1;
  };
  std::vector<int> vertex_of(faces.size(), -1);
  CoveringTree t;
  // Extend the current branch to an uncovered adjacent face; when stuck, walk
  // back along the branch to the nearest face with an uncovered neighbor.
  std::vector<int> branch{index(root)};
  vertex_of[static_cast<std::size_t>(branch[0])] = 0;
  t.vertices.push_back(root);
  while (!branch.empty()) {
    const int cur = branch.back();
    int next = -1;
    for (const Face& g : adjacent_faces(faces[static_cast<std::size_t>(cur)])) {
      const int j = index(g);
      if (j >= 0 && vertex_of[static_cast<std::size_t>(j)] < 0) {
        next = j;
        break;
      }
    }
    if (next < 0) {
      branch.pop_back();
      continue;
    }
    vertex_of[static_cast<std::size_t>(next)] = static_cast<int>(t.vertices.size());
    t.vertices.push_back(faces[static_cast<std::size_t>(next)]);
    t.edges.emplace_back(vertex_of[static_cast<std::size_t>(cur)], vertex_of[static_cast<std::size_t>(next)]);
    branch.push_back(next);
  }
  if (t.vertices.size() != faces.size()) throw std::domain_error("covering_tree: surface is not connected");
  return t;
}

bool spans(const CoveringTree& t, const Surface& s) {
  if (t.vertices.size() != s.faces.size() || t.edges.size() + 1 != s.faces.size()) return false;
  if (FaceSet(t.vertices) != s.faces) return false;
  for (auto [p, c] : t.edges) {
    if (p < 0 || c < 0 || static_cast<std::size_t>(p) >= t.vertices.size() ||
        static_cast<std::size_t>(c) >= t.vertices.size()) {
      return false;
    }
    if (!faces_adjacent(t.vertices[static_cast<std::size_t>(p)], t.vertices[static_cast<std::size_t>(c)])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Grid of doubled coordinates

SurfaceGrid::SurfaceGrid(int d, int radius) : d_(d) {
  if (d < 2) throw std::domain_error("SurfaceGrid: d must be >= 2");
  // Doubled coordinates of faces reachable within `radius` steps stay within
  // 2 * radius + 1 of the root; one more layer keeps neighbor lookups in range.
  const int half = 2 * radius + 3;
  side_ = 2 * half + 1;
  stride_.assign(static_cast<std::size_t>(d), 1);
  for (int k = d - 2; k >= 0; --k) stride_[static_cast<std::size_t>(k)] = stride_[static_cast<std::size_t>(k + 1)] * side_;
  const std::size_t total = static_cast<std::size_t>(stride_[0]) * static_cast<std::size_t>(side_);
  axis_.assign(total, -1);
  for (std::size_t cell = 0; cell < total; ++cell) {
    std::size_t rest = cell;
    int odd_axis = -1;
    int odd = 0;
    for (int k = 0; k < d; ++k) {
      const int coord = static_cast<int>(rest / static_cast<std::size_t>(stride_[static_cast<std::size_t>(k)])) - half;
      rest %= static_cast<std::size_t>(stride_[static_cast<std::size_t>(k)]);
      if (coord % 2 != 0) {
        ++odd;
        odd_axis = k;
      }
    }
    if (odd == 1) axis_[cell] = odd_axis;
  }
  offsets_.assign(static_cast<std::size_t>(d), {});
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (b == a) continue;
      for (int s : {-1, 1}) {
        const int sb = s * stride_[static_cast<std::size_t>(b)];
        const int sa = stride_[static_cast<std::size_t>(a)];
        offsets_[static_cast<std::size_t>(a)].push_back(2 * sb);
        offsets_[static_cast<std::size_t>(a)].push_back(sb + sa);
        offsets_[static_cast<std::size_t>(a)].push_back(sb - sa);
      }
    }
  }
  // Root: axis 0, base at the origin, center e_0 in doubled coordinates.
  root_ = 0;
  for (int k = 0; k < d; ++k) root_ += ((k == 0 ? 1 : 0) + half) * stride_[static_cast<std::size_t>(k)];
}

Face SurfaceGrid::face(int cell) const {
  const int half = (side_ - 1) / 2;
  std::vector<int> center(static_cast<std::size_t>(d_));
  int rest = cell;
  for (int k = 0; k < d_; ++k) {
    center[static_cast<std::size_t>(k)] = rest / stride_[static_cast<std::size_t>(k)] - half;
    rest %= stride_[static_cast<std::size_t>(k)];
  }
  const int a = axis(cell);
  if (a < 0) throw std::domain_error("SurfaceGrid::face: cell is not a face center");
  Face f{a, std::vector<int>(static_cast<std::size_t>(d_))};
  for (int k = 0; k < d_; ++k) {
    const int c = center[static_cast<std::size_t>(k)] - (k == a ? 1 : 0);
    f.base[static_cast<std::size_t>(k)] = c / 2;
  }
  return f;
}

int census_limit(int d) {
  if (d == 2) return 10;
  if (d == 3) return 7;
  return 0;
}

namespace {

void require_census(int d, int r, int limit) {
  if (r < 1) throw std::domain_error("surface census: r must be >= 1");
  if (d != 2 && d != 3) throw ResourceError("surface census supports d = 2, 3 only", 0);
  if (r > limit) throw ResourceError("surface census: r beyond the exact-enumeration limit", static_cast<std::uint64_t>(r));
}

// Redelmeier growth: every connected cell set containing the root is produced once.
class Redelmeier {
 public:
  Redelmeier(const SurfaceGrid& grid, int max_size, std::function<void(std::span<const int>)> visit)
      : grid_(grid), max_(max_size), visit_(std::move(visit)), marked_(static_cast<std::size_t>(grid.cells()), 0) {
    counts_.assign(static_cast<std::size_t>(max_size) + 1, 0);
  }

  void run() {
    std::vector<int> untried{grid_.root()};
    marked_[static_cast<std::size_t>(grid_.root())] = 1;
    grow(untried);
  }

  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  void grow(std::vector<int> untried) {
    while (!untried.empty()) {
      const int cell = untried.back();
      untried.pop_back();
      current_.push_back(cell);
      ++counts_[current_.size()];
      if (visit_) visit_(current_);
      if (static_cast<int>(current_.size()) < max_) {
        std::vector<int> next = untried;
        std::vector<int> added;
        for (int off : grid_.neighbor_offsets(grid_.axis(cell))) {
          const int nb = cell + off;
          if (marked_[static_cast<std::size_t>(nb)]) continue;
          marked_[static_cast<std::size_t>(nb)] = 1;
          added.push_back(nb);
          next.push_back(nb);
        }
        grow(std::move(next));
        for (int nb : added) marked_[static_cast<std::size_t>(nb)] = 0;
      }
      current_.pop_back();
    }
  }

  const SurfaceGrid& grid_;
  int max_;
  std::function<void(std::span<const int>)> visit_;
  std::vector<char> marked_;
  std::vector<int> current_;
  std::vector<std::uint64_t> counts_;
};

}  // namespace

std::vector<std::uint64_t> count_surfaces_upto(int d, int r) {
  require_census(d, r, census_limit(d));
  const SurfaceGrid grid(d, r);
  Redelmeier walk(grid, r, nullptr);
  walk.run();
  return {walk.counts().begin() + 1, walk.counts().end()};
}

std::uint64_t count_surfaces(int d, int r) { return count_surfaces_upto(d, r).back(); }

void for_each_surface(int d, int r, const std::function<void(const SurfaceGrid&, std::span<const int>)>& visit) {
  require_census(d, r, census_limit(d));
  const SurfaceGrid grid(d, r);
  Redelmeier walk(grid, r, [&](std::span<const int> cells) {
    if (static_cast<int>(cells.size()) == r) visit(grid, cells);
  });
  walk.run();
}

std::uint64_t count_surfaces_dedup(int d, int r) {
  require_census(d, r, d == 2 ? 8 : 5);
  const SurfaceGrid grid(d, r);
  struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
      std::size_t h = v.size();
      for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x);
      return h;
    }
  };
  std::unordered_set<std::vector<int>, VecHash> level{{grid.root()}};
  for (int size = 1; size < r; ++size) {
    std::unordered_set<std::vector<int>, VecHash> next;
    for (const auto& s : level) {
      for (int cell : s) {
        for (int off : grid.neighbor_offsets(grid.axis(cell))) {
          const int nb = cell + off;
          if (std::binary_search(s.begin(), s.end(), nb)) continue;
          std::vector<int> grown = s;
          grown.insert(std::upper_bound(grown.begin(), grown.end(), nb), nb);
          next.insert(std::move(grown));
        }
      }
    }
    level = std::move(next);
  }
  return level.size();
}

int covering_tree_edges(const SurfaceGrid& grid, std::span<const int> cells) {
  if (cells.empty()) return -1;
  const std::size_t m = cells.size();
  std::vector<char> covered(m, 0);
  std::vector<std::size_t> branch{0};
  covered[0] = 1;
  int edges = 0;
  std::size_t seen = 1;
  while (!branch.empty()) {
    const int cur = cells[branch.back()];
    std::size_t next = m;
    for (int off : grid.neighbor_offsets(grid.axis(cur))) {
      for (std::size_t j = 0; j < m; ++j) {
        if (!covered[j] && cells[j] == cur + off) {
          next = j;
          break;
        }
      }
      if (next != m) break;
    }
    if (next == m) {
      branch.pop_back();
      continue;
    }
    covered[next] = 1;
    ++seen;
    ++edges;
    branch.push_back(next);
  }
  return seen == m ? edges : -1;
}

// ---------------------------------------------------------------------------
// Counting bounds

BigInt binomial(int v, int w) {
  if (w < 0 || v < 0 || w > v) return 0;
  BigInt r = 1;
  for (int i = 1; i <= w; ++i) r = r * (v - w + i) / i;
  return r;
}

BigInt catalan(int m) {
  if (m < 0 || m > 1000) throw std::domain_error("catalan: m must lie in 0..1000");
  return binomial(2 * m, m) / (m + 1);
}

double log_entropy_bound(int d, int r) {
  return r * (std::log(3.0) + 1.0 + d * std::numbers::ln2);
}

long double entropy_bound(int d, int r) {
  return std::exp(static_cast<long double>(log_entropy_bound(d, r)));
}

}  // namespace treedecay
