#ifndef TREEDECAY_SURFACES_HPP_
#define TREEDECAY_SURFACES_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "treedecay/lattice.hpp"
#include "treedecay/polynomial.hpp"

namespace treedecay {

/// Connected set of unit (d-1)-faces containing the root face S0.
struct Surface {
  int dim = 2;
  FaceSet faces;
};

/// The root face S0 used by the census: axis 0, base at the origin.
Face root_face(int d);

/// Rooted tree on face centers; vertex 0 is the root.
struct CoveringTree {
  std::vector<Face> vertices;
  std::vector<std::pair<int, int>> edges;  ///< (parent, child) indices into `vertices`
};

/// Depth-first covering tree rooted at `root` (default: the smallest face).
/// Throws std::domain_error for an empty or disconnected surface, or a root not in it.
CoveringTree covering_tree(const Surface& s);
CoveringTree covering_tree(const Surface& s, const Face& root);
/// Whether `t` has |s| vertices, |s| - 1 edges, covers every face and joins only adjacent faces.
bool spans(const CoveringTree& t, const Surface& s);

/// Largest r accepted by the exact census in dimension d (10 for d=2, 7 for d=3).
int census_limit(int d);

/// N(1), ..., N(r): connected surfaces of r faces containing S0. Each set is
/// generated exactly once (Redelmeier growth). Throws ResourceError outside
/// the census limits and std::domain_error for r < 1.
std::vector<std::uint64_t> count_surfaces_upto(int d, int r);
std::uint64_t count_surfaces(int d, int r);

/// N(r) by level-wise growth with a hash set of canonical face lists.
/// Memory grows with N(r); limited to r <= 8 (d=2) and r <= 5 (d=3).
std::uint64_t count_surfaces_dedup(int d, int r);

/// Compact census form: faces as doubled-coordinate centers packed into cells
/// of a fixed grid around S0.
class SurfaceGrid {
 public:
  SurfaceGrid(int d, int radius);

  int dim() const { return d_; }
  int cells() const { return static_cast<int>(axis_.size()); }
  int root() const { return root_; }
  /// Face axis of a cell, or -1 when the cell is not a face center.
  int axis(int cell) const { return axis_[static_cast<std::size_t>(cell)]; }
  std::span<const int> neighbor_offsets(int axis) const { return offsets_[static_cast<std::size_t>(axis)]; }
  Face face(int cell) const;

 private:
  int d_;
  int side_;
  std::vector<int> stride_;
  std::vector<int> axis_;
  std::vector<std::vector<int>> offsets_;
  int root_ = 0;
};

/// Visits every connected surface of exactly r faces containing S0, as grid cells.
void for_each_surface(int d, int r, const std::function<void(const SurfaceGrid&, std::span<const int>)>& visit);

/// Depth-first covering tree on grid cells; returns the number of tree edges,
/// or -1 if the cells are not connected.
int covering_tree_edges(const SurfaceGrid& grid, std::span<const int> cells);

/// C_m = binom(2m, m) / (m + 1). Throws std::domain_error for m > 1000.
BigInt catalan(int m);
BigInt binomial(int v, int w);

/// (3e 2^d)^r and its logarithm.
long double entropy_bound(int d, int r);
double log_entropy_bound(int d, int r);

}  // namespace treedecay

#endif  // TREEDECAY_SURFACES_HPP_
