#ifndef TREEDECAY_LATTICE_HPP_
#define TREEDECAY_LATTICE_HPP_

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace treedecay {

/// A point of the hypercubic lattice Z^d.
struct Site {
  std::vector<int> coords;

  Site() = default;
  explicit Site(std::vector<int> c) : coords(std::move(c)) {}
  Site(std::initializer_list<int> c) : coords(c) {}

  int dim() const { return static_cast<int>(coords.size()); }
  int operator[](int axis) const { return coords[static_cast<std::size_t>(axis)]; }

  auto operator<=>(const Site&) const = default;
  bool operator==(const Site&) const = default;
};

/// Textual form "(x1,...,xd)".
std::string to_string(const Site& s);
/// Parses "(x1,...,xd)"; whitespace is ignored. Throws std::invalid_argument.
Site parse_site(std::string_view text);
/// Parses a ';'-separated list of sites.
std::vector<Site> parse_site_list(std::string_view text);

int manhattan(const Site& a, const Site& b);

/// A (d-1)-cube of the dual lattice: the face separating the unit cubes
/// centered at `base` and `base + e_axis`.
struct Face {
  int axis = 0;
  std::vector<int> base;

  int dim() const { return static_cast<int>(base.size()); }

  auto operator<=>(const Face&) const = default;
  bool operator==(const Face&) const = default;
};

std::string to_string(const Face& f);

/// Face between two nearest-neighbor sites. Throws std::domain_error otherwise.
Face face_between(const Site& a, const Site& b);
/// The two sites whose cubes share the face, lower one first.
std::pair<Site, Site> cells_of(const Face& f);

/// Sorted, duplicate-free list with lexicographic order.
template <typename T>
class SortedSet {
 public:
  using value_type = T;
  using const_iterator = typename std::vector<T>::const_iterator;

  SortedSet() = default;
  SortedSet(std::initializer_list<T> items) : items_(items) { normalize(); }
  explicit SortedSet(std::vector<T> items) : items_(std::move(items)) { normalize(); }

  bool contains(const T& x) const { return std::binary_search(items_.begin(), items_.end(), x); }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }
  const T& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<T>& items() const { return items_; }

  bool operator==(const SortedSet&) const = default;
  auto operator<=>(const SortedSet&) const = default;

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  std::vector<T> items_;
};

using SiteSet = SortedSet<Site>;
using FaceSet = SortedSet<Face>;

SortedSet<Face> set_union(const FaceSet& a, const FaceSet& b);
SortedSet<Face> set_intersection(const FaceSet& a, const FaceSet& b);

/// Finite box: free interior sites 0 <= x_a < extent_a, surrounded by a frozen
/// ring of boundary sites (sites outside the interior at L1 distance 1 from it).
class Box {
 public:
  /// Throws std::domain_error for d < 2 or negative extents.
  explicit Box(std::vector<int> interior_extent);

  /// "3x3", "2x2x2", ...
  static Box parse(std::string_view text);

  int dim() const { return static_cast<int>(extent_.size()); }
  const std::vector<int>& extent() const { return extent_; }
  std::size_t interior_size() const;

  bool is_interior(const Site& s) const;
  bool is_boundary(const Site& s) const;
  bool in_closure(const Site& s) const { return is_interior(s) || is_boundary(s); }

  /// Interior sites in lexicographic order; position in this list is the site index.
  std::vector<Site> interior_sites() const;
  std::vector<Site> boundary_sites() const;

  std::string to_string() const;

  bool operator==(const Box&) const = default;

 private:
  std::vector<int> extent_;
};

/// Sites at L1 distance 1 from `site` inside the box closure.
/// Throws std::domain_error if `site` is outside the closure.
SiteSet neighbors(const Site& site, const Box& box);

/// Maximal nearest-neighbor connected pieces. Sites touching only at a corner
/// are not connected. Components are returned in order of their smallest site.
std::vector<SiteSet> connected_components(const SiteSet& xs);

/// Faces separating a cube of `xs` from a cube outside `xs` (scan over cubes).
FaceSet boundary_faces(const SiteSet& xs);
/// Same set computed by enumerating every lattice edge near `xs` and keeping the
/// ones crossed by the boundary.
FaceSet boundary_faces_by_edges(const SiteSet& xs);

/// Sites of `xs` whose cube has at least one face on the boundary of `xs`.
SiteSet boundary_sites(const SiteSet& xs);

/// True iff the two closed faces share a (d-2)-cube.
/// Throws std::domain_error on mismatched dimensions.
bool faces_adjacent(const Face& f1, const Face& f2);

/// (d-2)-cubes on the border of a face, as doubled-coordinate centers.
std::vector<std::vector<int>> ridges_of(const Face& f);

/// All faces sharing a (d-2)-cube with `f`; there are 6(d-1) of them.
std::vector<Face> adjacent_faces(const Face& f);

/// Components of a face set under `faces_adjacent`.
std::vector<FaceSet> face_components(const FaceSet& faces);

}  // namespace treedecay

#endif  // TREEDECAY_LATTICE_HPP_
