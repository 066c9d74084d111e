#ifndef TREEDECAY_LATTICE_INDEX_HPP_
#define TREEDECAY_LATTICE_INDEX_HPP_

#include <span>
#include <vector>

#include "treedecay/bits.hpp"
#include "treedecay/lattice.hpp"

namespace treedecay {

/// Integer-indexed view of a Box for the enumeration kernels.
///
/// Interior sites are numbered in lexicographic order (the order of
/// Box::interior_sites). Every nearest-neighbor pair with at least one interior
/// endpoint is a bond; a bond to the frozen ring has `b == kRing`. Bonds are in
/// one-to-one correspondence with the faces that can carry a contour.
class LatticeIndex {
 public:
  static constexpr int kRing = -1;

  struct Bond {
    int a = 0;
    int b = kRing;
    Face face;
  };

  explicit LatticeIndex(Box box);

  const Box& box() const { return box_; }
  int dim() const { return box_.dim(); }
  int size() const { return static_cast<int>(sites_.size()); }
  const Site& site(int i) const { return sites_[static_cast<std::size_t>(i)]; }
  const std::vector<Site>& sites() const { return sites_; }

  /// Interior index of `s`, or -1.
  int index_of(const Site& s) const;
  /// Interior index of `s`; throws std::domain_error if `s` is not interior.
  int require_index(const Site& s) const;

  /// 2d entries per site, axis-major with the -1 step first; kRing for ring neighbors.
  std::span<const int> neighbors(int i) const {
    return {neighbors_.data() + static_cast<std::size_t>(i) * 2 * static_cast<std::size_t>(dim()),
            2 * static_cast<std::size_t>(dim())};
  }
  int ring_degree(int i) const { return ring_degree_[static_cast<std::size_t>(i)]; }

  const std::vector<Bond>& bonds() const { return bonds_; }
  int bond_count() const { return static_cast<int>(bonds_.size()); }
  std::span<const int> bonds_at(int i) const { return site_bonds_[static_cast<std::size_t>(i)]; }
  /// Bond index of a face, or -1 when the face carries no bond of this box.
  int bond_of(const Face& f) const;

  /// Whether the bitset kernels below may be used for this box.
  bool fits_bits() const { return fits_bits_; }

  Bits all_sites() const { return Bits::prefix(sites_.size()); }
  Bits all_bonds() const { return Bits::prefix(bonds_.size()); }
  const Bits& neighbor_bits(int i) const { return neighbor_bits_[static_cast<std::size_t>(i)]; }
  const Bits& ring_touching() const { return ring_touching_; }
  const Bits& bond_neighbors(int bond) const { return bond_adjacency_[static_cast<std::size_t>(bond)]; }

  /// Bonds whose two endpoints carry different spins; `minus` marks -1 sites.
  Bits broken_bonds(const Bits& minus) const;
  /// Bonds with exactly one endpoint in `region` (the boundary faces of the region).
  Bits region_boundary(const Bits& region) const;
  /// Sites reachable from `seeds` through nearest-neighbor steps inside `allowed`.
  Bits flood_sites(Bits seeds, const Bits& allowed) const;
  /// Bonds reachable from `seeds` through face adjacency inside `allowed`.
  Bits flood_bonds(Bits seeds, const Bits& allowed) const;

  Bits to_bits(const SiteSet& s) const;
  SiteSet to_site_set(const Bits& b) const;
  FaceSet to_face_set(const Bits& bonds) const;

 private:
  Box box_;
  std::vector<Site> sites_;
  std::vector<int> strides_;
  std::vector<int> neighbors_;
  std::vector<int> ring_degree_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> site_bonds_;
  bool fits_bits_ = false;
  std::vector<Bits> neighbor_bits_;
  Bits ring_touching_;
  std::vector<Bits> bond_adjacency_;
};

}  // namespace treedecay

#endif  // TREEDECAY_LATTICE_INDEX_HPP_
