#include "treedecay/lattice_index.hpp"

#include <map>
#include <stdexcept>

namespace treedecay {

LatticeIndex::LatticeIndex(Box box) : box_(std::move(box)), sites_(box_.interior_sites()) {
  const int d = box_.dim();
  const auto du = static_cast<std::size_t>(d);
  strides_.assign(du, 1);
  for (int k = d - 2; k >= 0; --k) {
    strides_[static_cast<std::size_t>(k)] =
        strides_[static_cast<std::size_t>(k + 1)] * box_.extent()[static_cast<std::size_t>(k + 1)];
  }

  const std::size_t n = sites_.size();
  neighbors_.assign(n * 2 * du, kRing);
  ring_degree_.assign(n, 0);
  site_bonds_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      for (int s = 0; s < 2; ++s) {
        Site t = sites_[i];
        t.coords[static_cast<std::size_t>(k)] += s == 0 ? -1 : 1;
        const int j = index_of(t);
        neighbors_[i * 2 * du + static_cast<std::size_t>(2 * k + s)] = j;
        if (j == kRing) {
          ++ring_degree_[i];
          bonds_.push_back(Bond{static_cast<int>(i), kRing, face_between(sites_[i], t)});
        } else if (static_cast<std::size_t>(j) > i) {
          bonds_.push_back(Bond{static_cast<int>(i), j, face_between(sites_[i], t)});
        }
      }
    }
  }
  for (std::size_t e = 0; e < bonds_.size(); ++e) {
    site_bonds_[static_cast<std::size_t>(bonds_[e].a)].push_back(static_cast<int>(e));
    if (bonds_[e].b != kRing) site_bonds_[static_cast<std::size_t>(bonds_[e].b)].push_back(static_cast<int>(e));
  }

  fits_bits_ = n <= Bits::kCapacity && bonds_.size() <= Bits::kCapacity;
  if (!fits_bits_) return;

  neighbor_bits_.assign(n, Bits{});
  for (std::size_t i = 0; i < n; ++i) {
    for (int j : neighbors(static_cast<int>(i))) {
      if (j == kRing) {
        ring_touching_.set(i);
      } else {
        neighbor_bits_[i].set(static_cast<std::size_t>(j));
      }
    }
  }

  std::map<std::vector<int>, std::vector<int>> ridge_members;
  for (std::size_t e = 0; e < bonds_.size(); ++e) {
    for (auto& r : ridges_of(bonds_[e].face)) ridge_members[std::move(r)].push_back(static_cast<int>(e));
  }
  bond_adjacency_.assign(bonds_.size(), Bits{});
  for (const auto& [ridge, members] : ridge_members) {
    for (int x : members) {
      for (int y : members) {
        if (x != y) bond_adjacency_[static_cast<std::size_t>(x)].set(static_cast<std::size_t>(y));
      }
    }
  }
}

int LatticeIndex::index_of(const Site& s) const {
  if (!box_.is_interior(s)) return kRing;
  int idx = 0;
  for (int k = 0; k < dim(); ++k) idx += s[k] * strides_[static_cast<std::size_t>(k)];
  return idx;
}

int LatticeIndex::require_index(const Site& s) const {
  const int i = index_of(s);
  if (i < 0) throw std::domain_error("site " + to_string(s) + " is not interior to box " + box_.to_string());
  return i;
}

int LatticeIndex::bond_of(const Face& f) const {
  auto [lo, hi] = cells_of(f);
  const int a = index_of(lo);
  const int b = index_of(hi);
  if (a == kRing && b == kRing) return -1;
  const int owner = a == kRing ? b : a;
  for (int e : bonds_at(owner)) {
    if (bonds_[static_cast<std::size_t>(e)].face == f) return e;
  }
  return -1;
}

Bits LatticeIndex::broken_bonds(const Bits& minus) const {
  Bits out;
  for (std::size_t e = 0; e < bonds_.size(); ++e) {
    const Bond& bd = bonds_[e];
    const bool sa = minus.test(static_cast<std::size_t>(bd.a));
    const bool sb = bd.b != kRing && minus.test(static_cast<std::size_t>(bd.b));
    if (sa != sb) out.set(e);
  }
  return out;
}

Bits LatticeIndex::region_boundary(const Bits& region) const {
  return broken_bonds(region);
}

Bits LatticeIndex::flood_sites(Bits seeds, const Bits& allowed) const {
  seeds &= allowed;
  Bits reached = seeds;
  Bits frontier = seeds;
  while (frontier.any()) {
    Bits next;
    frontier.for_each([&](std::size_t i) { next |= neighbor_bits_[i]; });
    next &= allowed;
    next.subtract(reached);
    reached |= next;
    frontier = next;
  }
  return reached;
}

Bits LatticeIndex::flood_bonds(Bits seeds, const Bits& allowed) const {
  seeds &= allowed;
  Bits reached = seeds;
  Bits frontier = seeds;
  while (frontier.any()) {
    Bits next;
    frontier.for_each([&](std::size_t e) { next |= bond_adjacency_[e]; });
    next &= allowed;
    next.subtract(reached);
    reached |= next;
    frontier = next;
  }
  return reached;
}

Bits LatticeIndex::to_bits(const SiteSet& s) const {
  Bits b;
  for (const Site& x : s) b.set(static_cast<std::size_t>(require_index(x)));
  return b;
}

SiteSet LatticeIndex::to_site_set(const Bits& b) const {
  std::vector<Site> out;
  b.for_each([&](std::size_t i) { out.push_back(sites_[i]); });
  return SiteSet(std::move(out));
}

FaceSet LatticeIndex::to_face_set(const Bits& bonds) const {
  std::vector<Face> out;
  bonds.for_each([&](std::size_t e) { out.push_back(bonds_[e].face); });
  return FaceSet(std::move(out));
}

}  // namespace treedecay
