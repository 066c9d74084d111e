#ifndef TREEDECAY_CONTINENTS_HPP_
#define TREEDECAY_CONTINENTS_HPP_

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treedecay/replica.hpp"

namespace treedecay {

/// Sea: the all-plus sites connected to the frozen ring through all-plus sites.
/// Continents: connected components of the remaining interior sites.
struct ContinentDecomposition {
  SiteSet sea;
  std::vector<SiteSet> continents;

  bool operator==(const ContinentDecomposition&) const = default;
};

/// Per-copy union of whole contours meeting the boundary of a continent.
struct ReplicaContour {
  std::vector<FaceSet> per_copy;

  std::size_t length() const;
  bool operator==(const ReplicaContour&) const = default;
};

ContinentDecomposition decompose(const ReplicaConfig& rc);
/// Throws std::domain_error if `k` is not a continent of `rc`.
ReplicaContour continent_contour(const ReplicaConfig& rc, const SiteSet& k);
/// Flips each copy inside its selected contours. Throws std::domain_error if
/// `k` is not a continent of `rc`.
ReplicaConfig remove_contour(const ReplicaConfig& rc, const SiteSet& k);

/// Bitset kernels behind the operations above, for exhaustive sweeps.
class ContinentKernel {
 public:
  /// Throws ResourceError when the box exceeds the bitset capacity.
  explicit ContinentKernel(const LatticeIndex& lat);

  const LatticeIndex& lattice() const { return lat_; }

  Bits sea(std::span<const Bits> minus) const;
  std::vector<Bits> continents(std::span<const Bits> minus) const;
  /// Continents plus the sea in one pass.
  std::vector<Bits> continents(std::span<const Bits> minus, Bits& sea_out) const;
  /// Bonds of copy alpha's contours that share a face with the boundary of k.
  std::vector<Bits> contour(std::span<const Bits> minus, const Bits& k) const;
  /// Copy masks with the given per-copy contour sets removed.
  std::vector<Bits> remove(std::span<const Bits> minus, std::span<const Bits> contour) const;
  /// Number of broken bonds summed over copies (energy = 2 x this).
  int broken(std::span<const Bits> minus) const;

  /// Sites whose crossing parity with respect to `faces` is odd, counted from
  /// the ring. `faces` must be a union of whole contour components.
  Bits enclosed(const Bits& faces) const;

 private:
  const LatticeIndex& lat_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;  // (neighbor site, bond)
  std::vector<int> ring_bond_;                              // one ring bond per site, or -1
};

/// Visits every joint configuration of n copies as per-copy minus masks, with
/// the total broken-bond count. Throws ResourceError beyond `cap`.
void for_each_joint_config(const LatticeIndex& lat, int n,
                           const std::function<void(std::span<const Bits>, int)>& visit,
                           EnumerationCap cap = default_cap());

struct CondensationReport {
  int n = 0;
  double beta = 0.0;
  SiteTuple sites;
  std::complex<double> total;
  std::complex<double> single_continent;
  std::complex<double> scattered;
  double mass = 0.0;  ///< sum of |term| over all joint configurations
  double relative() const { return mass == 0.0 ? 0.0 : std::abs(scattered) / mass; }
  /// n = 2: the scattered sum vanishes coefficient by coefficient in u.
  std::optional<bool> exact_zero;
};

/// Splits sum_sigma s^{(1)}_{i_1} ... s^{(1)}_{i_k} u^{H/2} into configurations with
/// all sites in one continent and the rest. One enumeration serves every beta.
/// Values are normalized by the replica partition function.
std::vector<CondensationReport> condensation_check(const Box& box, std::span<const double> betas, int n,
                                                   const SiteTuple& t, EnumerationCap cap = default_cap());

/// A realizable continent with its replica contour and total weight.
struct ContourClass {
  Bits continent;
  std::vector<Bits> contour;
  int r = 0;
  GibbsPolynomial weight;  ///< sum over matching joint configs of u^{H/2}
};

struct ContourTable {
  Box box;
  int n = 0;
  GibbsPolynomial partition;  ///< Z^n
  std::vector<ContourClass> classes;
};

/// Every (K, C) that occurs in some joint configuration, by exhaustive enumeration.
ContourTable contour_table(const Box& box, int n, EnumerationCap cap = default_cap());

struct ContourProbability {
  int r = 0;
  double pr = 0.0;
  double log_pr = 0.0;
  double bound = 0.0;  ///< exp(-beta r)
  bool satisfied = true;
};

/// Pr(K, C) = (1/Z^n) sum over configs with K a continent and contour C of u^{H/2}.
ContourProbability contour_probability(const ContourTable& table, InverseTemperature beta, const SiteSet& k,
                                       const ReplicaContour& c);
ContourProbability contour_probability(const ContourTable& table, InverseTemperature beta,
                                       const ContourClass& cls);
ContourProbability contour_probability(const Box& box, InverseTemperature beta, int n, const SiteSet& k,
                                       const ReplicaContour& c, EnumerationCap cap = default_cap());

std::string to_json(const ContourProbability& p);

/// Number of distinct (K, C) with `anchor` in K, grouped by r = |C|.
std::map<int, std::uint64_t> continent_contour_census(const Box& box, int n, const Site& anchor,
                                                      EnumerationCap cap = default_cap());

}  // namespace treedecay

#endif  // TREEDECAY_CONTINENTS_HPP_
