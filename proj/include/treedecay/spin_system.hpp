#ifndef TREEDECAY_SPIN_SYSTEM_HPP_
#define TREEDECAY_SPIN_SYSTEM_HPP_

#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "treedecay/errors.hpp"
#include "treedecay/lattice.hpp"
#include "treedecay/lattice_index.hpp"
#include "treedecay/log_value.hpp"
#include "treedecay/polynomial.hpp"

namespace treedecay {

/// Inverse temperature beta >= 0. Gibbs weights are powers of u = exp(-2 beta).
class InverseTemperature {
 public:
  explicit InverseTemperature(double beta);

  double value() const { return beta_; }
  double log_u() const { return -2.0 * beta_; }
  double u() const;

 private:
  double beta_;
};

/// Upper bound on the number of states an exhaustive sum may visit.
struct EnumerationCap {
  static constexpr std::uint64_t kDefault = std::uint64_t{1} << 24;

  std::uint64_t max_states = kDefault;

  /// Throws ResourceError when 2^bits states exceed the cap.
  void require(unsigned bits, std::string_view what) const;
};

/// kDefault, or the value of the REPLICA_CAP environment variable when set.
EnumerationCap default_cap();

/// Ising configuration on the interior of a box; the boundary ring is +1.
class SpinConfig {
 public:
  /// All interior spins +1.
  explicit SpinConfig(Box box);
  /// `spins` in Box::interior_sites order; throws std::domain_error on bad size or values.
  SpinConfig(Box box, std::vector<int> spins);
  static SpinConfig from_minus_set(Box box, const SiteSet& minus);
  static SpinConfig from_mask(const LatticeIndex& lat, std::uint64_t minus_mask);

  const Box& box() const { return box_; }
  std::size_t size() const { return spins_.size(); }
  /// +1 on boundary sites; throws std::domain_error outside the closure.
  int spin(const Site& s) const;
  int spin(std::size_t index) const { return spins_[index]; }
  void set(const Site& s, int value);
  void set(std::size_t index, int value);
  std::span<const std::int8_t> spins() const { return spins_; }
  SiteSet minus_sites() const;

  bool operator==(const SpinConfig&) const = default;

 private:
  Box box_;
  std::vector<std::int8_t> spins_;
};

/// sum over nearest-neighbor pairs (1 - sigma_i sigma_j), boundary pairs included.
int energy(const SpinConfig& cfg);

/// Visits each of the 2^k interior assignments once, in Gray-code order.
void enumerate_configs(const Box& box, const std::function<void(const SpinConfig&)>& visit,
                       EnumerationCap cap = default_cap());

/// Gray-code walk over minus-masks with the broken-bond count maintained
/// incrementally (O(2d) per step). `visit(mask, broken)`; energy = 2 * broken.
template <typename Visit>
void gray_walk(const LatticeIndex& lat, Visit&& visit, EnumerationCap cap = default_cap()) {
  const int k = lat.size();
  if (k > 63) throw ResourceError("gray_walk: more than 63 interior sites", ~std::uint64_t{0});
  cap.require(static_cast<unsigned>(k), "configuration enumeration");
  std::uint64_t mask = 0;
  int broken = 0;
  visit(mask, broken);
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int s = std::countr_zero(step);
    const bool was_minus = (mask >> s) & 1u;
    int delta = 0;
    for (int j : lat.neighbors(s)) {
      const bool other_minus = j != LatticeIndex::kRing && ((mask >> j) & 1u);
      delta += (other_minus == was_minus) ? 1 : -1;
    }
    broken += delta;
    mask ^= std::uint64_t{1} << s;
    visit(mask, broken);
  }
}

enum class SumMethod { automatic, transfer_matrix, enumeration };

/// For each product P (interior site indices), the exact weight
/// sum_sigma (prod_{i in P} sigma_i) u^(H(sigma)/2).
///
/// The transfer-matrix route slices the box along its longest axis; it is used
/// automatically when the interior has at most 62 sites and a slice at most 16.
/// Otherwise the Gray-code enumeration runs under `cap`.
std::vector<GibbsPolynomial> spin_product_sums(const LatticeIndex& lat,
                                               const std::vector<std::vector<int>>& products,
                                               SumMethod method = SumMethod::automatic,
                                               EnumerationCap cap = default_cap());

bool transfer_matrix_supported(const LatticeIndex& lat);

/// Z as a polynomial in u = exp(-2 beta).
GibbsPolynomial partition_function(const Box& box, SumMethod method = SumMethod::automatic,
                                   EnumerationCap cap = default_cap());

/// numerator / denominator, both polynomials in u.
struct GibbsRatio {
  GibbsPolynomial numerator;
  GibbsPolynomial denominator;

  SignedLog log_value(InverseTemperature beta) const;
  double value(InverseTemperature beta) const { return log_value(beta).value(); }
};

using Observable = std::function<double(const SpinConfig&)>;
using IntegerObservable = std::function<long long(const SpinConfig&)>;

/// <f> by direct enumeration with floating-point Gibbs weights.
double expectation(const Box& box, InverseTemperature beta, const Observable& f,
                   EnumerationCap cap = default_cap());

/// <f> as an exact ratio of polynomials for integer-valued f.
GibbsRatio expectation_exact(const Box& box, const IntegerObservable& f, EnumerationCap cap = default_cap());

}  // namespace treedecay

#endif  // TREEDECAY_SPIN_SYSTEM_HPP_
