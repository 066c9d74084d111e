#ifndef TREEDECAY_CORRELATIONS_HPP_
#define TREEDECAY_CORRELATIONS_HPP_

#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "treedecay/lattice.hpp"
#include "treedecay/spin_system.hpp"

namespace treedecay {

/// Ordered list of interior sites (i_1, ..., i_n); repeats allowed.
using SiteTuple = std::vector<Site>;

std::string to_string(const SiteTuple& t);

/// Partition of positions {0, ..., n-1} into nonempty blocks, each block sorted
/// and blocks ordered by their smallest element.
struct SetPartition {
  std::vector<std::vector<int>> blocks;

  bool operator==(const SetPartition&) const = default;
};

/// Visits all Bell(n) partitions once (restricted-growth-string order).
/// Throws ResourceError for n > 12.
void enumerate_partitions(int n, const std::function<void(const SetPartition&)>& visit);
std::vector<SetPartition> set_partitions(int n);

/// Exact subset numerators N_S = sum_sigma sigma^S u^(H/2) for every subset S
/// of tuple positions (bitmask index), plus Z = N_{} .
class TupleMoments {
 public:
  TupleMoments(const Box& box, SiteTuple tuple, SumMethod method = SumMethod::automatic,
               EnumerationCap cap = default_cap());

  const Box& box() const { return box_; }
  const SiteTuple& tuple() const { return tuple_; }
  int size() const { return static_cast<int>(tuple_.size()); }
  const GibbsPolynomial& partition_function() const { return numerators_.front(); }
  const GibbsPolynomial& numerator(std::uint32_t subset) const { return numerators_.at(subset); }
  const std::vector<GibbsPolynomial>& numerators() const { return numerators_; }

  /// <sigma^S> for every subset S at the given temperature.
  std::vector<double> moments(InverseTemperature beta) const;

 private:
  Box box_;
  SiteTuple tuple_;
  std::vector<GibbsPolynomial> numerators_;
};

GibbsRatio moment_exact(const Box& box, const SiteTuple& t);
double moment(const Box& box, InverseTemperature beta, const SiteTuple& t);

/// Cumulants over subsets from moments over subsets (index = position bitmask,
/// moments[0] = 1) by the partition recursion
///   T(S) = M(S) - sum_{B ∋ min S, B ⊊ S} T(B) M(S \ B).
template <typename Scalar>
std::vector<Scalar> truncate_subset_moments(std::span<const Scalar> moments) {
  const std::size_t total = moments.size();
  if (total == 0 || (total & (total - 1)) != 0) {
    throw std::invalid_argument("truncate_subset_moments: size must be a power of two");
  }
  std::vector<Scalar> t(total, Scalar(0));
  for (std::size_t s = 1; s < total; ++s) {
    const std::size_t low = s & (~s + 1);
    const std::size_t rest = s ^ low;
    Scalar acc = moments[s];
    if (rest != 0) {
      // Proper sub-blocks B = low | sub containing the smallest position.
      std::size_t sub = (rest - 1) & rest;
      while (true) {
        const std::size_t block = low | sub;
        acc -= t[block] * moments[s ^ block];
        if (sub == 0) break;
        sub = (sub - 1) & rest;
      }
    }
    t[s] = acc;
  }
  return t;
}

/// T(S) * Z^|S| for every subset S of positions, exact.
std::vector<GibbsPolynomial> scaled_truncated_all(const TupleMoments& tm);

/// <sigma_{i1} ... sigma_{in}>^T as an exact ratio with denominator Z^n.
/// Throws std::domain_error for an empty tuple or non-interior sites.
GibbsRatio truncated_exact(const Box& box, const SiteTuple& t);
double truncated(const Box& box, InverseTemperature beta, const SiteTuple& t);
/// Sign and log|T| without underflow at large beta.
SignedLog log_truncated(const Box& box, InverseTemperature beta, const SiteTuple& t);

/// Truncated correlation from polarization: the n-th cumulant of
/// X_eps = sum_k eps_k sigma_{i_k} summed with weights eps_1...eps_n / (2^n n!).
/// Exact: cumulants of X_eps from its exact moments.
GibbsRatio truncated_via_polarization_exact(const Box& box, const SiteTuple& t);
/// Floating point: moments of X_eps accumulated directly over enumerated configurations.
double truncated_via_polarization(const Box& box, InverseTemperature beta, const SiteTuple& t,
                                  EnumerationCap cap = default_cap());

/// sum over set partitions P of prod_{B in P} T~(B), where T~ are scaled
/// truncated values. Equals N_full * Z^(n-1) when T~ are correct.
GibbsPolynomial sum_over_partitions(int n, const std::vector<GibbsPolynomial>& scaled_truncated);

}  // namespace treedecay

#endif  // TREEDECAY_CORRELATIONS_HPP_
