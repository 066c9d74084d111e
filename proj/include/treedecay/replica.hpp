#ifndef TREEDECAY_REPLICA_HPP_
#define TREEDECAY_REPLICA_HPP_

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "treedecay/correlations.hpp"
#include "treedecay/lattice_index.hpp"
#include "treedecay/spin_system.hpp"

namespace treedecay {

using Complex = std::complex<double>;

/// n independent copies of the spin system on one box, viewed as a vector spin.
/// Copy labels alpha = 1..n are stored at positions 0..n-1.
class ReplicaConfig {
 public:
  /// Throws std::domain_error for an empty list or copies on different boxes.
  explicit ReplicaConfig(std::vector<SpinConfig> copies);
  static ReplicaConfig ground(const Box& box, int n);
  static ReplicaConfig from_masks(const LatticeIndex& lat, std::span<const Bits> minus);

  int n() const { return static_cast<int>(copies_.size()); }
  const Box& box() const { return copies_.front().box(); }
  const SpinConfig& copy(int position) const { return copies_.at(static_cast<std::size_t>(position)); }
  SpinConfig& copy(int position) { return copies_.at(static_cast<std::size_t>(position)); }
  const std::vector<SpinConfig>& copies() const { return copies_; }

  /// The vector spin at an interior site index.
  std::vector<int> vector_spin(std::size_t index) const;
  std::vector<Bits> minus_masks(const LatticeIndex& lat) const;

  bool operator==(const ReplicaConfig&) const = default;

 private:
  std::vector<SpinConfig> copies_;
};

/// U_{alpha,alpha'} = n^{-1/2} omega^{alpha(alpha'-1)}, omega = exp(2 pi i / n).
class ReplicaTransform {
 public:
  /// Throws std::domain_error for n < 1.
  explicit ReplicaTransform(int n);

  int n() const { return n_; }
  Complex omega() const;
  const Eigen::MatrixXcd& matrix() const { return u_; }
  /// diag(omega^1, ..., omega^n).
  Eigen::MatrixXcd diagonal() const;
  /// Permutation matrix of the global cyclic action (P sigma)^{(alpha)} = sigma^{(alpha-1)}.
  Eigen::MatrixXd cyclic_matrix() const;

  /// max |(U U*)_{ab} - delta_ab|.
  double unitarity_defect() const;
  /// max |(U P - D U)_{ab}|.
  double diagonalization_defect() const;

  Eigen::VectorXcd forward(const Eigen::VectorXd& sigma) const { return u_ * sigma.cast<Complex>(); }
  Eigen::VectorXcd inverse(const Eigen::VectorXcd& s) const { return u_.adjoint() * s; }

 private:
  int n_;
  Eigen::MatrixXcd u_;
};

/// s_i^{(alpha)} for every interior site; ring sites carry (0, ..., 0, sqrt(n)).
struct SVariableField {
  Box box;
  int n = 0;
  std::vector<Eigen::VectorXcd> values;

  /// `alpha` in 1..n; ring sites return the boundary value.
  Complex at(const Site& site, int alpha) const;
  Eigen::VectorXcd vector_at(const Site& site) const;
};

SVariableField to_s_variables(const ReplicaConfig& rc);
/// Throws std::domain_error if some reconstructed spin is farther than 1e-9 from +-1.
ReplicaConfig from_s_variables(const SVariableField& sf);

/// Integer coefficients c with sqrt(n) s^{(alpha)} = sum_m c_m omega^m, i.e. the
/// image of the vector spin in Z[x]/(x^n - 1).
std::vector<long long> s_group_ring(std::span<const int> vector_spin, int alpha);
/// Checks pi0 s = D s at every site in the group ring, with no rounding.
bool diagonalization_holds_exactly(const ReplicaConfig& rc);

/// Cyclic shift of copies by `power` on `region`, or on every site when global.
struct CyclicAction {
  std::optional<SiteSet> region;
  int power = 1;

  static CyclicAction global(int power = 1) { return {std::nullopt, power}; }
  static CyclicAction local(SiteSet region, int power = 1) { return {std::move(region), power}; }
};

/// New copy alpha takes the old copy alpha - power at the affected sites.
/// Throws std::domain_error if the region contains a non-interior site.
ReplicaConfig apply_cyclic(const ReplicaConfig& rc, const CyclicAction& action);
/// New copy at position p is old copy perm[p] (global relabeling).
ReplicaConfig apply_permutation(const ReplicaConfig& rc, std::span<const int> perm);

int replica_energy(const ReplicaConfig& rc);
/// (1/2) sum over bonds of |s_i - s_j|^2, boundary bonds included.
double replica_energy_from_s(const SVariableField& sf);

/// <<s^{(gamma)}_{i_1} ... s^{(gamma)}_{i_k}>> for n copies, expanded into
/// single-copy moments by independence. Throws std::domain_error unless 1 <= gamma <= n.
Complex s_moment(const Box& box, InverseTemperature beta, int n, int gamma, const SiteTuple& t);
/// Same from precomputed single-copy subset moments of `t`.
Complex s_moment_from_moments(std::span<const double> subset_moments, int k, int n, int gamma);
/// s-moments of every sub-tuple (bitmask over positions).
std::vector<Complex> s_moments_all_subsets(std::span<const double> subset_moments, int k, int n, int gamma);
/// Brute-force joint enumeration over all n copies, capped.
Complex s_moment_joint(const Box& box, InverseTemperature beta, int n, int gamma, const SiteTuple& t,
                       EnumerationCap cap = default_cap());

/// n = 2: <<prod s^{(gamma)}>> = 2^{-k/2} P / Z^2. Returns P.
GibbsPolynomial s_moment_numerator_n2(const TupleMoments& tm, int gamma);

struct IdentityReport {
  double lhs = 0.0;
  Complex rhs;
  double abs_diff = 0.0;
  int n = 0;
  int gamma = 1;
  double beta = 0.0;
  SiteTuple sites;
  /// For n = 2 only: whether 2 T Z^2 = P holds as a polynomial identity.
  std::optional<bool> exact;
};

/// Truncated correlation against n^{(n-2)/2} <<s^{(gamma)} ... s^{(gamma)}>>.
/// Requires t.size() == n and gcd(n, gamma) == 1; throws std::domain_error otherwise.
IdentityReport verify_representation(const Box& box, InverseTemperature beta, int n, const SiteTuple& t,
                                     int gamma = 1);
/// Exact n = 2 check without evaluating at any temperature.
bool representation_exact_n2(const Box& box, const SiteTuple& t);

std::string to_json(const IdentityReport& r);

struct CounterexampleReport {
  int side = 1;
  Box box{{0, 0}};
  SiteSet region;
  int boundary_size = 0;
  int energy_before = 0;
  int energy_after = 0;
  int energy_twice = 0;
  int drop() const { return energy_before - energy_after; }
  int expected_drop() const { return 4 * boundary_size; }
};

/// n = 2, d = 2: a side x side square K with copies (+, -), framed by a one-site
/// ring with copies (-, +), inside a (side + 4)^2 interior that is otherwise +.
/// The local flip on K lowers the replica energy by 4 |dK|.
CounterexampleReport local_symmetry_counterexample(int side = 1);
ReplicaConfig counterexample_config(int side);

}  // namespace treedecay

#endif  // TREEDECAY_REPLICA_HPP_
