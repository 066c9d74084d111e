#include "treedecay/replica.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace treedecay {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

Complex root_of_unity(int n, int power) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(mod(power, n)) / static_cast<double>(n);
  return std::polar(1.0, angle);
}

void require_gamma(int n, int gamma) {
  if (n < 1) throw std::domain_error("replica count must be >= 1");
  if (gamma < 1 || gamma > n) throw std::domain_error("gamma must lie in 1..n");
}

}  // namespace

// ---------------------------------------------------------------------------
// ReplicaConfig

ReplicaConfig::ReplicaConfig(std::vector<SpinConfig> copies) : copies_(std::move(copies)) {
  if (copies_.empty()) throw std::domain_error("ReplicaConfig: need at least one copy");
  for (const auto& c : copies_) {
    if (!(c.box() == copies_.front().box())) throw std::domain_error("ReplicaConfig: copies on different boxes");
  }
}

ReplicaConfig ReplicaConfig::ground(const Box& box, int n) {
  if (n < 1) throw std::domain_error("ReplicaConfig: need at least one copy");
  return ReplicaConfig(std::vector<SpinConfig>(static_cast<std::size_t>(n), SpinConfig(box)));
}

ReplicaConfig ReplicaConfig::from_masks(const LatticeIndex& lat, std::span<const Bits> minus) {
  std::vector<SpinConfig> copies;
  for (const Bits& m : minus) {
    std::vector<int> spins(static_cast<std::size_t>(lat.size()));
    for (int i = 0; i < lat.size(); ++i) spins[static_cast<std::size_t>(i)] = m.test(static_cast<std::size_t>(i)) ? -1 : 1;
    copies.emplace_back(lat.box(), std::move(spins));
  }
  return ReplicaConfig(std::move(copies));
}

std::vector<int> ReplicaConfig::vector_spin(std::size_t index) const {
  std::vector<int> v;
  v.reserve(copies_.size());
  for (const auto& c : copies_) v.push_back(c.spin(index));
  return v;
}

std::vector<Bits> ReplicaConfig::minus_masks(const LatticeIndex& lat) const {
  if (!lat.fits_bits()) throw ResourceError("box too large for bitset kernels", lat.size());
  std::vector<Bits> out;
  for (const auto& c : copies_) {
    Bits b;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c.spin(i) < 0) b.set(i);
    }
    out.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transform

ReplicaTransform::ReplicaTransform(int n) : n_(n) {
  if (n < 1) throw std::domain_error("ReplicaTransform: n must be >= 1");
  u_.resize(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int a = 1; a <= n; ++a) {
    for (int b = 1; b <= n; ++b) u_(a - 1, b - 1) = scale * root_of_unity(n, a * (b - 1));
  }
}

Complex ReplicaTransform::omega() const { return root_of_unity(n_, 1); }

Eigen::MatrixXcd ReplicaTransform::diagonal() const {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n_, n_);
  for (int a = 1; a <= n_; ++a) d(a - 1, a - 1) = root_of_unity(n_, a);
  return d;
}

Eigen::MatrixXd ReplicaTransform::cyclic_matrix() const {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n_, n_);
  for (int a = 0; a < n_; ++a) p(a, mod(a - 1, n_)) = 1.0;
  return p;
}

double ReplicaTransform::unitarity_defect() const {
  const Eigen::MatrixXcd e = u_ * u_.adjoint() - Eigen::MatrixXcd::Identity(n_, n_);
  return e.cwiseAbs().maxCoeff();
}

double ReplicaTransform::diagonalization_defect() const {
  const Eigen::MatrixXcd e = u_ * cyclic_matrix().cast<Complex>() - diagonal() * u_;
  return e.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// s-variables

Eigen::VectorXcd SVariableField::vector_at(const Site& site) const {
  const LatticeIndex lat(box);
  const int i = lat.index_of(site);
  if (i >= 0) return values[static_cast<std::size_t>(i)];
  if (!box.is_boundary(site)) throw std::domain_error("site " + to_string(site) + " outside the box closure");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
  v(n - 1) = std::sqrt(static_cast<double>(n));
  return v;
}

Complex SVariableField::at(const Site& site, int alpha) const {
  if (alpha < 1 || alpha > n) throw std::domain_error("replica index out of range");
  return vector_at(site)(alpha - 1);
}

SVariableField to_s_variables(const ReplicaConfig& rc) {
  const ReplicaTransform u(rc.n());
  SVariableField sf{rc.box(), rc.n(), {}};
  const std::size_t size = rc.copy(0).size();
  sf.values.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    Eigen::VectorXd sigma(rc.n());
    for (int a = 0; a < rc.n(); ++a) sigma(a) = rc.copy(a).spin(i);
    sf.values.push_back(u.forward(sigma));
  }
  return sf;
}

ReplicaConfig from_s_variables(const SVariableField& sf) {
  const ReplicaTransform u(sf.n);
  std::vector<std::vector<int>> spins(static_cast<std::size_t>(sf.n), std::vector<int>(sf.values.size()));
  for (std::size_t i = 0; i < sf.values.size(); ++i) {
    const Eigen::VectorXcd sigma = u.inverse(sf.values[i]);
    for (int a = 0; a < sf.n; ++a) {
      const Complex x = sigma(a);
      const int rounded = x.real() >= 0 ? 1 : -1;
      if (std::abs(x - Complex(rounded, 0.0)) > 1e-9) {
        throw std::domain_error("from_s_variables: reconstructed spin is not +-1");
      }
      spins[static_cast<std::size_t>(a)][i] = rounded;
    }
  }
  std::vector<SpinConfig> copies;
  for (auto& s : spins) copies.emplace_back(sf.box, std::move(s));
  return ReplicaConfig(std::move(copies));
}

std::vector<long long> s_group_ring(std::span<const int> vector_spin, int alpha) {
  const int n = static_cast<int>(vector_spin.size());
  std::vector<long long> c(static_cast<std::size_t>(n), 0);
  for (int b = 1; b <= n; ++b) c[static_cast<std::size_t>(mod(alpha * (b - 1), n))] += vector_spin[static_cast<std::size_t>(b - 1)];
  return c;
}

bool diagonalization_holds_exactly(const ReplicaConfig& rc) {
  const ReplicaConfig shifted = apply_cyclic(rc, CyclicAction::global(1));
  const int n = rc.n();
  for (std::size_t i = 0; i < rc.copy(0).size(); ++i) {
    const auto before = rc.vector_spin(i);
    const auto after = shifted.vector_spin(i);
    for (int a = 1; a <= n; ++a) {
      const auto s = s_group_ring(before, a);
      const auto t = s_group_ring(after, a);
      // Multiplication by omega^a rotates the coefficients by a.
      for (int m = 0; m < n; ++m) {
        if (t[static_cast<std::size_t>(mod(m + a, n))] != s[static_cast<std::size_t>(m)]) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cyclic actions and energy

ReplicaConfig apply_cyclic(const ReplicaConfig& rc, const CyclicAction& action) {
  const LatticeIndex lat(rc.box());
  std::vector<int> affected;
  if (action.region) {
    for (const Site& s : *action.region) {
      const int i = lat.index_of(s);
      if (i < 0) throw std::domain_error("apply_cyclic: region site " + to_string(s) + " is not interior");
      affected.push_back(i);
    }
  } else {
    affected.resize(static_cast<std::size_t>(lat.size()));
    std::iota(affected.begin(), affected.end(), 0);
  }
  const int n = rc.n();
  ReplicaConfig out = rc;
  for (int i : affected) {
    const auto v = rc.vector_spin(static_cast<std::size_t>(i));
    for (int a = 0; a < n; ++a) out.copy(a).set(static_cast<std::size_t>(i), v[static_cast<std::size_t>(mod(a - action.power, n))]);
  }
  return out;
}

ReplicaConfig apply_permutation(const ReplicaConfig& rc, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != rc.n()) throw std::domain_error("apply_permutation: wrong length");
  std::vector<SpinConfig> copies;
  for (int p : perm) copies.push_back(rc.copy(p));
  return ReplicaConfig(std::move(copies));
}

int replica_energy(const ReplicaConfig& rc) {
  int total = 0;
  for (const auto& c : rc.copies()) total += energy(c);
  return total;
}

double replica_energy_from_s(const SVariableField& sf) {
  const LatticeIndex lat(sf.box);
  Eigen::VectorXcd ring = Eigen::VectorXcd::Zero(sf.n);
  ring(sf.n - 1) = std::sqrt(static_cast<double>(sf.n));
  double total = 0.0;
  for (const auto& bond : lat.bonds()) {
    const Eigen::VectorXcd& a = sf.values[static_cast<std::size_t>(bond.a)];
    const Eigen::VectorXcd& b = bond.b == LatticeIndex::kRing ? ring : sf.values[static_cast<std::size_t>(bond.b)];
    total += (a - b).squaredNorm();
  }
  return 0.5 * total;
}

// ---------------------------------------------------------------------------
// Replica expectations

Complex s_moment_from_moments(std::span<const double> subset_moments, int k, int n, int gamma) {
  require_gamma(n, gamma);
  if (subset_moments.size() != (std::size_t{1} << k)) throw std::invalid_argument("s_moment: moment table size");
  // Assign each position a copy label; copies are independent and identical,
  // so the joint moment is the product of single-copy moments of each class.
  std::vector<int> label(static_cast<std::size_t>(k), 0);
  Complex total = 0.0;
  while (true) {
    int phase = 0;
    std::vector<std::size_t> classes(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < k; ++j) {
      phase += label[static_cast<std::size_t>(j)];
      classes[static_cast<std::size_t>(label[static_cast<std::size_t>(j)])] |= std::size_t{1} << j;
    }
    double prod = 1.0;
    for (std::size_t c : classes) prod *= subset_moments[c];
    total += root_of_unity(n, gamma * phase) * prod;
    int j = 0;
    while (j < k && ++label[static_cast<std::size_t>(j)] == n) label[static_cast<std::size_t>(j++)] = 0;
    if (j == k) break;
  }
  return total * std::pow(static_cast<double>(n), -0.5 * k);
}

std::vector<Complex> s_moments_all_subsets(std::span<const double> subset_moments, int k, int n, int gamma) {
  const std::size_t total = std::size_t{1} << k;
  std::vector<Complex> out(total);
  for (std::size_t s = 0; s < total; ++s) {
    std::vector<std::size_t> positions;
    for (int j = 0; j < k; ++j) {
      if ((s >> j) & 1u) positions.push_back(static_cast<std::size_t>(j));
    }
    const int m = static_cast<int>(positions.size());
    std::vector<double> sub(std::size_t{1} << m);
    for (std::size_t q = 0; q < sub.size(); ++q) {
      std::size_t mask = 0;
      for (int j = 0; j < m; ++j) {
        if ((q >> j) & 1u) mask |= std::size_t{1} << positions[static_cast<std::size_t>(j)];
      }
      sub[q] = subset_moments[mask];
    }
    out[s] = s_moment_from_moments(sub, m, n, gamma);
  }
  return out;
}

Complex s_moment(const Box& box, InverseTemperature beta, int n, int gamma, const SiteTuple& t) {
  require_gamma(n, gamma);
  const TupleMoments tm(box, t);
  const auto moments = tm.moments(beta);
  return s_moment_from_moments(moments, tm.size(), n, gamma);
}

Complex s_moment_joint(const Box& box, InverseTemperature beta, int n, int gamma, const SiteTuple& t,
                       EnumerationCap cap) {
  require_gamma(n, gamma);
  const LatticeIndex lat(box);
  std::vector<int> index;
  for (const Site& s : t) index.push_back(lat.require_index(s));
  const int k = lat.size();
  cap.require(static_cast<unsigned>(n * k), "joint replica enumeration");

  std::vector<std::uint64_t> masks;
  std::vector<double> weights;
  gray_walk(
      lat,
      [&](std::uint64_t mask, int broken) {
        masks.push_back(mask);
        weights.push_back(std::exp(beta.log_u() * broken));
      },
      cap);

  std::vector<Complex> phase(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) phase[static_cast<std::size_t>(a)] = root_of_unity(n, gamma * a);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const std::size_t states = masks.size();

  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  Complex num = 0.0;
  double z = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t c : pick) w *= weights[c];
    Complex prod = 1.0;
    for (int i : index) {
      Complex s = 0.0;
      for (int a = 0; a < n; ++a) {
        const int spin = ((masks[pick[static_cast<std::size_t>(a)]] >> i) & 1u) ? -1 : 1;
        s += phase[static_cast<std::size_t>(a)] * static_cast<double>(spin);
      }
      prod *= s * scale;
    }
    num += prod * w;
    z += w;
    int a = 0;
    while (a < n && ++pick[static_cast<std::size_t>(a)] == states) pick[static_cast<std::size_t>(a++)] = 0;
    if (a == n) break;
  }
  return num / z;
}

GibbsPolynomial s_moment_numerator_n2(const TupleMoments& tm, int gamma) {
  require_gamma(2, gamma);
  const int k = tm.size();
  const std::size_t total = std::size_t{1} << k;
  const std::size_t full = total - 1;
  GibbsPolynomial p;
  // Positions in `s` go to copy 2 and the rest to copy 1; omega = -1.
  for (std::size_t s = 0; s < total; ++s) {
    GibbsPolynomial term = tm.numerator(static_cast<std::uint32_t>(full ^ s)) * tm.numerator(static_cast<std::uint32_t>(s));
    if ((gamma * std::popcount(s)) % 2 == 0) {
      p += term;
    } else {
      p -= term;
    }
  }
  return p;
}

IdentityReport verify_representation(const Box& box, InverseTemperature beta, int n, const SiteTuple& t, int gamma) {
  require_gamma(n, gamma);
  if (static_cast<int>(t.size()) != n) throw std::domain_error("verify_representation: tuple length must equal n");
  if (std::gcd(n, gamma) != 1) throw std::domain_error("verify_representation: gcd(n, gamma) must be 1");
  const TupleMoments tm(box, t);
  IdentityReport r;
  r.n = n;
  r.gamma = gamma;
  r.beta = beta.value();
  r.sites = t;
  auto scaled = scaled_truncated_all(tm);
  const GibbsRatio lhs{scaled.back(), tm.partition_function().pow(static_cast<unsigned>(n))};
  r.lhs = lhs.value(beta);
  r.rhs = std::pow(static_cast<double>(n), 0.5 * (n - 2)) * s_moment_from_moments(tm.moments(beta), n, n, gamma);
  r.abs_diff = std::abs(Complex(r.lhs, 0.0) - r.rhs);
  if (n == 2) r.exact = (scaled.back() * BigInt(2)) == s_moment_numerator_n2(tm, gamma);
  return r;
}

bool representation_exact_n2(const Box& box, const SiteTuple& t) {
  if (t.size() != 2) throw std::domain_error("representation_exact_n2: tuple length must be 2");
  const TupleMoments tm(box, t);
  return scaled_truncated_all(tm).back() * BigInt(2) == s_moment_numerator_n2(tm, 1);
}

std::string to_json(const IdentityReport& r) {
  nlohmann::json j;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs.real();
  j["rhs_imag"] = r.rhs.imag();
  j["abs_diff"] = r.abs_diff;
  j["n"] = r.n;
  j["gamma"] = r.gamma;
  j["beta"] = r.beta;
  j["sites"] = to_string(r.sites);
  if (r.exact) j["exact"] = *r.exact;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Counterexample to local symmetry

ReplicaConfig counterexample_config(int side) {
  if (side < 1) throw std::domain_error("counterexample: side must be >= 1");
  const int extent = side + 4;
  const Box box({extent, extent});
  SpinConfig first(box);
  SpinConfig second(box);
  for (int x = 1; x <= side + 2; ++x) {
    for (int y = 1; y <= side + 2; ++y) {
      const bool inner = x >= 2 && x <= side + 1 && y >= 2 && y <= side + 1;
      if (inner) {
        second.set(Site{x, y}, -1);
      } else {
        first.set(Site{x, y}, -1);
      }
    }
  }
  return ReplicaConfig({first, second});
}

CounterexampleReport local_symmetry_counterexample(int side) {
  const ReplicaConfig rc = counterexample_config(side);
  std::vector<Site> k;
  for (int x = 2; x <= side + 1; ++x) {
    for (int y = 2; y <= side + 1; ++y) k.push_back(Site{x, y});
  }
  CounterexampleReport r;
  r.side = side;
  r.box = rc.box();
  r.region = SiteSet(k);
  r.boundary_size = static_cast<int>(boundary_faces(r.region).size());
  r.energy_before = replica_energy(rc);
  const ReplicaConfig once = apply_cyclic(rc, CyclicAction::local(r.region, 1));
  r.energy_after = replica_energy(once);
  r.energy_twice = replica_energy(apply_cyclic(once, CyclicAction::local(r.region, 1)));
  return r;
}

}  // namespace treedecay
