#include "treedecay/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace treedecay {

std::string to_string(const SiteTuple& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ';';
    s += to_string(t[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Set partitions

namespace {

void grow_partitions(std::vector<int>& rgs, int pos, int blocks, int n,
                     const std::function<void(const SetPartition&)>& visit) {
  if (pos == n) {
    SetPartition p;
    p.blocks.assign(static_cast<std::size_t>(blocks), {});
    for (int i = 0; i < n; ++i) p.blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])].push_back(i);
    visit(p);
    return;
  }
  for (int b = 0; b <= blocks; ++b) {
    rgs[static_cast<std::size_t>(pos)] = b;
    grow_partitions(rgs, pos + 1, std::max(blocks, b + 1), n, visit);
  }
}

}  // namespace

void enumerate_partitions(int n, const std::function<void(const SetPartition&)>& visit) {
  if (n < 0) throw std::domain_error("enumerate_partitions: negative size");
  if (n > 12) throw ResourceError("enumerate_partitions: n > 12", 4213597);  // Bell(12)
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  grow_partitions(rgs, 0, 0, n, visit);
}

std::vector<SetPartition> set_partitions(int n) {
  std::vector<SetPartition> out;
  enumerate_partitions(n, [&](const SetPartition& p) { out.push_back(p); });
  return out;
}

// ---------------------------------------------------------------------------
// Moments

TupleMoments::TupleMoments(const Box& box, SiteTuple tuple, SumMethod method, EnumerationCap cap)
    : box_(box), tuple_(std::move(tuple)) {
  if (tuple_.size() > 16) throw ResourceError("TupleMoments: more than 16 positions", std::uint64_t{1} << 17);
  const LatticeIndex lat(box_);
  std::vector<int> index;
  index.reserve(tuple_.size());
  for (const Site& s : tuple_) index.push_back(lat.require_index(s));

  // sigma_i^2 = 1: each subset reduces to the sites of odd multiplicity.
  const std::size_t total = std::size_t{1} << tuple_.size();
  std::map<std::vector<int>, std::size_t> unique;
  std::vector<std::vector<int>> products;
  std::vector<std::size_t> slot(total);
  for (std::size_t s = 0; s < total; ++s) {
    std::vector<int> odd;
    for (std::size_t k = 0; k < tuple_.size(); ++k) {
      if (!((s >> k) & 1u)) continue;
      auto it = std::find(odd.begin(), odd.end(), index[k]);
      if (it == odd.end()) {
        odd.push_back(index[k]);
      } else {
        odd.erase(it);
      }
    }
    std::sort(odd.begin(), odd.end());
    auto [it, inserted] = unique.emplace(odd, products.size());
    if (inserted) products.push_back(odd);
    slot[s] = it->second;
  }
  const auto sums = spin_product_sums(lat, products, method, cap);
  numerators_.reserve(total);
  for (std::size_t s = 0; s < total; ++s) numerators_.push_back(sums[slot[s]]);
}

std::vector<double> TupleMoments::moments(InverseTemperature beta) const {
  const SignedLog z = partition_function().log_abs_at(beta.log_u());
  std::vector<double> out;
  out.reserve(numerators_.size());
  for (const auto& n : numerators_) out.push_back((n.log_abs_at(beta.log_u()) / z).value());
  return out;
}

GibbsRatio moment_exact(const Box& box, const SiteTuple& t) {
  const TupleMoments tm(box, t);
  return GibbsRatio{tm.numerators().back(), tm.partition_function()};
}

double moment(const Box& box, InverseTemperature beta, const SiteTuple& t) {
  return moment_exact(box, t).value(beta);
}

// ---------------------------------------------------------------------------
// Truncated correlations

std::vector<GibbsPolynomial> scaled_truncated_all(const TupleMoments& tm) {
  const int n = tm.size();
  const std::size_t total = std::size_t{1} << n;
  const GibbsPolynomial& z = tm.partition_function();
  std::vector<GibbsPolynomial> zpow(static_cast<std::size_t>(n) + 1);
  zpow[0] = GibbsPolynomial::constant(1);
  for (std::size_t k = 1; k < zpow.size(); ++k) zpow[k] = zpow[k - 1] * z;

  auto pop = [](std::size_t s) { return static_cast<std::size_t>(std::popcount(s)); };
  std::vector<GibbsPolynomial> t(total);
  for (std::size_t s = 1; s < total; ++s) {
    const std::size_t low = s & (~s + 1);
    const std::size_t rest = s ^ low;
    GibbsPolynomial acc = tm.numerator(static_cast<std::uint32_t>(s)) * zpow[pop(s) - 1];
    if (rest != 0) {
      std::size_t sub = (rest - 1) & rest;
      while (true) {
        const std::size_t block = low | sub;
        const std::size_t other = s ^ block;
        acc -= t[block] * tm.numerator(static_cast<std::uint32_t>(other)) * zpow[pop(other) - 1];
        if (sub == 0) break;
        sub = (sub - 1) & rest;
      }
    }
    t[s] = std::move(acc);
  }
  return t;
}

GibbsRatio truncated_exact(const Box& box, const SiteTuple& t) {
  if (t.empty()) throw std::domain_error("truncated: empty tuple");
  const TupleMoments tm(box, t);
  auto scaled = scaled_truncated_all(tm);
  return GibbsRatio{std::move(scaled.back()), tm.partition_function().pow(static_cast<unsigned>(t.size()))};
}

double truncated(const Box& box, InverseTemperature beta, const SiteTuple& t) {
  return truncated_exact(box, t).value(beta);
}

SignedLog log_truncated(const Box& box, InverseTemperature beta, const SiteTuple& t) {
  return truncated_exact(box, t).log_value(beta);
}

GibbsPolynomial sum_over_partitions(int n, const std::vector<GibbsPolynomial>& scaled_truncated) {
  GibbsPolynomial total;
  enumerate_partitions(n, [&](const SetPartition& p) {
    GibbsPolynomial term = GibbsPolynomial::constant(1);
    for (const auto& block : p.blocks) {
      std::size_t mask = 0;
      for (int k : block) mask |= std::size_t{1} << k;
      term *= scaled_truncated.at(mask);
    }
    total += term;
  });
  return total;
}

// ---------------------------------------------------------------------------
// Polarization

namespace {

BigInt binomial(unsigned n, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Product in the group ring Z[(Z/2)^n]: basis elements indexed by parity masks.
std::vector<std::int64_t> xor_convolve(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::vector<std::int64_t> out(a.size(), 0);
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (a[x] == 0) continue;
    for (std::size_t y = 0; y < b.size(); ++y) out[x ^ y] += a[x] * b[y];
  }
  return out;
}

}  // namespace

GibbsRatio truncated_via_polarization_exact(const Box& box, const SiteTuple& t) {
  if (t.empty()) throw std::domain_error("truncated_via_polarization: empty tuple");
  if (t.size() > 8) throw ResourceError("truncated_via_polarization_exact: n > 8", std::uint64_t{1} << 16);
  const TupleMoments tm(box, t);
  const auto n = static_cast<unsigned>(t.size());
  const std::size_t total = std::size_t{1} << n;
  const GibbsPolynomial& z = tm.partition_function();
  std::vector<GibbsPolynomial> zpow(n + 1);
  zpow[0] = GibbsPolynomial::constant(1);
  for (unsigned k = 1; k <= n; ++k) zpow[k] = zpow[k - 1] * z;

  GibbsPolynomial sum;
  for (std::size_t eps = 0; eps < total; ++eps) {
    // X = sum_k eps_k sigma_{i_k}; bit k of eps set means eps_k = -1.
    std::vector<std::int64_t> x(total, 0);
    for (unsigned k = 0; k < n; ++k) x[std::size_t{1} << k] = ((eps >> k) & 1u) ? -1 : 1;
    // mu~_m: numerators of <X^m>, m = 0..n.
    std::vector<GibbsPolynomial> mu(n + 1);
    std::vector<std::int64_t> power(total, 0);
    power[0] = 1;
    mu[0] = z;
    for (unsigned m = 1; m <= n; ++m) {
      power = xor_convolve(power, x);
      GibbsPolynomial acc;
      for (std::size_t s = 0; s < total; ++s) {
        if (power[s] != 0) acc += tm.numerator(static_cast<std::uint32_t>(s)) * BigInt(power[s]);
      }
      mu[m] = std::move(acc);
    }
    // kappa~_m = kappa_m Z^m from
    // kappa_m = mu_m - sum_{j<m} C(m-1, j-1) kappa_j mu_{m-j}.
    std::vector<GibbsPolynomial> kappa(n + 1);
    for (unsigned m = 1; m <= n; ++m) {
      GibbsPolynomial acc = mu[m] * zpow[m - 1];
      for (unsigned j = 1; j < m; ++j) {
        acc -= kappa[j] * mu[m - j] * zpow[m - j - 1] * binomial(m - 1, j - 1);
      }
      kappa[m] = std::move(acc);
    }
    if (std::popcount(eps) % 2 == 0) {
      sum += kappa[n];
    } else {
      sum -= kappa[n];
    }
  }
  BigInt norm = BigInt(1) << n;
  for (unsigned k = 2; k <= n; ++k) norm *= k;
  return GibbsRatio{std::move(sum), zpow[n] * norm};
}

double truncated_via_polarization(const Box& box, InverseTemperature beta, const SiteTuple& t, EnumerationCap cap) {
  if (t.empty()) throw std::domain_error("truncated_via_polarization: empty tuple");
  if (t.size() > 12) throw ResourceError("truncated_via_polarization: n > 12", std::uint64_t{1} << 13);
  const LatticeIndex lat(box);
  std::vector<int> index;
  for (const Site& s : t) index.push_back(lat.require_index(s));
  const auto n = static_cast<unsigned>(t.size());
  const std::size_t signs = std::size_t{1} << n;

  std::vector<double> weight(static_cast<std::size_t>(lat.bond_count()) + 1);
  for (std::size_t b = 0; b < weight.size(); ++b) weight[b] = std::exp(beta.log_u() * static_cast<double>(b));

  // raw[eps][m] accumulates sum_sigma X_eps^m w(sigma).
  std::vector<std::vector<double>> raw(signs, std::vector<double>(n + 1, 0.0));
  double z = 0.0;
  gray_walk(
      lat,
      [&](std::uint64_t mask, int broken) {
        const double w = weight[static_cast<std::size_t>(broken)];
        z += w;
        for (std::size_t eps = 0; eps < signs; ++eps) {
          int x = 0;
          for (unsigned k = 0; k < n; ++k) {
            const int spin = ((mask >> index[k]) & 1u) ? -1 : 1;
            x += ((eps >> k) & 1u) ? -spin : spin;
          }
          double p = w;
          for (unsigned m = 1; m <= n; ++m) {
            p *= x;
            raw[eps][m] += p;
          }
        }
      },
      cap);

  std::vector<double> binom_row(n + 1, 1.0);
  double result = 0.0;
  for (std::size_t eps = 0; eps < signs; ++eps) {
    std::vector<double> mu(n + 1), kappa(n + 1, 0.0);
    mu[0] = 1.0;
    for (unsigned m = 1; m <= n; ++m) mu[m] = raw[eps][m] / z;
    for (unsigned m = 1; m <= n; ++m) {
      double acc = mu[m];
      double c = 1.0;  // C(m-1, j-1)
      for (unsigned j = 1; j < m; ++j) {
        acc -= c * kappa[j] * mu[m - j];
        c = c * static_cast<double>(m - j) / static_cast<double>(j);
      }
      kappa[m] = acc;
    }
    result += (std::popcount(eps) % 2 == 0 ? 1.0 : -1.0) * kappa[n];
  }
  double norm = std::ldexp(1.0, static_cast<int>(n));
  for (unsigned k = 2; k <= n; ++k) norm *= k;
  return result / norm;
}

}  // namespace treedecay
