#include "treedecay/continents.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace treedecay {

std::size_t ReplicaContour::length() const {
  std::size_t total = 0;
  for (const auto& c : per_copy) total += c.size();
  return total;
}

// ---------------------------------------------------------------------------
// Kernel

ContinentKernel::ContinentKernel(const LatticeIndex& lat) : lat_(lat) {
  if (!lat.fits_bits()) throw ResourceError("box too large for continent kernels", static_cast<std::uint64_t>(lat.size()));
  adjacency_.assign(static_cast<std::size_t>(lat.size()), {});
  ring_bond_.assign(static_cast<std::size_t>(lat.size()), -1);
  for (int e = 0; e < lat.bond_count(); ++e) {
    const auto& bond = lat.bonds()[static_cast<std::size_t>(e)];
    if (bond.b == LatticeIndex::kRing) {
      if (ring_bond_[static_cast<std::size_t>(bond.a)] < 0) ring_bond_[static_cast<std::size_t>(bond.a)] = e;
    } else {
      adjacency_[static_cast<std::size_t>(bond.a)].emplace_back(bond.b, e);
      adjacency_[static_cast<std::size_t>(bond.b)].emplace_back(bond.a, e);
    }
  }
}

Bits ContinentKernel::sea(std::span<const Bits> minus) const {
  Bits any_minus;
  for (const Bits& m : minus) any_minus |= m;
  Bits plus = lat_.all_sites();
  plus.subtract(any_minus);
  return lat_.flood_sites(lat_.ring_touching() & plus, plus);
}

std::vector<Bits> ContinentKernel::continents(std::span<const Bits> minus, Bits& sea_out) const {
  sea_out = sea(minus);
  Bits rest = lat_.all_sites();
  rest.subtract(sea_out);
  std::vector<Bits> out;
  while (rest.any()) {
    Bits seed;
    seed.set(rest.first());
    const Bits comp = lat_.flood_sites(seed, rest);
    out.push_back(comp);
    rest.subtract(comp);
  }
  return out;
}

std::vector<Bits> ContinentKernel::continents(std::span<const Bits> minus) const {
  Bits sea_bits;
  return continents(minus, sea_bits);
}

std::vector<Bits> ContinentKernel::contour(std::span<const Bits> minus, const Bits& k) const {
  const Bits edge = lat_.region_boundary(k);
  std::vector<Bits> out;
  out.reserve(minus.size());
  for (const Bits& m : minus) {
    const Bits broken = lat_.broken_bonds(m);
    out.push_back(lat_.flood_bonds(broken & edge, broken));
  }
  return out;
}

Bits ContinentKernel::enclosed(const Bits& faces) const {
  const std::size_t n = adjacency_.size();
  std::vector<int> parity(n, -1);
  std::vector<int> queue;
  queue.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int e = ring_bond_[i];
    if (e < 0) continue;
    parity[i] = faces.test(static_cast<std::size_t>(e)) ? 1 : 0;
    queue.push_back(static_cast<int>(i));
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int i = queue[head];
    for (auto [j, e] : adjacency_[static_cast<std::size_t>(i)]) {
      if (parity[static_cast<std::size_t>(j)] >= 0) continue;
      parity[static_cast<std::size_t>(j)] = parity[static_cast<std::size_t>(i)] ^ (faces.test(static_cast<std::size_t>(e)) ? 1 : 0);
      queue.push_back(j);
    }
  }
  Bits out;
  for (std::size_t i = 0; i < n; ++i) {
    if (parity[i] == 1) out.set(i);
  }
  return out;
}

std::vector<Bits> ContinentKernel::remove(std::span<const Bits> minus, std::span<const Bits> contour) const {
  if (minus.size() != contour.size()) throw std::invalid_argument("remove: copy count mismatch");
  std::vector<Bits> out;
  out.reserve(minus.size());
  for (std::size_t a = 0; a < minus.size(); ++a) {
    const Bits flipped = minus[a] ^ enclosed(contour[a]);
    if (lat_.broken_bonds(flipped) != (lat_.broken_bonds(minus[a]) ^ contour[a])) {
      throw std::logic_error("remove: face set is not a union of closed contours");
    }
    out.push_back(flipped);
  }
  return out;
}

int ContinentKernel::broken(std::span<const Bits> minus) const {
  int total = 0;
  for (const Bits& m : minus) total += static_cast<int>(lat_.broken_bonds(m).count());
  return total;
}

// ---------------------------------------------------------------------------
// Config-level operations

namespace {

Bits require_continent(const ContinentKernel& kernel, std::span<const Bits> minus, const SiteSet& k) {
  const Bits kb = kernel.lattice().to_bits(k);
  for (const Bits& c : kernel.continents(minus)) {
    if (c == kb) return kb;
  }
  throw std::domain_error("the given site set is not a continent of the configuration");
}

}  // namespace

ContinentDecomposition decompose(const ReplicaConfig& rc) {
  const LatticeIndex lat(rc.box());
  const ContinentKernel kernel(lat);
  const auto minus = rc.minus_masks(lat);
  Bits sea_bits;
  const auto comps = kernel.continents(minus, sea_bits);
  ContinentDecomposition out;
  out.sea = lat.to_site_set(sea_bits);
  for (const Bits& c : comps) out.continents.push_back(lat.to_site_set(c));
  return out;
}

ReplicaContour continent_contour(const ReplicaConfig& rc, const SiteSet& k) {
  const LatticeIndex lat(rc.box());
  const ContinentKernel kernel(lat);
  const auto minus = rc.minus_masks(lat);
  const Bits kb = require_continent(kernel, minus, k);
  ReplicaContour out;
  for (const Bits& c : kernel.contour(minus, kb)) out.per_copy.push_back(lat.to_face_set(c));
  return out;
}

ReplicaConfig remove_contour(const ReplicaConfig& rc, const SiteSet& k) {
  const LatticeIndex lat(rc.box());
  const ContinentKernel kernel(lat);
  const auto minus = rc.minus_masks(lat);
  const Bits kb = require_continent(kernel, minus, k);
  const auto c = kernel.contour(minus, kb);
  const auto removed = kernel.remove(minus, c);
  return ReplicaConfig::from_masks(lat, removed);
}

void for_each_joint_config(const LatticeIndex& lat, int n, const std::function<void(std::span<const Bits>, int)>& visit,
                           EnumerationCap cap) {
  if (n < 1) throw std::domain_error("for_each_joint_config: n must be >= 1");
  const int k = lat.size();
  if (static_cast<long long>(n) * k > 63) {
    throw ResourceError("joint enumeration", ~std::uint64_t{0});
  }
  cap.require(static_cast<unsigned>(n * k), "joint replica enumeration");
  std::vector<Bits> masks;
  std::vector<int> broken;
  gray_walk(
      lat,
      [&](std::uint64_t mask, int b) {
        masks.push_back(Bits::from_word(mask));
        broken.push_back(b);
      },
      cap);
  const std::size_t states = masks.size();
  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  std::vector<Bits> joint(static_cast<std::size_t>(n), masks[0]);
  int total = n * broken[0];
  while (true) {
    visit(joint, total);
    int a = 0;
    while (a < n) {
      auto& p = pick[static_cast<std::size_t>(a)];
      total -= broken[p];
      p = p + 1 == states ? 0 : p + 1;
      total += broken[p];
      joint[static_cast<std::size_t>(a)] = masks[p];
      if (p != 0) break;
      ++a;
    }
    if (a == n) break;
  }
}

// ---------------------------------------------------------------------------
// Condensation

std::vector<CondensationReport> condensation_check(const Box& box, std::span<const double> betas, int n,
                                                   const SiteTuple& t, EnumerationCap cap) {
  const LatticeIndex lat(box);
  const ContinentKernel kernel(lat);
  std::vector<int> index;
  for (const Site& s : t) index.push_back(lat.require_index(s));
  if (index.empty()) throw std::domain_error("condensation_check: empty tuple");

  const std::size_t levels = static_cast<std::size_t>(n * lat.bond_count()) + 1;
  std::vector<std::complex<double>> single(levels), scattered(levels);
  std::vector<double> mass(levels, 0.0), count(levels, 0.0);
  std::vector<long long> scattered_int(levels, 0);

  std::vector<std::complex<double>> phase(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) phase[static_cast<std::size_t>(a)] = std::polar(1.0, 2.0 * std::numbers::pi * a / n);
  const double scale = std::pow(static_cast<double>(n), -0.5 * static_cast<double>(index.size()));

  for_each_joint_config(
      lat, n,
      [&](std::span<const Bits> minus, int broken) {
        const auto h = static_cast<std::size_t>(broken);
        count[h] += 1.0;
        std::complex<double> prod = 1.0;
        long long prod_int = 1;  // n = 2: prod (sigma1 - sigma2)
        for (int i : index) {
          std::complex<double> s = 0.0;
          for (int a = 0; a < n; ++a) {
            s += phase[static_cast<std::size_t>(a)] * (minus[static_cast<std::size_t>(a)].test(static_cast<std::size_t>(i)) ? -1.0 : 1.0);
          }
          prod *= s;
          if (n == 2) {
            prod_int *= (minus[0].test(static_cast<std::size_t>(i)) ? -1 : 1) - (minus[1].test(static_cast<std::size_t>(i)) ? -1 : 1);
          }
        }
        if (std::abs(prod) < 1e-12) return;
        prod *= scale;
        bool together = false;
        for (const Bits& c : kernel.continents(minus)) {
          if (!c.test(static_cast<std::size_t>(index[0]))) continue;
          together = true;
          for (int i : index) together = together && c.test(static_cast<std::size_t>(i));
          break;
        }
        mass[h] += std::abs(prod);
        if (together) {
          single[h] += prod;
        } else {
          scattered[h] += prod;
          scattered_int[h] += prod_int;
        }
      },
      cap);

  std::vector<CondensationReport> out;
  for (double b : betas) {
    const InverseTemperature beta(b);
    CondensationReport r;
    r.n = n;
    r.beta = b;
    r.sites = t;
    double z = 0.0;
    for (std::size_t h = 0; h < levels; ++h) {
      const double w = std::exp(beta.log_u() * static_cast<double>(h));
      z += count[h] * w;
      r.single_continent += single[h] * w;
      r.scattered += scattered[h] * w;
      r.mass += mass[h] * w;
    }
    r.single_continent /= z;
    r.scattered /= z;
    r.mass /= z;
    r.total = r.single_continent + r.scattered;
    if (n == 2) {
      bool zero = true;
      for (long long v : scattered_int) zero = zero && v == 0;
      r.exact_zero = zero;
    }
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contour classes and the energy factor

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<Bits>& key) const {
    std::size_t h = key.size();
    for (const Bits& b : key) h = h * 1000003u ^ b.hash();
    return h;
  }
};

GibbsPolynomial from_counts(const std::vector<std::uint64_t>& counts) {
  std::vector<BigInt> c(counts.begin(), counts.end());
  return GibbsPolynomial(std::move(c));
}

}  // namespace

ContourTable contour_table(const Box& box, int n, EnumerationCap cap) {
  const LatticeIndex lat(box);
  const ContinentKernel kernel(lat);
  const std::size_t levels = static_cast<std::size_t>(n * lat.bond_count()) + 1;
  std::map<std::vector<Bits>, std::vector<std::uint64_t>> weights;
  std::vector<std::uint64_t> all(levels, 0);
  for_each_joint_config(
      lat, n,
      [&](std::span<const Bits> minus, int broken) {
        ++all[static_cast<std::size_t>(broken)];
        for (const Bits& k : kernel.continents(minus)) {
          std::vector<Bits> key{k};
          for (const Bits& c : kernel.contour(minus, k)) key.push_back(c);
          auto& w = weights[key];
          if (w.empty()) w.assign(levels, 0);
          ++w[static_cast<std::size_t>(broken)];
        }
      },
      cap);
  ContourTable table{box, n, from_counts(all), {}};
  for (auto& [key, w] : weights) {
    ContourClass cls;
    cls.continent = key[0];
    cls.contour.assign(key.begin() + 1, key.end());
    for (const Bits& c : cls.contour) cls.r += static_cast<int>(c.count());
    cls.weight = from_counts(w);
    table.classes.push_back(std::move(cls));
  }
  return table;
}

ContourProbability contour_probability(const ContourTable& table, InverseTemperature beta, const ContourClass& cls) {
  ContourProbability p;
  p.r = cls.r;
  p.bound = std::exp(-beta.value() * cls.r);
  const SignedLog num = cls.weight.log_abs_at(beta.log_u());
  if (num.is_zero()) {
    p.log_pr = -std::numeric_limits<double>::infinity();
    return p;
  }
  const SignedLog den = table.partition.log_abs_at(beta.log_u());
  p.log_pr = num.log_abs - den.log_abs;
  p.pr = std::exp(p.log_pr);
  p.satisfied = p.log_pr <= -beta.value() * cls.r + 1e-12;
  return p;
}

ContourProbability contour_probability(const ContourTable& table, InverseTemperature beta, const SiteSet& k,
                                       const ReplicaContour& c) {
  const LatticeIndex lat(table.box);
  if (static_cast<int>(c.per_copy.size()) != table.n) throw std::domain_error("contour_probability: copy count mismatch");
  ContourClass query;
  query.continent = lat.to_bits(k);
  for (const FaceSet& fs : c.per_copy) {
    Bits b;
    for (const Face& f : fs) {
      const int e = lat.bond_of(f);
      if (e < 0) throw std::domain_error("contour face " + to_string(f) + " is not a face of the box");
      b.set(static_cast<std::size_t>(e));
    }
    query.contour.push_back(b);
    query.r += static_cast<int>(b.count());
  }
  for (const ContourClass& cls : table.classes) {
    if (cls.continent == query.continent && cls.contour == query.contour) {
      return contour_probability(table, beta, cls);
    }
  }
  // Not realizable: empty sum.
  return contour_probability(table, beta, query);
}

ContourProbability contour_probability(const Box& box, InverseTemperature beta, int n, const SiteSet& k,
                                       const ReplicaContour& c, EnumerationCap cap) {
  return contour_probability(contour_table(box, n, cap), beta, k, c);
}

std::string to_json(const ContourProbability& p) {
  nlohmann::json j;
  j["r"] = p.r;
  j["pr"] = p.pr;
  j["bound"] = p.bound;
  j["satisfied"] = p.satisfied;
  return j.dump();
}

std::map<int, std::uint64_t> continent_contour_census(const Box& box, int n, const Site& anchor, EnumerationCap cap) {
  const LatticeIndex lat(box);
  const ContinentKernel kernel(lat);
  const auto a = static_cast<std::size_t>(lat.require_index(anchor));
  std::unordered_set<std::vector<Bits>, KeyHash> seen;
  std::map<int, std::uint64_t> out;
  for_each_joint_config(
      lat, n,
      [&](std::span<const Bits> minus, int) {
        for (const Bits& k : kernel.continents(minus)) {
          if (!k.test(a)) continue;
          std::vector<Bits> key{k};
          int r = 0;
          for (const Bits& c : kernel.contour(minus, k)) {
            key.push_back(c);
            r += static_cast<int>(c.count());
          }
          if (seen.insert(std::move(key)).second) ++out[r];
          break;
        }
      },
      cap);
  return out;
}

}  // namespace treedecay
