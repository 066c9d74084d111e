#include "treedecay/spin_system.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace treedecay {

InverseTemperature::InverseTemperature(double beta) : beta_(beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw std::domain_error("inverse temperature must be finite and nonnegative");
  }
}

double InverseTemperature::u() const { return std::exp(log_u()); }

void EnumerationCap::require(unsigned bits, std::string_view what) const {
  const std::uint64_t required = bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits);
  if (bits >= 64 || required > max_states) {
    throw ResourceError(std::string(what) + ": 2^" + std::to_string(bits) + " states exceed cap " +
                            std::to_string(max_states),
                        required);
  }
}

EnumerationCap default_cap() {
  EnumerationCap cap;
  if (const char* env = std::getenv("REPLICA_CAP"); env != nullptr && *env != '\0') {
    std::size_t used = 0;
    const std::string text(env);
    unsigned long long v = 0;
    try {
      v = std::stoull(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size()) throw std::invalid_argument("REPLICA_CAP must be a positive integer: '" + text + "'");
    cap.max_states = v;
  }
  return cap;
}

// ---------------------------------------------------------------------------
// SpinConfig

SpinConfig::SpinConfig(Box box) : box_(std::move(box)), spins_(box_.interior_size(), 1) {}

SpinConfig::SpinConfig(Box box, std::vector<int> spins) : box_(std::move(box)) {
  if (spins.size() != box_.interior_size()) throw std::domain_error("SpinConfig: wrong number of spins");
  spins_.reserve(spins.size());
  for (int s : spins) {
    if (s != 1 && s != -1) throw std::domain_error("SpinConfig: spins must be +1 or -1");
    spins_.push_back(static_cast<std::int8_t>(s));
  }
}

SpinConfig SpinConfig::from_minus_set(Box box, const SiteSet& minus) {
  SpinConfig cfg(std::move(box));
  for (const Site& s : minus) cfg.set(s, -1);
  return cfg;
}

SpinConfig SpinConfig::from_mask(const LatticeIndex& lat, std::uint64_t minus_mask) {
  SpinConfig cfg(lat.box());
  for (int i = 0; i < lat.size(); ++i) {
    if ((minus_mask >> i) & 1u) cfg.spins_[static_cast<std::size_t>(i)] = -1;
  }
  return cfg;
}

namespace {

std::size_t interior_index(const Box& box, const Site& s) {
  std::size_t idx = 0;
  for (int k = 0; k < box.dim(); ++k) {
    idx = idx * static_cast<std::size_t>(box.extent()[static_cast<std::size_t>(k)]) + static_cast<std::size_t>(s[k]);
  }
  return idx;
}

}  // namespace

int SpinConfig::spin(const Site& s) const {
  if (box_.is_interior(s)) return spins_[interior_index(box_, s)];
  if (box_.is_boundary(s)) return 1;
  throw std::domain_error("spin: site " + to_string(s) + " outside box closure");
}

void SpinConfig::set(const Site& s, int value) {
  if (!box_.is_interior(s)) throw std::domain_error("set: site " + to_string(s) + " is not interior");
  set(interior_index(box_, s), value);
}

void SpinConfig::set(std::size_t index, int value) {
  if (value != 1 && value != -1) throw std::domain_error("SpinConfig: spins must be +1 or -1");
  spins_.at(index) = static_cast<std::int8_t>(value);
}

SiteSet SpinConfig::minus_sites() const {
  std::vector<Site> out;
  const auto sites = box_.interior_sites();
  for (std::size_t i = 0; i < spins_.size(); ++i) {
    if (spins_[i] < 0) out.push_back(sites[i]);
  }
  return SiteSet(std::move(out));
}

int energy(const SpinConfig& cfg) {
  const auto sites = cfg.box().interior_sites();
  int h = 0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const int si = cfg.spin(i);
    for (int k = 0; k < cfg.box().dim(); ++k) {
      // Count each interior pair once via the +1 step; boundary pairs from both steps.
      for (int step : {-1, 1}) {
        Site t = sites[i];
        t.coords[static_cast<std::size_t>(k)] += step;
        if (cfg.box().is_interior(t)) {
          if (step == 1) h += 1 - si * cfg.spin(t);
        } else {
          h += 1 - si;
        }
      }
    }
  }
  return h;
}

void enumerate_configs(const Box& box, const std::function<void(const SpinConfig&)>& visit, EnumerationCap cap) {
  const LatticeIndex lat(box);
  SpinConfig cfg(box);
  std::uint64_t prev = 0;
  gray_walk(
      lat,
      [&](std::uint64_t mask, int) {
        const std::uint64_t changed = mask ^ prev;
        if (changed) {
          const auto i = static_cast<std::size_t>(std::countr_zero(changed));
          cfg.set(i, -cfg.spin(i));
        }
        prev = mask;
        visit(cfg);
      },
      cap);
}

// ---------------------------------------------------------------------------
// Exact weighted sums

namespace {

GibbsPolynomial to_gibbs(const std::vector<std::int64_t>& c) {
  std::vector<BigInt> out(c.begin(), c.end());
  return GibbsPolynomial(std::move(out));
}

struct SliceLayout {
  int axis = 0;
  int length = 0;
  int width = 0;  // sites per slice
  std::vector<int> slice;
  std::vector<int> position;
};

SliceLayout slice_layout(const LatticeIndex& lat) {
  const Box& box = lat.box();
  SliceLayout sl;
  for (int k = 0; k < box.dim(); ++k) {
    if (box.extent()[static_cast<std::size_t>(k)] > box.extent()[static_cast<std::size_t>(sl.axis)]) sl.axis = k;
  }
  sl.length = box.extent()[static_cast<std::size_t>(sl.axis)];
  sl.width = sl.length == 0 ? 0 : lat.size() / sl.length;
  sl.slice.resize(static_cast<std::size_t>(lat.size()));
  sl.position.resize(static_cast<std::size_t>(lat.size()));
  for (int i = 0; i < lat.size(); ++i) {
    const Site& s = lat.site(i);
    int pos = 0;
    for (int k = 0; k < box.dim(); ++k) {
      if (k == sl.axis) continue;
      pos = pos * box.extent()[static_cast<std::size_t>(k)] + s[k];
    }
    sl.slice[static_cast<std::size_t>(i)] = s[sl.axis];
    sl.position[static_cast<std::size_t>(i)] = pos;
  }
  return sl;
}

std::vector<GibbsPolynomial> transfer_matrix_sums(const LatticeIndex& lat,
                                                  const std::vector<std::vector<int>>& products) {
  const SliceLayout sl = slice_layout(lat);
  const std::size_t states = std::size_t{1} << sl.width;
  const std::size_t len = static_cast<std::size_t>(lat.bond_count()) + 1;

  // Broken bonds inside one slice, including the ring bonds on its sides.
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> lateral_ring(static_cast<std::size_t>(sl.width), 0);
  for (const auto& bond : lat.bonds()) {
    if (sl.slice[static_cast<std::size_t>(bond.a)] != 0) continue;
    const int pa = sl.position[static_cast<std::size_t>(bond.a)];
    if (bond.b == LatticeIndex::kRing) {
      if (bond.face.axis != sl.axis) ++lateral_ring[static_cast<std::size_t>(pa)];
    } else if (sl.slice[static_cast<std::size_t>(bond.b)] == 0) {
      pairs.emplace_back(pa, sl.position[static_cast<std::size_t>(bond.b)]);
    }
  }
  std::vector<int> intra(states, 0);
  for (std::size_t a = 0; a < states; ++a) {
    int c = 0;
    for (auto [p, q] : pairs) c += static_cast<int>(((a >> p) ^ (a >> q)) & 1u);
    for (int p = 0; p < sl.width; ++p) {
      if ((a >> p) & 1u) c += lateral_ring[static_cast<std::size_t>(p)];
    }
    intra[a] = c;
  }

  std::vector<GibbsPolynomial> out;
  out.reserve(products.size());
  std::vector<std::int64_t> v(states * len), tmp_a(len), tmp_b(len);
  for (const auto& product : products) {
    std::vector<std::uint64_t> sign_mask(static_cast<std::size_t>(sl.length), 0);
    for (int i : product) {
      sign_mask[static_cast<std::size_t>(sl.slice[static_cast<std::size_t>(i)])] ^=
          std::uint64_t{1} << sl.position[static_cast<std::size_t>(i)];
    }
    auto sign = [&](std::size_t state, int x) {
      return (std::popcount(state & sign_mask[static_cast<std::size_t>(x)]) & 1) ? -1 : 1;
    };
    // Slice-diagonal factor: u^intra(b) and the observable sign, in place.
    auto apply_diagonal = [&](int x) {
      for (std::size_t b = 0; b < states; ++b) {
        std::int64_t* row = v.data() + b * len;
        const auto shift = static_cast<std::size_t>(intra[b]);
        const int sg = sign(b, x);
        if (shift) {
          for (std::size_t deg = len; deg-- > shift;) row[deg] = row[deg - shift];
          for (std::size_t deg = 0; deg < shift; ++deg) row[deg] = 0;
        }
        if (sg < 0) {
          for (std::size_t deg = 0; deg < len; ++deg) row[deg] = -row[deg];
        }
      }
    };

    std::fill(v.begin(), v.end(), 0);
    for (std::size_t a = 0; a < states; ++a) v[a * len + static_cast<std::size_t>(std::popcount(a))] = 1;
    apply_diagonal(0);
    for (int x = 1; x < sl.length; ++x) {
      // Coupling between neighboring slices is u^{popcount(a xor b)}, a tensor
      // product of the 2x2 kernel [[1, u], [u, 1]] over slice positions.
      for (int p = 0; p < sl.width; ++p) {
        const std::size_t bit = std::size_t{1} << p;
        for (std::size_t a = 0; a < states; ++a) {
          if (a & bit) continue;
          std::int64_t* ra = v.data() + a * len;
          std::int64_t* rb = v.data() + (a | bit) * len;
          std::copy(ra, ra + len, tmp_a.begin());
          std::copy(rb, rb + len, tmp_b.begin());
          for (std::size_t deg = 1; deg < len; ++deg) {
            ra[deg] += tmp_b[deg - 1];
            rb[deg] += tmp_a[deg - 1];
          }
        }
      }
      apply_diagonal(x);
    }
    std::vector<std::int64_t> total(len, 0);
    for (std::size_t b = 0; b < states; ++b) {
      const auto shift = static_cast<std::size_t>(std::popcount(b));
      for (std::size_t deg = 0; deg + shift < len; ++deg) total[deg + shift] += v[b * len + deg];
    }
    out.push_back(to_gibbs(total));
  }
  return out;
}

std::vector<GibbsPolynomial> enumeration_sums(const LatticeIndex& lat, const std::vector<std::vector<int>>& products,
                                              EnumerationCap cap) {
  const std::size_t len = static_cast<std::size_t>(lat.bond_count()) + 1;
  std::vector<std::uint64_t> masks;
  masks.reserve(products.size());
  for (const auto& product : products) {
    std::uint64_t m = 0;
    for (int i : product) m ^= std::uint64_t{1} << i;
    masks.push_back(m);
  }
  std::vector<std::vector<std::int64_t>> acc(products.size(), std::vector<std::int64_t>(len, 0));
  gray_walk(
      lat,
      [&](std::uint64_t mask, int broken) {
        for (std::size_t p = 0; p < masks.size(); ++p) {
          acc[p][static_cast<std::size_t>(broken)] += (std::popcount(mask & masks[p]) & 1) ? -1 : 1;
        }
      },
      cap);
  std::vector<GibbsPolynomial> out;
  out.reserve(acc.size());
  for (const auto& a : acc) out.push_back(to_gibbs(a));
  return out;
}

}  // namespace

bool transfer_matrix_supported(const LatticeIndex& lat) {
  if (lat.size() == 0 || lat.size() > 62) return false;
  return slice_layout(lat).width <= 16;
}

std::vector<GibbsPolynomial> spin_product_sums(const LatticeIndex& lat, const std::vector<std::vector<int>>& products,
                                               SumMethod method, EnumerationCap cap) {
  for (const auto& product : products) {
    for (int i : product) {
      if (i < 0 || i >= lat.size()) throw std::domain_error("spin_product_sums: site index out of range");
    }
  }
  if (lat.size() == 0) return std::vector<GibbsPolynomial>(products.size(), GibbsPolynomial::constant(1));
  if (method == SumMethod::automatic) {
    method = transfer_matrix_supported(lat) ? SumMethod::transfer_matrix : SumMethod::enumeration;
  }
  if (method == SumMethod::transfer_matrix) {
    if (!transfer_matrix_supported(lat)) {
      throw ResourceError("transfer matrix: slice too wide or box too large", std::uint64_t{1} << 17);
    }
    return transfer_matrix_sums(lat, products);
  }
  return enumeration_sums(lat, products, cap);
}

GibbsPolynomial partition_function(const Box& box, SumMethod method, EnumerationCap cap) {
  const LatticeIndex lat(box);
  return spin_product_sums(lat, {{}}, method, cap).front();
}

SignedLog GibbsRatio::log_value(InverseTemperature beta) const {
  if (denominator.is_zero()) throw std::domain_error("GibbsRatio: zero denominator");
  return numerator.log_abs_at(beta.log_u()) / denominator.log_abs_at(beta.log_u());
}

double expectation(const Box& box, InverseTemperature beta, const Observable& f, EnumerationCap cap) {
  const LatticeIndex lat(box);
  std::vector<double> weight(static_cast<std::size_t>(lat.bond_count()) + 1);
  for (std::size_t b = 0; b < weight.size(); ++b) weight[b] = std::exp(beta.log_u() * static_cast<double>(b));
  double num = 0.0;
  double den = 0.0;
  SpinConfig cfg(box);
  std::uint64_t prev = 0;
  gray_walk(
      lat,
      [&](std::uint64_t mask, int broken) {
        if (const std::uint64_t changed = mask ^ prev) {
          const auto i = static_cast<std::size_t>(std::countr_zero(changed));
          cfg.set(i, -cfg.spin(i));
        }
        prev = mask;
        const double w = weight[static_cast<std::size_t>(broken)];
        num += f(cfg) * w;
        den += w;
      },
      cap);
  return num / den;
}

GibbsRatio expectation_exact(const Box& box, const IntegerObservable& f, EnumerationCap cap) {
  const LatticeIndex lat(box);
  const std::size_t len = static_cast<std::size_t>(lat.bond_count()) + 1;
  std::vector<BigInt> num(len, 0);
  std::vector<BigInt> den(len, 0);
  SpinConfig cfg(box);
  std::uint64_t prev = 0;
  gray_walk(
      lat,
      [&](std::uint64_t mask, int broken) {
        if (const std::uint64_t changed = mask ^ prev) {
          const auto i = static_cast<std::size_t>(std::countr_zero(changed));
          cfg.set(i, -cfg.spin(i));
        }
        prev = mask;
        num[static_cast<std::size_t>(broken)] += f(cfg);
        den[static_cast<std::size_t>(broken)] += 1;
      },
      cap);
  return GibbsRatio{GibbsPolynomial(std::move(num)), GibbsPolynomial(std::move(den))};
}

}  // namespace treedecay
