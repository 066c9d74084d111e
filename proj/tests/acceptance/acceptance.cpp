// Acceptance suite: one PASS/FAIL line per criterion, thresholds fixed below.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "treedecay/continents.hpp"
#include "treedecay/decay.hpp"
#include "treedecay/replica.hpp"
#include "treedecay/steiner.hpp"
#include "treedecay/surfaces.hpp"

using namespace treedecay;

namespace {

constexpr double kIdentityTol = 1e-9;
constexpr double kIdentitySeconds = 60.0;
constexpr double kVanishTol = 1e-10;
constexpr double kUnitaryTol = 1e-12;
constexpr double kCondensationTol = 1e-9;
constexpr int kCondensationTuples = 5;
constexpr double kCensusSeconds = 300.0;
constexpr int kSteinerInstances = 200;
constexpr int kManhattanPairs = 100;
constexpr double kProbabilitySlack = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::vector<SiteTuple> subsets(const std::vector<Site>& sites, int k) {
  std::vector<SiteTuple> out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  const int m = static_cast<int>(sites.size());
  if (k > m) return out;
  while (true) {
    SiteTuple t;
    for (int i : idx) t.push_back(sites[static_cast<std::size_t>(i)]);
    out.push_back(t);
    int p = k - 1;
    while (p >= 0 && idx[static_cast<std::size_t>(p)] == m - k + p) --p;
    if (p < 0) break;
    ++idx[static_cast<std::size_t>(p)];
    for (int q = p + 1; q < k; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
  return out;
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << v;
  return os.str();
}

Outcome replica_identity() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  int exact_checks = 0;
  for (const auto& ext : std::vector<std::vector<int>>{{1, 1}, {2, 2}, {2, 3}, {3, 3}}) {
    const Box box(ext);
    const auto sites = box.interior_sites();
    for (std::size_t i = 0; i < sites.size(); ++i) {
      for (std::size_t j = i; j < sites.size(); ++j) {
        ++exact_checks;
        if (!representation_exact_n2(box, {sites[i], sites[j]})) {
          o.pass = false;
          o.detail += " n=2 polynomial mismatch at " + to_string(SiteTuple{sites[i], sites[j]}) + ";";
        }
      }
    }
  }
  double worst = 0.0;
  int float_checks = 0;
  const std::vector<double> betas{0.2, 0.5, 1.0, 2.0};
  for (const auto& ext : std::vector<std::vector<int>>{{2, 2}, {2, 3}}) {
    const Box box(ext);
    const auto sites = box.interior_sites();
    for (int n : {3, 4}) {
      std::vector<SiteTuple> tuples = subsets(sites, n);
      SiteTuple repeated(static_cast<std::size_t>(n), sites[0]);
      repeated.back() = sites.back();
      tuples.push_back(repeated);
      for (const auto& t : tuples) {
        for (int gamma = 1; gamma <= n; ++gamma) {
          if (std::gcd(n, gamma) != 1) continue;
          for (double b : betas) {
            worst = std::max(worst, verify_representation(box, InverseTemperature(b), n, t, gamma).abs_diff);
            ++float_checks;
          }
        }
      }
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (worst >= kIdentityTol) o.pass = false;
  if (seconds >= kIdentitySeconds) o.pass = false;
  o.detail = std::to_string(exact_checks) + " exact n=2 identities; " + std::to_string(float_checks) +
             " n=3,4 checks, max |diff| " + sci(worst) + " (< " + sci(kIdentityTol) + "); " + sci(seconds) + " s" + o.detail;
  return o;
}

Outcome s_moment_vanishing() {
  Outcome o;
  double worst = 0.0;
  int checks = 0;
  const Box box({2, 2});
  const auto sites = box.interior_sites();
  for (int n = 2; n <= 4; ++n) {
    for (int k = 1; k < n; ++k) {
      for (const auto& t : subsets(sites, k)) {
        for (int gamma = 1; gamma <= n; ++gamma) {
          if ((k * gamma) % n == 0) continue;
          for (double b : {0.2, 0.5, 1.0, 2.0}) {
            worst = std::max(worst, std::abs(s_moment(box, InverseTemperature(b), n, gamma, t)));
            ++checks;
          }
        }
      }
    }
  }
  o.pass = worst < kVanishTol;
  o.detail = std::to_string(checks) + " s-moments with k gamma != 0 mod n, max |value| " + sci(worst) + " (< " + sci(kVanishTol) + ")";
  return o;
}

Outcome transform_checks() {
  Outcome o;
  double worst_unitary = 0.0;
  double worst_diag = 0.0;
  bool exact = true;
  for (int n = 1; n <= 16; ++n) {
    const ReplicaTransform u(n);
    worst_unitary = std::max(worst_unitary, u.unitarity_defect());
    worst_diag = std::max(worst_diag, u.diagonalization_defect());
    // Every vector spin in {+1,-1}^n appears at exactly one site.
    const int wide = (n + 1) / 2;
    const Box box({1 << wide, 1 << (n - wide)});
    std::vector<SpinConfig> copies;
    for (int a = 0; a < n; ++a) {
      std::vector<int> spins(box.interior_size());
      for (std::size_t site = 0; site < spins.size(); ++site) spins[site] = ((site >> a) & 1u) ? -1 : 1;
      copies.emplace_back(box, spins);
    }
    exact = exact && diagonalization_holds_exactly(ReplicaConfig(copies));
  }
  o.pass = worst_unitary < kUnitaryTol && exact;
  o.detail = "n <= 16: max ||UU*-I|| " + sci(worst_unitary) + " (< " + sci(kUnitaryTol) + "), float ||UP-DU|| " + sci(worst_diag) +
             ", exact pi0 s = D s over all vector spins: " + (exact ? "yes" : "NO");
  return o;
}

Outcome condensation() {
  Outcome o;
  const Box box({3, 3});
  const std::vector<double> betas{0.5, 1.0};
  const std::vector<SiteTuple> tuples{{Site{0, 0}, Site{2, 2}}, {Site{0, 0}, Site{0, 2}}, {Site{1, 1}, Site{2, 0}},
                                      {Site{0, 1}, Site{2, 1}}, {Site{0, 0}, Site{1, 0}},
                                      {Site{1, 0}, Site{1, 2}}};
  double worst = 0.0;
  bool exact = true;
  for (const auto& t : tuples) {
    for (const auto& r : condensation_check(box, betas, 2, t)) {
      worst = std::max(worst, r.relative());
      exact = exact && r.exact_zero.value_or(true);
    }
  }
  o.pass = worst < kCondensationTol && static_cast<int>(tuples.size()) >= kCondensationTuples;
  o.detail = std::to_string(tuples.size()) + " tuples x 2 betas on 3x3, n=2: max scattered/mass " + sci(worst) + " (< " +
             sci(kCondensationTol) + "); vanishes coefficientwise: " + (exact ? "yes" : "no");
  return o;
}

Outcome energy_identities() {
  Outcome o;
  const Box box({2, 2});
  const LatticeIndex lat(box);
  long long continents = 0, identity_fail = 0, local_fail = 0;
  for_each_joint_config(lat, 2, [&](std::span<const Bits> minus, int) {
    const ReplicaConfig rc = ReplicaConfig::from_masks(lat, minus);
    const int h = replica_energy(rc);
    const ContinentDecomposition dec = decompose(rc);
    for (const SiteSet& k : dec.continents) {
      ++continents;
      const auto c = continent_contour(rc, k);
      if (replica_energy(remove_contour(rc, k)) != h - 2 * static_cast<int>(c.length())) ++identity_fail;
      const ReplicaConfig flipped = apply_cyclic(rc, CyclicAction::local(k));
      if (replica_energy(flipped) != h || decompose(flipped) != dec) ++local_fail;
    }
  });
  const CounterexampleReport cx = local_symmetry_counterexample(1);
  o.pass = identity_fail == 0 && local_fail == 0 && cx.drop() == 16 && cx.drop() == 4 * cx.boundary_size;
  o.detail = std::to_string(continents) + " continents: H(s*) != H(s) - 2|C| in " + std::to_string(identity_fail) +
             ", local flip changes H or the decomposition in " + std::to_string(local_fail) + "; counterexample drop " + std::to_string(cx.drop()) +
             " (4|dK| = " + std::to_string(4 * cx.boundary_size) + ")";
  return o;
}

Outcome surface_census() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  std::ostringstream detail;
  const auto d2 = count_surfaces_upto(2, 10);
  const auto d3 = count_surfaces_upto(3, 7);
  if (d2[0] != 1 || d3[0] != 1 || d2[1] != 6 || d3[1] != 12) o.pass = false;
  double worst_ratio = 0.0;
  for (int d = 2; d <= 3; ++d) {
    const auto& counts = d == 2 ? d2 : d3;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const long double ratio = static_cast<long double>(counts[i]) / entropy_bound(d, static_cast<int>(i) + 1);
      worst_ratio = std::max(worst_ratio, static_cast<double>(ratio));
    }
  }
  if (worst_ratio > 1.0) o.pass = false;
  long long surfaces = 0, bad_trees = 0;
  for (int d = 2; d <= 3; ++d) {
    for (int r = 1; r <= census_limit(d); ++r) {
      for_each_surface(d, r, [&](const SurfaceGrid& grid, std::span<const int> cells) {
        ++surfaces;
        if (covering_tree_edges(grid, cells) != r - 1) ++bad_trees;
      });
    }
  }
  if (bad_trees != 0) o.pass = false;
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds >= kCensusSeconds) o.pass = false;
  detail << "N(1)=" << d2[0] << ", N(2)=" << d2[1] << " (d=2), " << d3[1] << " (d=3); N(10,d=2)=" << d2[9]
         << ", N(7,d=3)=" << d3[6] << "; max N/(3e2^d)^r " << sci(worst_ratio) << "; " << surfaces << " covering trees, "
         << bad_trees << " without r-1 edges; " << sci(seconds) << " s";
  o.detail = detail.str();
  return o;
}

Outcome contour_energy_bound() {
  Outcome o;
  const ContourTable table = contour_table(Box({2, 2}), 2);
  long long checks = 0, violations = 0;
  double worst = -1e300;
  for (double b : {0.5, 1.0, 2.0}) {
    for (const auto& cls : table.classes) {
      const auto p = contour_probability(table, InverseTemperature(b), cls);
      ++checks;
      worst = std::max(worst, p.log_pr + b * p.r);
      if (!(p.log_pr <= -b * p.r + kProbabilitySlack)) ++violations;
    }
  }
  o.pass = violations == 0 && checks > 0;
  o.detail = std::to_string(table.classes.size()) + " realizable (K, C) x 3 betas: " + std::to_string(violations) +
             " violations; max log Pr + beta r = " + sci(worst);
  return o;
}

Outcome steiner_checks() {
  Outcome o;
  std::mt19937 rng(20240611);
  int mismatches = 0;
  for (int trial = 0; trial < kSteinerInstances; ++trial) {
    std::uniform_int_distribution<int> side(1, 5), count(2, 4);
    const Box box({side(rng), side(rng)});
    const auto sites = box.interior_sites();
    std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
    SiteTuple t;
    for (int k = count(rng); k > 0; --k) t.push_back(sites[pick(rng)]);
    const SteinerInstance inst{box, t};
    if (tau(inst) != tau_bruteforce(inst)) ++mismatches;
  }
  int manhattan_mismatches = 0;
  const Box big({9, 9});
  const auto sites = big.interior_sites();
  std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
  for (int trial = 0; trial < kManhattanPairs; ++trial) {
    const Site a = sites[pick(rng)], b = sites[pick(rng)];
    if (tau(SteinerInstance{big, {a, b}}) != manhattan(a, b)) ++manhattan_mismatches;
  }
  o.pass = mismatches == 0 && manhattan_mismatches == 0;
  o.detail = std::to_string(kSteinerInstances) + " instances vs exhaustive search: " + std::to_string(mismatches) + " mismatches; " +
             std::to_string(kManhattanPairs) + " pairs vs Manhattan: " + std::to_string(manhattan_mismatches) + " mismatches";
  return o;
}

Outcome tree_decay() {
  Outcome o;
  std::ostringstream detail;
  // Constants from their definitions.
  const double e = std::numbers::e;
  bool constants_ok = true;
  for (int d = 2; d <= 3; ++d) {
    const BoundConstants c = bound_constants(d, 2, 20.0);
    const double kd = 3.0 * e * std::pow(2.0, d);
    const double factorial = d == 2 ? 2.0 : 6.0;
    constants_ok = constants_ok && std::abs(c.A - d * factorial) < 1e-12 && std::abs(c.k_d - kd) < 1e-9 &&
                   std::abs(c.B / (2.0 * e * e * kd * kd) - 1.0) < 1e-12 &&
                   std::abs(c.delta_n - (20.0 - std::log(c.B) * std::log(2.0))) < 1e-12;
  }
  if (!constants_ok) o.pass = false;

  long long records = 0, violations = 0;
  double min_slack = 1e300;
  for (int n = 2; n <= 3; ++n) {
    const double beta0 = bound_constants(2, n, 1.0).threshold_beta();
    for (const auto& ext : std::vector<std::vector<int>>{{3, 3}, {4, 4}, {5, 5}}) {
      const Box box(ext);
      std::vector<SiteTuple> tuples = subsets(box.interior_sites(), n);
      if (n == 3 && tuples.size() > 120) {
        std::mt19937 rng(7);
        std::shuffle(tuples.begin(), tuples.end(), rng);
        tuples.resize(120);
      }
      for (double beta : {beta0, beta0 + 4.0}) {
        const BoundConstants c = bound_constants(2, n, beta);
        if (!c.applicable) o.pass = false;
        for (const DecayRecord& r : verify_decay(box, beta, n, tuples)) {
          ++records;
          if (!r.satisfied) ++violations;
          min_slack = std::min(min_slack, r.log_bound - r.log_abs_T);
        }
      }
    }
  }
  if (violations != 0) o.pass = false;

  long long rows = 0, monotone_breaks = 0;
  for (const auto& ext : std::vector<std::vector<int>>{{5, 5}, {6, 6}}) {
    const Box box(ext);
    for (double beta : {1.0, 2.0, 4.0, 8.0}) {
      for (int y = 0; y < box.extent()[1]; ++y) {
        std::vector<SiteTuple> tuples;
        for (int x = 1; x < box.extent()[0]; ++x) tuples.push_back({Site{0, y}, Site{x, y}});
        const auto recs = verify_decay(box, beta, 2, tuples);
        ++rows;
        for (std::size_t i = 1; i < recs.size(); ++i) {
          if (recs[i].tau > recs[i - 1].tau && -recs[i].log_abs_T < -recs[i - 1].log_abs_T) ++monotone_breaks;
        }
      }
    }
  }
  if (monotone_breaks != 0) o.pass = false;
  detail << "constants " << (constants_ok ? "ok" : "WRONG") << "; " << records << " records (n=2,3, interiors <= 5x5, delta_n >= 1): "
         << violations << " violations, min log slack " << sci(min_slack) << "; " << rows << " rows at beta in {1,2,4,8}: "
         << monotone_breaks << " monotonicity breaks";
  o.detail = detail.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 replica identity", replica_identity},
      {"2 s-moments vanish unless k gamma = 0 mod n", s_moment_vanishing},
      {"3 unitary transform and exact diagonalization", transform_checks},
      {"4 condensation", condensation},
      {"5 energy identities", energy_identities},
      {"6 surface census", surface_census},
      {"7 contour probability energy bound", contour_energy_bound},
      {"8 steiner tree length", steiner_checks},
      {"9 tree decay", tree_decay},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << name << "] " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
