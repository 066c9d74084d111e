#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "treedecay/continents.hpp"

using namespace treedecay;

namespace {

SiteSet square(int x0, int y0, int side) {
  std::vector<Site> out;
  for (int x = x0; x < x0 + side; ++x) {
    for (int y = y0; y < y0 + side; ++y) out.push_back(Site{x, y});
  }
  return SiteSet(out);
}

ReplicaConfig two_copies(const Box& box, const SiteSet& minus1, const SiteSet& minus2) {
  return ReplicaConfig({SpinConfig::from_minus_set(box, minus1), SpinConfig::from_minus_set(box, minus2)});
}

// Sea by breadth-first search over sites, from the ring inward.
SiteSet sea_oracle(const ReplicaConfig& rc) {
  const Box& box = rc.box();
  auto all_plus = [&](const Site& s) {
    for (const auto& c : rc.copies()) {
      if (c.spin(s) != 1) return false;
    }
    return true;
  };
  std::vector<Site> frontier;
  std::set<Site> seen;
  for (const Site& s : box.interior_sites()) {
    if (!all_plus(s)) continue;
    for (const Site& t : neighbors(s, box)) {
      if (box.is_boundary(t)) {
        frontier.push_back(s);
        seen.insert(s);
        break;
      }
    }
  }
  while (!frontier.empty()) {
    const Site s = frontier.back();
    frontier.pop_back();
    for (const Site& t : neighbors(s, box)) {
      if (box.is_interior(t) && all_plus(t) && seen.insert(t).second) frontier.push_back(t);
    }
  }
  return SiteSet(std::vector<Site>(seen.begin(), seen.end()));
}

}  // namespace

TEST_CASE("decomposition of hand-built configurations") {
  const Box box({5, 5});
  SUBCASE("ground state is all sea") {
    const auto dec = decompose(ReplicaConfig::ground(box, 3));
    CHECK(dec.sea.size() == 25);
    CHECK(dec.continents.empty());
  }
  SUBCASE("two separated islands") {
    const auto rc = two_copies(box, SiteSet{Site{0, 0}}, SiteSet{Site{3, 3}, Site{3, 4}});
    const auto dec = decompose(rc);
    REQUIRE(dec.continents.size() == 2);
    CHECK(dec.continents[0] == SiteSet{Site{0, 0}});
    CHECK(dec.continents[1] == (SiteSet{Site{3, 3}, Site{3, 4}}));
    CHECK(dec.sea.size() == 22);
  }
  SUBCASE("an enclosed all-plus pocket belongs to the continent") {
    SiteSet ring_of_minus = square(1, 1, 3);
    std::vector<Site> v(ring_of_minus.begin(), ring_of_minus.end());
    v.erase(std::find(v.begin(), v.end(), Site{2, 2}));
    const auto rc = two_copies(box, SiteSet(v), SiteSet{});
    const auto dec = decompose(rc);
    REQUIRE(dec.continents.size() == 1);
    CHECK(dec.continents[0] == square(1, 1, 3));
    CHECK(dec.sea.size() == 16);
  }
}

TEST_CASE("sea agrees with a site-level search") {
  std::mt19937 rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const Box box({4, 5});
    std::vector<SpinConfig> copies;
    for (int a = 0; a < 2 + trial % 2; ++a) {
      std::vector<int> spins(box.interior_size());
      for (auto& s : spins) s = (rng() % 4 == 0) ? -1 : 1;
      copies.emplace_back(box, spins);
    }
    const ReplicaConfig rc(copies);
    const auto dec = decompose(rc);
    CHECK(dec.sea == sea_oracle(rc));
    std::vector<Site> rest;
    for (const Site& s : box.interior_sites()) {
      if (!dec.sea.contains(s)) rest.push_back(s);
    }
    CHECK(dec.continents == connected_components(SiteSet(rest)));
  }
}

TEST_CASE("contours and removal") {
  const Box box({5, 5});
  SUBCASE("single flipped spin in one copy") {
    const auto rc = two_copies(box, SiteSet{Site{2, 2}}, SiteSet{});
    const SiteSet k{Site{2, 2}};
    const auto c = continent_contour(rc, k);
    CHECK(c.per_copy[0].size() == 4);
    CHECK(c.per_copy[1].empty());
    CHECK(c.length() == 4);
    const auto star = remove_contour(rc, k);
    CHECK(star == ReplicaConfig::ground(box, 2));
    CHECK(replica_energy(rc) - replica_energy(star) == 8);
  }
  SUBCASE("identical flips in both copies") {
    const SiteSet k{Site{1, 1}, Site{1, 2}};
    const auto rc = two_copies(box, k, k);
    const auto c = continent_contour(rc, k);
    CHECK(c.per_copy[0] == boundary_faces(k));
    CHECK(c.per_copy[1] == boundary_faces(k));
    CHECK(replica_energy(rc) - replica_energy(remove_contour(rc, k)) == 2 * 2 * 6);
  }
  SUBCASE("plateau with a pocket keeps the inner contour") {
    std::vector<Site> v;
    for (const Site& s : square(1, 1, 3)) {
      if (s != Site{2, 2}) v.push_back(s);
    }
    const auto rc = two_copies(box, SiteSet(v), SiteSet{});
    const SiteSet k = square(1, 1, 3);
    const auto c = continent_contour(rc, k);
    CHECK(c.length() == 12);
    const auto star = remove_contour(rc, k);
    CHECK(star.copy(0).minus_sites() == SiteSet{Site{2, 2}});
    CHECK(replica_energy(rc) - replica_energy(star) == 2 * 12);
  }
  SUBCASE("a contour that runs into the continent is taken whole") {
    const SiteSet row{Site{1, 1}, Site{2, 1}, Site{3, 1}};
    const SiteSet column{Site{2, 1}, Site{2, 2}};
    const auto rc = two_copies(box, row, column);
    const SiteSet k{Site{1, 1}, Site{2, 1}, Site{2, 2}, Site{3, 1}};
    const auto c = continent_contour(rc, k);
    CHECK(c.per_copy[0] == boundary_faces(row));
    CHECK(c.per_copy[1] == boundary_faces(column));
    CHECK(c.length() == 14);
    CHECK(remove_contour(rc, k) == ReplicaConfig::ground(box, 2));
  }
  SUBCASE("errors") {
    const auto rc = two_copies(box, SiteSet{Site{2, 2}}, SiteSet{});
    CHECK_THROWS_AS(continent_contour(rc, SiteSet{Site{1, 1}}), std::domain_error);
    CHECK_THROWS_AS(remove_contour(rc, SiteSet{Site{2, 2}, Site{2, 3}}), std::domain_error);
  }
}

TEST_CASE("energy identity and local cyclic invariance over a full sweep") {
  for (const auto& ext : std::vector<std::vector<int>>{{2, 2}, {2, 3}}) {
    const Box box(ext);
    const LatticeIndex lat(box);
    const ContinentKernel kernel(lat);
    long long checked = 0;
    for_each_joint_config(lat, 2, [&](std::span<const Bits> minus, int broken) {
      const ReplicaConfig rc = ReplicaConfig::from_masks(lat, minus);
      CHECK(2 * broken == replica_energy(rc));
      for (const Bits& k : kernel.continents(minus)) {
        const SiteSet ks = lat.to_site_set(k);
        const auto contour = continent_contour(rc, ks);
        const auto star = remove_contour(rc, ks);
        CHECK(replica_energy(star) == replica_energy(rc) - 2 * static_cast<int>(contour.length()));
        const auto flipped = apply_cyclic(rc, CyclicAction::local(ks));
        CHECK(replica_energy(flipped) == replica_energy(rc));
        CHECK(decompose(flipped) == decompose(rc));
        ++checked;
      }
    });
    CHECK(checked > 0);
  }
}

TEST_CASE("kernel and set-level operations agree") {
  std::mt19937 rng(73);
  const Box box({4, 4});
  const LatticeIndex lat(box);
  const ContinentKernel kernel(lat);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Bits> minus(3);
    for (auto& m : minus) {
      for (int i = 0; i < lat.size(); ++i) {
        if (rng() % 3 == 0) m.set(static_cast<std::size_t>(i));
      }
    }
    const ReplicaConfig rc = ReplicaConfig::from_masks(lat, minus);
    CHECK(kernel.broken(minus) * 2 == replica_energy(rc));
    const auto dec = decompose(rc);
    CHECK(lat.to_site_set(kernel.sea(minus)) == dec.sea);
    for (const SiteSet& k : dec.continents) {
      const auto c = kernel.contour(minus, lat.to_bits(k));
      const auto ref = continent_contour(rc, k);
      for (int a = 0; a < 3; ++a) CHECK(lat.to_face_set(c[static_cast<std::size_t>(a)]) == ref.per_copy[static_cast<std::size_t>(a)]);
      const auto removed = kernel.remove(minus, c);
      CHECK(ReplicaConfig::from_masks(lat, removed) == remove_contour(rc, k));
    }
  }
}

TEST_CASE("condensation") {
  const Box box({3, 3});
  const std::vector<double> betas{0.5, 1.0};
  const std::vector<SiteTuple> tuples{
      {Site{0, 0}, Site{2, 2}}, {Site{0, 0}, Site{0, 2}}, {Site{1, 1}, Site{2, 0}}, {Site{0, 1}, Site{2, 1}}, {Site{0, 0}, Site{1, 0}}};
  for (const auto& t : tuples) {
    const auto reports = condensation_check(box, betas, 2, t);
    REQUIRE(reports.size() == 2);
    for (const auto& r : reports) {
      CHECK(r.relative() < 1e-9);
      REQUIRE(r.exact_zero.has_value());
      CHECK(*r.exact_zero);
      CHECK(std::abs(r.total - r.single_continent) < 1e-12);
      // The single-continent part carries the whole s-moment.
      CHECK(std::abs(r.total - s_moment(box, InverseTemperature(r.beta), 2, 1, t)) < 1e-12);
    }
  }
}

TEST_CASE("contour probabilities obey the energy bound") {
  const Box box({2, 2});
  const ContourTable table = contour_table(box, 2);
  CHECK_FALSE(table.classes.empty());
  for (double b : {0.5, 1.0, 2.0}) {
    const InverseTemperature beta(b);
    double total_single_site = 0.0;
    for (const auto& cls : table.classes) {
      const auto p = contour_probability(table, beta, cls);
      CHECK(p.pr > 0.0);
      CHECK(p.satisfied);
      CHECK(p.log_pr <= -b * p.r + 1e-12);
      if (cls.continent.count() == 1 && cls.continent.test(0)) total_single_site += p.pr;
    }
    // Classes with K = {site 0} are disjoint events.
    CHECK(total_single_site <= 1.0);
  }
  SUBCASE("single flipped spin: Pr is the Gibbs weight of the contour event") {
    const SiteSet k{Site{0, 0}};
    const auto rc = two_copies(box, k, SiteSet{});
    const auto c = continent_contour(rc, k);
    const auto p = contour_probability(box, InverseTemperature(1.0), 2, k, c);
    CHECK(p.r == 4);
    CHECK(p.pr <= std::exp(-4.0));
    const std::string j = to_json(p);
    for (const char* key : {"\"r\"", "\"pr\"", "\"bound\"", "\"satisfied\""}) CHECK(j.find(key) != std::string::npos);
  }
  SUBCASE("unrealizable pair has probability zero") {
    ReplicaContour fake{{FaceSet{}, FaceSet{}}};
    const auto p = contour_probability(table, InverseTemperature(1.0), SiteSet{Site{0, 0}}, fake);
    CHECK(p.pr == 0.0);
    CHECK(p.satisfied);
  }
}

TEST_CASE("local cyclic group preserves energy and continents for n = 3") {
  const Box box({2, 2});
  const LatticeIndex lat(box);
  const ContinentKernel kernel(lat);
  for_each_joint_config(lat, 3, [&](std::span<const Bits> minus, int) {
    const ReplicaConfig rc = ReplicaConfig::from_masks(lat, minus);
    const int h = replica_energy(rc);
    const auto dec = decompose(rc);
    for (const SiteSet& k : dec.continents) {
      for (int power = 1; power < 3; ++power) {
        const auto flipped = apply_cyclic(rc, CyclicAction::local(k, power));
        CHECK(replica_energy(flipped) == h);
        CHECK(decompose(flipped) == dec);
      }
    }
  });
}
