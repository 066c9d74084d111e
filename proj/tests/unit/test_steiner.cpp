#include "doctest.h"

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "treedecay/steiner.hpp"

using namespace treedecay;

namespace {

SteinerInstance random_instance(std::mt19937& rng, int max_side, int max_terms) {
  std::uniform_int_distribution<int> side(1, max_side);
  const Box box({side(rng), side(rng)});
  const auto sites = box.interior_sites();
  std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
  std::uniform_int_distribution<int> count(1, max_terms);
  SiteTuple t;
  for (int k = count(rng); k > 0; --k) t.push_back(sites[pick(rng)]);
  return {box, t};
}

// The returned edges form a tree over closure sites that joins every terminal.
bool is_steiner_tree(const SteinerInstance& inst, const SteinerTree& tree) {
  std::map<Site, std::vector<Site>> adj;
  for (const auto& [a, b] : tree.edges) {
    if (manhattan(a, b) != 1) return false;
    if (!inst.box.is_interior(a) && !inst.box.is_boundary(a)) return false;
    if (!inst.box.is_interior(b) && !inst.box.is_boundary(b)) return false;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  if (tree.edges.empty()) {
    return std::all_of(inst.terminals.begin(), inst.terminals.end(), [&](const Site& s) { return s == inst.terminals[0]; });
  }
  if (adj.size() != tree.edges.size() + 1) return false;
  std::set<Site> seen{inst.terminals[0]};
  std::queue<Site> q;
  q.push(inst.terminals[0]);
  while (!q.empty()) {
    const Site s = q.front();
    q.pop();
    for (const Site& t : adj[s]) {
      if (seen.insert(t).second) q.push(t);
    }
  }
  if (seen.size() != adj.size()) return false;
  return std::all_of(inst.terminals.begin(), inst.terminals.end(), [&](const Site& s) { return seen.count(s) > 0; });
}

}  // namespace

TEST_CASE("worked examples") {
  CHECK(tau(SiteTuple{Site{0, 0}, Site{3, 4}}) == 7);
  CHECK(tau(SiteTuple{Site{0, 0}, Site{2, 0}, Site{1, 2}}) == 4);
  CHECK(tau(SiteTuple{Site{0, 0}, Site{1, 0}, Site{2, 0}}) == 2);
  CHECK(tau(SiteTuple{Site{3, 3}, Site{3, 4}}) == 1);
  CHECK(tau(SiteTuple{Site{2, 2}, Site{2, 2}}) == 0);
  CHECK(tau(SiteTuple{Site{1, 1}}) == 0);
  // Four corners of a square of side 2: an H of length 3 * 2.
  CHECK(tau(SiteTuple{Site{0, 0}, Site{0, 2}, Site{2, 0}, Site{2, 2}}) == 6);
  CHECK(tau(SiteTuple{Site{0, 0, 0}, Site{1, 1, 1}}) == 3);
}

TEST_CASE("two terminals: Manhattan distance") {
  std::mt19937 rng(83);
  for (int trial = 0; trial < 100; ++trial) {
    const Box box({6, 7});
    const auto sites = box.interior_sites();
    std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
    const Site a = sites[pick(rng)];
    const Site b = sites[pick(rng)];
    CHECK(tau(SteinerInstance{box, {a, b}}) == manhattan(a, b));
  }
}

TEST_CASE("agrees with the exhaustive search") {
  std::mt19937 rng(89);
  for (int trial = 0; trial < 200; ++trial) {
    const SteinerInstance inst = random_instance(rng, 5, 4);
    const SteinerTree tree = steiner_tree(inst);
    CHECK(tree.length == tau_bruteforce(inst));
    CHECK(static_cast<int>(tree.edges.size()) == tree.length);
    CHECK(is_steiner_tree(inst, tree));
  }
}

TEST_CASE("bounds and symmetries") {
  std::mt19937 rng(97);
  for (int trial = 0; trial < 100; ++trial) {
    const SteinerInstance inst = random_instance(rng, 6, 5);
    const int t = tau(inst);
    int diameter = 0;
    for (const Site& a : inst.terminals) {
      for (const Site& b : inst.terminals) diameter = std::max(diameter, manhattan(a, b));
    }
    CHECK(t >= diameter);
    // Chaining terminals in order is a valid (not necessarily minimal) tree.
    int chain = 0;
    for (std::size_t i = 1; i < inst.terminals.size(); ++i) chain += manhattan(inst.terminals[i - 1], inst.terminals[i]);
    CHECK(t <= chain);
    SiteTuple shuffled = inst.terminals;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(tau(SteinerInstance{inst.box, shuffled}) == t);
    // Translation into a larger box.
    SiteTuple moved;
    for (const Site& s : inst.terminals) moved.push_back(Site{s[0] + 2, s[1] + 3});
    CHECK(tau(SteinerInstance{Box({inst.box.extent()[0] + 4, inst.box.extent()[1] + 6}), moved}) == t);
    // Reflection.
    SiteTuple mirrored;
    for (const Site& s : inst.terminals) mirrored.push_back(Site{inst.box.extent()[0] - 1 - s[0], s[1]});
    CHECK(tau(SteinerInstance{inst.box, mirrored}) == t);
  }
}

TEST_CASE("errors") {
  const Box box({3, 3});
  CHECK_THROWS_AS(tau(SteinerInstance{box, {}}), std::domain_error);
  CHECK_THROWS_AS(tau(SteinerInstance{box, {Site{0, 0}, Site{3, 0}}}), std::domain_error);
  SiteTuple many;
  for (int x = 0; x < 9; ++x) many.push_back(Site{x, 0});
  CHECK_THROWS_AS(tau(SteinerInstance{Box({9, 1}), many}), ResourceError);
  CHECK_THROWS_AS(tau_bruteforce(SteinerInstance{Box({6, 6}), {Site{0, 0}, Site{1, 1}}}), ResourceError);
  CHECK_THROWS_AS(tau_bruteforce(SteinerInstance{Box({5, 1}), {Site{0, 0}, Site{1, 0}, Site{2, 0}, Site{3, 0}, Site{4, 0}}}),
                  ResourceError);
}

TEST_CASE("normalized instance") {
  const auto [box, shifted] = normalized_instance({Site{4, 7}, Site{2, 9}});
  CHECK(box.extent()[0] == 3);
  CHECK(box.extent()[1] == 3);
  CHECK(shifted == SiteTuple{Site{2, 0}, Site{0, 2}});
}
