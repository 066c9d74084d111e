#include "treedecay/steiner.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "treedecay/errors.hpp"

namespace treedecay {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

// Box closure as an explicit graph: interior sites first, then ring sites.
struct ClosureGraph {
  std::vector<Site> sites;
  std::map<Site, int> index;
  std::vector<std::vector<int>> adj;

  explicit ClosureGraph(const Box& box) {
    sites = box.interior_sites();
    for (const Site& s : box.boundary_sites()) sites.push_back(s);
    for (std::size_t i = 0; i < sites.size(); ++i) index.emplace(sites[i], static_cast<int>(i));
    adj.assign(sites.size(), {});
    for (std::size_t i = 0; i < sites.size(); ++i) {
      for (int k = 0; k < box.dim(); ++k) {
        Site t = sites[i];
        ++t.coords[static_cast<std::size_t>(k)];
        auto it = index.find(t);
        if (it == index.end()) continue;
        adj[i].push_back(it->second);
        adj[static_cast<std::size_t>(it->second)].push_back(static_cast<int>(i));
      }
    }
  }
};

std::vector<Site> distinct_terminals(const SteinerInstance& inst) {
  if (inst.terminals.empty()) throw std::domain_error("steiner: no terminals");
  std::vector<Site> t;
  for (const Site& s : inst.terminals) {
    if (!inst.box.is_interior(s)) throw std::domain_error("steiner: terminal " + to_string(s) + " is not interior");
    if (std::find(t.begin(), t.end(), s) == t.end()) t.push_back(s);
  }
  return t;
}

}  // namespace

SteinerTree steiner_tree(const SteinerInstance& inst) {
  const auto terms = distinct_terminals(inst);
  const int n = static_cast<int>(terms.size());
  if (n > 8) throw ResourceError("steiner: more than 8 distinct terminals", static_cast<std::uint64_t>(n));
  if (inst.box.interior_size() > 1000000) throw ResourceError("steiner: box too large", inst.box.interior_size());
  SteinerTree out;
  if (n == 1) return out;

  const ClosureGraph g(inst.box);
  const std::size_t v = g.sites.size();
  const std::size_t full = (std::size_t{1} << n) - 1;

  // dp[mask][x]: cheapest tree joining terminals in mask and vertex x.
  // how[mask][x] >= 0: merge of submask how and mask ^ how at x;
  // how[mask][x] = -1 - y: path step from neighbor y; -1 - kInf: terminal itself.
  std::vector<std::vector<int>> dp(full + 1, std::vector<int>(v, kInf));
  std::vector<std::vector<long long>> how(full + 1, std::vector<long long>(v, std::numeric_limits<long long>::min()));

  auto relax = [&](std::size_t mask) {
    // Unit weights with arbitrary starting labels: Dijkstra on a bucket queue.
    using Item = std::pair<int, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::size_t x = 0; x < v; ++x) {
      if (dp[mask][x] < kInf) pq.emplace(dp[mask][x], static_cast<int>(x));
    }
    while (!pq.empty()) {
      auto [d, x] = pq.top();
      pq.pop();
      if (d != dp[mask][static_cast<std::size_t>(x)]) continue;
      for (int y : g.adj[static_cast<std::size_t>(x)]) {
        if (d + 1 < dp[mask][static_cast<std::size_t>(y)]) {
          dp[mask][static_cast<std::size_t>(y)] = d + 1;
          how[mask][static_cast<std::size_t>(y)] = -1 - static_cast<long long>(x);
          pq.emplace(d + 1, y);
        }
      }
    }
  };

  for (int i = 0; i < n; ++i) {
    const std::size_t mask = std::size_t{1} << i;
    const auto t = static_cast<std::size_t>(g.index.at(terms[static_cast<std::size_t>(i)]));
    dp[mask][t] = 0;
    how[mask][t] = -1 - static_cast<long long>(kInf);
    relax(mask);
  }
  for (std::size_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) < 2) continue;
    const std::size_t low = mask & (~mask + 1);
    for (std::size_t x = 0; x < v; ++x) {
      // Submasks containing the lowest terminal, so each split is tried once.
      for (std::size_t sub = (mask - 1) & mask; sub != 0; sub = (sub - 1) & mask) {
        if (!(sub & low)) continue;
        const int c = dp[sub][x] + dp[mask ^ sub][x];
        if (c < dp[mask][x]) {
          dp[mask][x] = c;
          how[mask][x] = static_cast<long long>(sub);
        }
      }
    }
    relax(mask);
  }

  const auto root = static_cast<std::size_t>(g.index.at(terms[0]));
  out.length = dp[full][root];

  std::set<std::pair<int, int>> edges;
  std::function<void(std::size_t, std::size_t)> collect = [&](std::size_t mask, std::size_t x) {
    while (true) {
      const long long h = how[mask][x];
      if (h == -1 - static_cast<long long>(kInf)) return;
      if (h >= 0) {
        collect(static_cast<std::size_t>(h), x);
        collect(mask ^ static_cast<std::size_t>(h), x);
        return;
      }
      const auto y = static_cast<std::size_t>(-1 - h);
      edges.emplace(std::min<int>(static_cast<int>(x), static_cast<int>(y)), std::max<int>(static_cast<int>(x), static_cast<int>(y)));
      x = y;
    }
  };
  collect(full, root);
  for (auto [a, b] : edges) out.edges.emplace_back(g.sites[static_cast<std::size_t>(a)], g.sites[static_cast<std::size_t>(b)]);
  return out;
}

int tau(const SteinerInstance& inst) { return steiner_tree(inst).length; }

std::pair<Box, SiteTuple> normalized_instance(const SiteTuple& terminals) {
  if (terminals.empty()) throw std::domain_error("steiner: no terminals");
  const int d = terminals[0].dim();
  std::vector<int> lo(static_cast<std::size_t>(d), std::numeric_limits<int>::max());
  std::vector<int> hi(static_cast<std::size_t>(d), std::numeric_limits<int>::min());
  for (const Site& s : terminals) {
    if (s.dim() != d) throw std::domain_error("steiner: mixed dimensions");
    for (int k = 0; k < d; ++k) {
      lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)], s[k]);
      hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], s[k]);
    }
  }
  std::vector<int> extent(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) extent[static_cast<std::size_t>(k)] = hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)] + 1;
  SiteTuple shifted;
  for (const Site& s : terminals) {
    Site t = s;
    for (int k = 0; k < d; ++k) t.coords[static_cast<std::size_t>(k)] -= lo[static_cast<std::size_t>(k)];
    shifted.push_back(std::move(t));
  }
  return {Box(extent), shifted};
}

int tau(const SiteTuple& terminals) {
  auto [box, shifted] = normalized_instance(terminals);
  return tau(SteinerInstance{box, shifted});
}

int tau_bruteforce(const SteinerInstance& inst) {
  const auto terms = distinct_terminals(inst);
  if (terms.size() > 4) throw ResourceError("tau_bruteforce: more than 4 distinct terminals", terms.size());
  if (inst.box.interior_size() > 25) throw ResourceError("tau_bruteforce: interior above 25 sites", inst.box.interior_size());
  if (terms.size() == 1) return 0;

  const ClosureGraph g(inst.box);
  const std::size_t v = g.sites.size();
  std::vector<int> term_idx;
  for (const Site& t : terms) term_idx.push_back(g.index.at(t));

  int lower = 0;
  for (const Site& a : terms) {
    for (const Site& b : terms) lower = std::max(lower, manhattan(a, b));
  }

  std::vector<char> in_set(v, 0), marked(v, 0);
  std::vector<int> current;

  // Vertices still needed beyond the current set: at least the distance from
  // the set to the farthest uncovered terminal.
  auto deficit = [&]() {
    int worst = 0;
    for (int t : term_idx) {
      if (in_set[static_cast<std::size_t>(t)]) continue;
      int best = kInf;
      for (int x : current) best = std::min(best, manhattan(g.sites[static_cast<std::size_t>(x)], g.sites[static_cast<std::size_t>(t)]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  auto covers = [&]() {
    return std::all_of(term_idx.begin(), term_idx.end(), [&](int t) { return in_set[static_cast<std::size_t>(t)] != 0; });
  };

  int limit = 0;
  std::function<bool(std::vector<int>)> grow = [&](std::vector<int> untried) -> bool {
    while (!untried.empty()) {
      const int x = untried.back();
      untried.pop_back();
      in_set[static_cast<std::size_t>(x)] = 1;
      current.push_back(x);
      bool found = covers();
      if (!found && static_cast<int>(current.size()) + deficit() <= limit) {
        std::vector<int> next = untried;
        std::vector<int> added;
        for (int y : g.adj[static_cast<std::size_t>(x)]) {
          if (marked[static_cast<std::size_t>(y)]) continue;
          marked[static_cast<std::size_t>(y)] = 1;
          added.push_back(y);
          next.push_back(y);
        }
        found = grow(std::move(next));
        for (int y : added) marked[static_cast<std::size_t>(y)] = 0;
      }
      current.pop_back();
      in_set[static_cast<std::size_t>(x)] = 0;
      if (found) return true;
    }
    return false;
  };

  for (limit = lower + 1; limit <= static_cast<int>(v); ++limit) {
    std::fill(marked.begin(), marked.end(), 0);
    marked[static_cast<std::size_t>(term_idx[0])] = 1;
    if (grow({term_idx[0]})) return limit - 1;
  }
  throw std::logic_error("tau_bruteforce: terminals are not connected");
}

}  // namespace treedecay
