#ifndef TREEDECAY_STEINER_HPP_
#define TREEDECAY_STEINER_HPP_

#include <utility>
#include <vector>

#include "treedecay/correlations.hpp"
#include "treedecay/lattice.hpp"

namespace treedecay {

/// Terminals in a box; Steiner points may be any site of the box closure.
struct SteinerInstance {
  Box box;
  SiteTuple terminals;
};

struct SteinerTree {
  int length = 0;
  std::vector<std::pair<Site, Site>> edges;
};

/// Exact minimal tree length (Dreyfus-Wagner over terminal subsets). Repeated
/// terminals count once. Throws std::domain_error for an empty or non-interior
/// terminal, ResourceError for more than 8 distinct terminals or a closure
/// graph above one million sites.
SteinerTree steiner_tree(const SteinerInstance& inst);
int tau(const SteinerInstance& inst);
/// tau with the box taken as the terminals' bounding box.
int tau(const SiteTuple& terminals);

/// Smallest connected vertex set of the closure graph containing every
/// terminal, minus one, by pruned search. Limited to interiors of at most
/// 25 sites and at most 4 distinct terminals (ResourceError otherwise).
int tau_bruteforce(const SteinerInstance& inst);

/// Bounding box interior that contains all sites after translating them to
/// start at the origin; returns the translated sites.
std::pair<Box, SiteTuple> normalized_instance(const SiteTuple& terminals);

}  // namespace treedecay

#endif  // TREEDECAY_STEINER_HPP_
