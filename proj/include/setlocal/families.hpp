#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "setlocal/bounds.hpp"
#include "setlocal/nbhd.hpp"
#include "setlocal/rng.hpp"

namespace setlocal {

// Generators of independent sets and families used to exercise the
// refuters. Everything is driven by the caller's seeded generator.

// Greedy maximal independent set in a uniformly random vertex order.
std::vector<std::uint32_t> random_maximal_independent_set(const Graph& g, Rng& rng);

// A uniformly random tournament on [m], or (acyclic) the transitive
// orientation of a uniformly random order, which always has a source.
Orientation random_orientation(Color m, bool acyclic, Rng& rng);

// Host vertices covered by the orientation. This is an independent set:
// an edge would need an edge of K_m pointing both ways.
std::vector<std::uint32_t> covered_vertices(const NbhdGraph& nh1, const Orientation& o);

// c random independent classes over an NH1 host, mixing orientation-covered
// sets, random maximal independent sets and random subsets of those.
IndSetFamily random_nh1_family(const NbhdGraph& host, std::size_t c, Rng& rng);

// Views of the given vertex indices.
std::vector<View> views_of(const NbhdGraph& g, std::span<const std::uint32_t> idx);

// Lifts an independent set J of `lower` to an independent set of the next
// NT level: each x in J gets nodes (x, chunk) for a random partition of its
// neighborhood into chunks of size <= d, so every x in J is a source. Then
// up to `extra` random nodes are tried and kept if independence survives.
std::vector<View> lift_independent_set(const NbhdGraph& lower, std::span<const std::uint32_t> j, std::uint32_t d,
                                       std::size_t extra, Rng& rng);

// A random d-defective class of NH1(m, delta) vertices. With a chosen
// center x, the class first covers every (d+1)-subset of [m] minus x by
// nodes (x, A) (making x a d-source); then random nodes are added while
// the induced maximum degree stays <= d.
std::vector<View> random_defective_class(Color m, std::uint32_t delta, std::uint32_t d, Semantics variant,
                                         bool with_source, std::size_t extra, Rng& rng);

}  // namespace setlocal
