#pragma once

#include <string>

#include "goim/graph.hpp"

namespace goim {

// Canonical text form of the root-reachable portion of a fused graph.
// Deterministic root-first traversal; Contract inputs and box door order
// are canonicalised by traversal rank, so the string is invariant under
// isomorphism and under permutation of those unordered connections.
std::string canonicalForm(const Graph& g);

// Isomorphism of the root-reachable portions, respecting labels,
// distinguished ports, interface order and box structure.
bool graphEq(const Graph& a, const Graph& b);

// Canonical form of one box's content: traversal from the box root link,
// restricted to member nodes, door entry links as the (sorted) interface.
std::string canonicalBoxContent(const Graph& g, BoxId b);

}  // namespace goim
