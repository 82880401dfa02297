#pragma once

#include <random>

#include "ocfa/diagram.hpp"
#include "ocfa/normal_form.hpp"
#include "ocfa/port_graph.hpp"
#include "ocfa/rewrite.hpp"

namespace ocfa::testing {

// obj -> obj moving segment i to position p[i]; types must agree
DiagramTerm permutation_term(const BoundaryObject& obj, const Perm& p);

// apply `count` random catalogued moves at random sites; returns the moves made
std::vector<Move> mutate(PortGraph& g, std::mt19937& rng, int count, const RuleCatalog& cat = default_catalog());

enum class Perturbation { Genus, Window, Permutation };

// change one invariant; false when the diagram offers no place for this kind
bool perturb(PortGraph& g, Perturbation kind, std::mt19937& rng);

}  // namespace ocfa::testing
