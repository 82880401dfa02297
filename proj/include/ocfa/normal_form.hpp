#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ocfa/diagram.hpp"
#include "ocfa/invariants.hpp"
#include "ocfa/port_graph.hpp"

namespace ocfa {

struct WrapData {
  BoundaryObject n, m;             // original source and target
  std::vector<int> n1, n0, m1, m0;  // 0-based positions: intervals / circles of n and m
  std::vector<int> sigma1, sigma2;  // n1++n0 and m1++m0, the sorting permutations
};

struct NormalFormBlocks {
  std::vector<int> q;                     // cycle lengths in block order
  int r = 0;
  std::map<Color, int> omega;
  int g = 0;
  int m = 0;
  std::vector<int> sigma_bar;             // sigma_bar[c-1] = prenormal input (1-based) fed by source interval c
  std::vector<std::vector<int>> leaves;   // per block, source intervals in leaf order
};

struct CycleTypeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InconsistentProfile : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InconsistentWrap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// permutation of {1..k} as a map i -> perm[i-1]
using Perm = std::vector<int>;
Perm perm_from_cycles(const Cycles& c, int k);
Cycles perm_cycles(const Perm& p);
Perm perm_compose(const Perm& a, const Perm& b);  // a after b
Perm perm_inverse(const Perm& p);

// returns sb with sigma = sb^-1 . tau . sb
Perm sigma_bar(const Perm& sigma, const Perm& tau);

NormalFormBlocks nf_blocks(const ComponentProfile& p, const BoundaryObject& n, const BoundaryObject& m);
PortGraph nf_open_to_closed_graph(const ComponentProfile& p, const BoundaryObject& n, const BoundaryObject& m);
DiagramTerm nf_open_to_closed(const ComponentProfile& p, const BoundaryObject& n, const BoundaryObject& m);

WrapData wrap_data(const BoundaryObject& n, const BoundaryObject& m);
// source object of the wrapped term: m1 with swapped colours, then n1
BoundaryObject wrapped_source(const WrapData& w);
size_t wrapped_target_size(const WrapData& w);

std::pair<PortGraph, WrapData> lambda_graph(const PortGraph& g);
PortGraph lambda_inverse_graph(const PortGraph& h, const WrapData& w);
std::pair<DiagramTerm, WrapData> lambda(const DiagramTerm& t);
DiagramTerm lambda_inverse(const DiagramTerm& t, const WrapData& w);

// profile of a component after wrapping, with local interval numbering
ComponentProfile lambda_profile(const PortGraph& g, const Component& c, const ComponentProfile& p);

PortGraph normal_form_graph(const PortGraph& g);
DiagramTerm normal_form(const DiagramTerm& t);

// copy k into r, identifying k's boundary with r's positions src_map / tgt_map
void embed_graph(PortGraph& r, const PortGraph& k, const std::vector<int>& src_map, const std::vector<int>& tgt_map);

}  // namespace ocfa
