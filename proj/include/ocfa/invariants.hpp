#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ocfa/diagram.hpp"
#include "ocfa/port_graph.hpp"

namespace ocfa {

enum class Side { Source, Target };

struct BoundarySlot {
  Side side = Side::Source;
  size_t position = 1;  // 1-based within its side
  auto operator<=>(const BoundarySlot&) const = default;
};

using Cycles = std::vector<std::vector<int>>;

struct ComponentProfile {
  int genus = 0;
  std::map<Color, int> windows;  // only non-zero counts are stored
  Cycles boundary_cycles;        // global interval indices, canonical rotation
  std::map<int, Color> gamma_boundary;
  std::set<BoundarySlot> closed_boundary;
  std::set<BoundarySlot> interval_boundary;
  int euler = 0;
  int b = 0;  // topological boundary circles
  bool operator==(const ComponentProfile&) const = default;
};

struct InvariantProfile {
  std::vector<ComponentProfile> components;
  BoundaryObject source, target;
};

struct MalformedDiagram : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Component {
  std::vector<int> nodes;
  std::vector<int> src;  // 0-based source positions owned
  std::vector<int> tgt;  // 0-based target positions owned
};

struct TraceResult {
  Cycles cycles;
  std::map<Color, int> windows;
  std::map<int, Color> gamma;
  int b = 0;
};

std::vector<Component> components(const PortGraph& g);
int euler_characteristic(const PortGraph& g, const Component& c);
TraceResult boundary_trace(const PortGraph& g, const Component& c);
ComponentProfile component_profile(const PortGraph& g, const Component& c);

InvariantProfile invariant_profile(const PortGraph& g);
InvariantProfile invariant_profile(const DiagramTerm& t);
bool equivalent(const DiagramTerm& f, const DiagramTerm& g);
bool equivalent(const InvariantProfile& f, const InvariantProfile& g);

// global interval numbering: source intervals left to right, then target intervals
int interval_index(const BoundaryObject& src, const BoundaryObject& tgt, BoundarySlot s);

Cycles canonical_cycles(Cycles c);
std::string cycles_str(const Cycles& c);
std::string profile_json(const InvariantProfile& p, int indent = 2);
std::string profile_text(const InvariantProfile& p);

}  // namespace ocfa
