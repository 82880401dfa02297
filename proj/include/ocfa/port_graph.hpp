#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ocfa/diagram.hpp"

namespace ocfa {

constexpr int kSource = -1;
constexpr int kTarget = -2;

// (node id, port) or a boundary position (kSource / kTarget, index)
struct Endpoint {
  int node = kSource;
  int port = 0;
  bool boundary() const { return node < 0; }
  bool operator==(const Endpoint&) const = default;
  auto operator<=>(const Endpoint&) const = default;
};

struct Node {
  Generator gen;              // never a Cross; crossings are absorbed into wiring
  std::vector<Endpoint> in;   // in[i] = origin feeding input i
  std::vector<Endpoint> out;  // out[j] = destination of output j
};

struct MalformedGraph : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wires are identified by their origin: an output port or a source position.
struct PortGraph {
  BoundaryObject source, target;
  std::vector<std::optional<Node>> nodes;  // indexed by stable id; erased slots stay empty
  std::vector<Endpoint> src;               // src[i] = destination of source wire i
  std::vector<Endpoint> tgt;               // tgt[j] = origin of target wire j

  bool alive(int id) const { return id >= 0 && id < (int)nodes.size() && nodes[id].has_value(); }
  const Node& node(int id) const { return *nodes.at(id); }
  Node& node(int id) { return *nodes.at(id); }
  int next_id() const { return (int)nodes.size(); }
  int add_node(const Generator& g);
  void erase(int id) { nodes.at(id).reset(); }
  std::vector<int> node_ids() const;
  size_t node_count() const;

  Endpoint dest_of(Endpoint origin) const;
  Endpoint origin_of(Endpoint dest) const;
  void connect(Endpoint origin, Endpoint dest);
  Segment wire_type(Endpoint origin) const;
};

PortGraph to_port_graph(const DiagramTerm& t);
DiagramTerm from_port_graph(const PortGraph& g);
void check_port_graph(const PortGraph& g);

// canonical labelling: node ids listed in label order
std::vector<int> canonical_order(const PortGraph& g);
std::string canonical_form(const PortGraph& g);
bool isomorphic(const PortGraph& a, const PortGraph& b);

// nodes reachable downstream of a node (excluding itself)
std::vector<char> downstream(const PortGraph& g, int from);

}  // namespace ocfa
