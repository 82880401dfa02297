#pragma once

// Euler characteristic by building an explicit cell complex: every generator is one
// polygonal face, wires glue boundary edges, vertices and edges are counted after
// identification. Shares nothing with the additive table in the library.

#include <numeric>
#include <vector>

#include "ocfa/invariants.hpp"
#include "ocfa/port_graph.hpp"

namespace ocfa::testing {

class CwComplex {
 public:
  int euler() {
    int v = 0, e = 0;
    for (int i = 0; i < (int)vp_.size(); ++i) v += find(vp_, i) == i;
    for (int i = 0; i < (int)ep_.size(); ++i) e += find(ep_, i) == i;
    return v - e + faces_;
  }

  // boundary interface of a face: an interval edge (a, b) or a loop at a vertex
  struct Side {
    int edge, a, b;  // for loops a == b
  };

  int vertex() {
    vp_.push_back((int)vp_.size());
    return (int)vp_.size() - 1;
  }
  int edge() {
    ep_.push_back((int)ep_.size());
    return (int)ep_.size() - 1;
  }
  Side interval() {
    int a = vertex(), b = vertex();
    return {edge(), a, b};
  }
  Side loop() {
    int a = vertex();
    return {edge(), a, a};
  }
  void face() { ++faces_; }

  void glue(const Side& x, const Side& y) {
    unite(ep_, x.edge, y.edge);
    unite(vp_, x.a, y.a);
    unite(vp_, x.b, y.b);
  }

 private:
  std::vector<int> vp_, ep_;
  int faces_ = 0;

  static int find(std::vector<int>& p, int x) { return p[x] == x ? x : p[x] = find(p, p[x]); }
  static void unite(std::vector<int>& p, int a, int b) { p[find(p, a)] = find(p, b); }
};

struct CwCells {
  std::vector<CwComplex::Side> in, out;
};

inline CwCells cw_generator(CwComplex& cx, Gen k) {
  CwCells c;
  auto arc = [&](int a, int b) {
    (void)a, (void)b;
    cx.edge();
  };
  switch (k) {
    case Gen::MultA: {  // hexagon
      auto i0 = cx.interval(), i1 = cx.interval(), o = cx.interval();
      arc(i0.b, i1.a), arc(i1.b, o.b), arc(o.a, i0.a);
      c.in = {i0, i1}, c.out = {o};
      break;
    }
    case Gen::ComultA: {
      auto i = cx.interval(), o0 = cx.interval(), o1 = cx.interval();
      arc(o0.b, o1.a), arc(o1.b, i.b), arc(i.a, o0.a);
      c.in = {i}, c.out = {o0, o1};
      break;
    }
    case Gen::EtaA: {  // bigon
      auto o = cx.interval();
      arc(o.b, o.a);
      c.out = {o};
      break;
    }
    case Gen::EpsA: {
      auto i = cx.interval();
      arc(i.b, i.a);
      c.in = {i};
      break;
    }
    case Gen::MultC: {  // pants cut open along two seams
      auto i0 = cx.loop(), i1 = cx.loop(), o = cx.loop();
      arc(i0.a, o.a), arc(i1.a, o.a);
      c.in = {i0, i1}, c.out = {o};
      break;
    }
    case Gen::ComultC: {
      auto i = cx.loop(), o0 = cx.loop(), o1 = cx.loop();
      arc(i.a, o0.a), arc(i.a, o1.a);
      c.in = {i}, c.out = {o0, o1};
      break;
    }
    case Gen::EtaC:
      c.out = {cx.loop()};
      break;
    case Gen::EpsC:
      c.in = {cx.loop()};
      break;
    case Gen::Zipper: {  // annulus cut along one seam
      auto i = cx.loop(), o = cx.interval();
      arc(o.b, o.a), arc(i.a, o.a);
      c.in = {i}, c.out = {o};
      break;
    }
    case Gen::Cozipper: {
      auto i = cx.interval(), o = cx.loop();
      arc(i.b, i.a), arc(o.a, i.a);
      c.in = {i}, c.out = {o};
      break;
    }
    case Gen::Cross:
      break;
  }
  cx.face();
  return c;
}

// identity strand: square for an interval, cylinder for a circle
inline CwCells cw_identity(CwComplex& cx, const Segment& s) {
  CwCells c;
  if (s.is_interval()) {
    auto i = cx.interval(), o = cx.interval();
    cx.edge(), cx.edge();
    c.in = {i}, c.out = {o};
  } else {
    auto i = cx.loop(), o = cx.loop();
    cx.edge();
    c.in = {i}, c.out = {o};
  }
  cx.face();
  return c;
}

inline int cw_euler(const PortGraph& g, const Component& comp) {
  CwComplex cx;
  std::vector<CwCells> cells(g.nodes.size());
  std::vector<char> in_comp(g.nodes.size(), 0);
  for (int n : comp.nodes) {
    in_comp[n] = 1;
    cells[n] = cw_generator(cx, g.node(n).gen.kind);
  }
  for (int i : comp.src)
    if (g.src[i].node == kTarget) cw_identity(cx, g.source[i]);
  for (int n : comp.nodes)
    for (int j = 0; j < (int)g.node(n).out.size(); ++j) {
      Endpoint d = g.node(n).out[j];
      if (d.node >= 0 && in_comp[d.node]) cx.glue(cells[n].out[j], cells[d.node].in[d.port]);
    }
  return cx.euler();
}

}  // namespace ocfa::testing
