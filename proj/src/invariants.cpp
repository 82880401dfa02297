#include "ocfa/invariants.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace ocfa {

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void join(int a, int b) { p[find(a)] = find(b); }
};

int node_euler(Gen k) {
  switch (k) {
    case Gen::MultC:
    case Gen::ComultC: return -1;
    case Gen::Zipper:
    case Gen::Cozipper: return 0;  // annulus with one boundary arc cut open
    default: return 1;
  }
}

}  // namespace

std::vector<Component> components(const PortGraph& g) {
  int N = (int)g.nodes.size(), S = (int)g.src.size(), T = (int)g.tgt.size();
  UnionFind uf(N + S + T);
  auto elem = [&](Endpoint e) {
    if (e.node == kSource) return N + e.port;
    if (e.node == kTarget) return N + S + e.port;
    return e.node;
  };
  for (int i = 0; i < S; ++i) uf.join(N + i, elem(g.src[i]));
  for (int id : g.node_ids())
    for (auto& d : g.node(id).out) uf.join(id, elem(d));
  std::map<int, Component> by_root;
  std::vector<int> order;
  auto get = [&](int e) -> Component& {
    int r = uf.find(e);
    if (!by_root.count(r)) order.push_back(r);
    return by_root[r];
  };
  for (int i = 0; i < S; ++i) get(N + i).src.push_back(i);
  for (int j = 0; j < T; ++j) get(N + S + j).tgt.push_back(j);
  for (int id : g.node_ids()) get(id).nodes.push_back(id);
  std::vector<Component> r;
  for (int root : order) r.push_back(by_root[root]);
  return r;
}

int euler_characteristic(const PortGraph& g, const Component& c) {
  int chi = 0;
  for (int id : c.nodes) {
    auto& n = g.node(id);
    chi += node_euler(n.gen.kind);
    for (int j = 0; j < (int)n.out.size(); ++j)
      if (n.out[j].node >= 0 && n.gen.out_seg(j).is_interval()) --chi;
  }
  for (int i : c.src)
    if (g.src[i].node == kTarget && g.source[i].is_interval()) ++chi;
  return chi;
}

int interval_index(const BoundaryObject& src, const BoundaryObject& tgt, BoundarySlot s) {
  int k = 0;
  if (s.side == Side::Target) k = (int)src.count_intervals();
  const auto& obj = s.side == Side::Source ? src : tgt;
  for (size_t i = 0; i + 1 < s.position; ++i) k += obj[i].is_interval();
  return k + 1;
}

// Local boundary wiring. Every interval wire w has a left rail (colour gamma_plus) and a
// right rail (gamma_minus), each with a top and a bottom end:
//   end 4w+0 = L.top, 4w+1 = L.bottom, 4w+2 = R.top, 4w+3 = R.bottom.
// Generators join rail ends (p, q inputs; r, s outputs):
//   mu_A    p.Lb-r.Lt  p.Rb-q.Lb  q.Rb-r.Rt
//   Delta_A p.Lb-r.Lt  r.Rt-s.Lt  s.Rt-p.Rb
//   eta_A, zip      r.Lt-r.Rt
//   eps_A, cozip    p.Lb-p.Rb
// Black edges: a source interval joins L.top-R.top, a target interval L.bottom-R.bottom.
// Walks leave a source interval down its left rail and cross a target interval left to right.
TraceResult boundary_trace(const PortGraph& g, const Component& c) {
  std::map<Endpoint, int> wire;  // origin -> wire index
  std::vector<Endpoint> origins;
  auto add = [&](Endpoint o) {
    if (!g.wire_type(o).is_interval() || wire.count(o)) return;
    wire[o] = (int)origins.size();
    origins.push_back(o);
  };
  for (int i : c.src) add({kSource, i});
  for (int id : c.nodes)
    for (int j = 0; j < (int)g.node(id).out.size(); ++j) add({id, j});
  int W = (int)origins.size();
  enum { Lt = 0, Lb = 1, Rt = 2, Rb = 3 };
  std::vector<int> partner(4 * W, -1), black(4 * W, 0);
  auto link = [&](int a, int b) {
    if (partner[a] >= 0 || partner[b] >= 0) throw MalformedDiagram("rail end joined twice");
    partner[a] = b, partner[b] = a;
  };
  auto in_w = [&](int id, int i) { return wire.at(g.node(id).in[i]); };
  auto out_w = [&](int id, int j) { return wire.at(Endpoint{id, j}); };
  for (int id : c.nodes) {
    auto& n = g.node(id);
    switch (n.gen.kind) {
      case Gen::MultA: {
        int p = in_w(id, 0), q = in_w(id, 1), r = out_w(id, 0);
        link(4 * p + Lb, 4 * r + Lt), link(4 * p + Rb, 4 * q + Lb), link(4 * q + Rb, 4 * r + Rt);
        break;
      }
      case Gen::ComultA: {
        int p = in_w(id, 0), r = out_w(id, 0), s = out_w(id, 1);
        link(4 * p + Lb, 4 * r + Lt), link(4 * r + Rt, 4 * s + Lt), link(4 * s + Rt, 4 * p + Rb);
        break;
      }
      case Gen::EtaA:
      case Gen::Zipper: {
        int r = out_w(id, 0);
        link(4 * r + Lt, 4 * r + Rt);
        break;
      }
      case Gen::EpsA:
      case Gen::Cozipper: {
        int p = in_w(id, 0);
        link(4 * p + Lb, 4 * p + Rb);
        break;
      }
      default: break;
    }
  }
  // black intervals carry their global index
  for (int i : c.src)
    if (g.source[i].is_interval()) {
      int w = wire.at({kSource, i});
      link(4 * w + Lt, 4 * w + Rt);
      black[4 * w + Lt] = black[4 * w + Rt] = interval_index(g.source, g.target, {Side::Source, size_t(i + 1)});
    }
  for (int j : c.tgt)
    if (g.target[j].is_interval()) {
      int w = wire.at(g.tgt[j]);
      link(4 * w + Lb, 4 * w + Rb);
      black[4 * w + Lb] = black[4 * w + Rb] = interval_index(g.source, g.target, {Side::Target, size_t(j + 1)});
    }
  for (int e = 0; e < 4 * W; ++e)
    if (partner[e] < 0) throw MalformedDiagram("open rail end");

  auto rail = [](int e) { return e ^ 1; };
  auto color = [&](int e) {
    Segment s = g.wire_type(origins[e / 4]);
    return (e % 4) < 2 ? s.plus : s.minus;
  };
  TraceResult res;
  std::vector<char> seen(4 * W, 0);
  std::map<int, int> sigma;
  std::map<int, Color> arrive;
  // a walk starts just after crossing a black interval in its canonical direction
  auto walk_from = [&](int start, int first) {
    std::vector<int> cyc{first};
    int e = start;
    seen[e] = seen[partner[e]] = 1;
    while (true) {
      int r = rail(e);
      int nxt = partner[r];
      seen[r] = seen[nxt] = 1;
      if (black[r]) {
        int k = black[r];
        bool src_edge = (r % 4) == Lt || (r % 4) == Rt;
        int expect = src_edge ? Rt : Lb;
        if (r % 4 != expect) throw MalformedDiagram("inconsistent boundary orientation");
        arrive[k] = color(r);
        if (nxt == start) break;
        cyc.push_back(k);
      }
      e = nxt;
    }
    for (size_t i = 0; i < cyc.size(); ++i) sigma[cyc[i]] = cyc[(i + 1) % cyc.size()];
    res.cycles.push_back(cyc);
  };
  std::vector<std::pair<int, int>> starts;  // (global index, end)
  for (int i : c.src)
    if (g.source[i].is_interval()) {
      int w = wire.at({kSource, i});
      starts.push_back({black[4 * w + Lt], 4 * w + Lt});
      res.gamma[black[4 * w + Lt]] = color(4 * w + Lt);
    }
  for (int j : c.tgt)
    if (g.target[j].is_interval()) {
      int w = wire.at(g.tgt[j]);
      starts.push_back({black[4 * w + Rb], 4 * w + Rb});
      res.gamma[black[4 * w + Rb]] = color(4 * w + Rb);
    }
  std::sort(starts.begin(), starts.end());
  int mixed = 0, pure = 0;
  for (auto [k, e] : starts)
    if (!seen[e]) walk_from(e, k), ++mixed;
  for (int e0 = 0; e0 < 4 * W; ++e0) {
    if (seen[e0]) continue;
    Color col = color(e0);
    int e = e0;
    do {
      if (color(e) != col) throw MalformedDiagram("colour changes along a free boundary circle");
      int r = rail(e);
      seen[e] = seen[r] = 1;
      e = partner[r];
    } while (e != e0);
    ++res.windows[col];
    ++pure;
  }
  // colours must agree where a walk arrives at the next interval
  for (auto [j, k] : sigma)
    if (arrive.at(k) != res.gamma.at(j)) {
      if (j == k)
        throw MalformedDiagram("fixed point " + std::to_string(j) + " of the boundary permutation has two colours");
      throw MalformedDiagram("colour mismatch along boundary walk at interval " + std::to_string(k));
    }
  int circles = 0;
  for (int i : c.src) circles += g.source[i].is_circle();
  for (int j : c.tgt) circles += g.target[j].is_circle();
  res.b = mixed + pure + circles;
  res.cycles = canonical_cycles(res.cycles);
  return res;
}

ComponentProfile component_profile(const PortGraph& g, const Component& c) {
  ComponentProfile p;
  p.euler = euler_characteristic(g, c);
  auto tr = boundary_trace(g, c);
  p.b = tr.b;
  int twice = 2 - p.euler - p.b;
  if (twice < 0 || twice % 2) throw MalformedDiagram("non-integral genus");
  p.genus = twice / 2;
  p.windows = tr.windows;
  p.boundary_cycles = tr.cycles;
  p.gamma_boundary = tr.gamma;
  for (int i : c.src)
    (g.source[i].is_interval() ? p.interval_boundary : p.closed_boundary).insert({Side::Source, size_t(i + 1)});
  for (int j : c.tgt)
    (g.target[j].is_interval() ? p.interval_boundary : p.closed_boundary).insert({Side::Target, size_t(j + 1)});
  return p;
}

namespace {

bool profile_less(const ComponentProfile& a, const ComponentProfile& b) {
  auto first = [](const ComponentProfile& p) {
    BoundarySlot lo{Side::Target, SIZE_MAX};
    for (auto& s : p.closed_boundary) lo = std::min(lo, s);
    for (auto& s : p.interval_boundary) lo = std::min(lo, s);
    return lo;
  };
  auto fa = first(a), fb = first(b);
  if (fa != fb) return fa < fb;
  return std::tie(a.genus, a.windows) < std::tie(b.genus, b.windows);
}

}  // namespace

InvariantProfile invariant_profile(const PortGraph& g) {
  InvariantProfile p{{}, g.source, g.target};
  for (auto& c : components(g)) p.components.push_back(component_profile(g, c));
  std::stable_sort(p.components.begin(), p.components.end(), profile_less);
  return p;
}

InvariantProfile invariant_profile(const DiagramTerm& t) { return invariant_profile(to_port_graph(t)); }

bool equivalent(const InvariantProfile& f, const InvariantProfile& g) {
  if (!(f.source == g.source) || !(f.target == g.target)) return false;
  // components are sorted by owned boundary first, floating ones by content
  return f.components == g.components;
}

bool equivalent(const DiagramTerm& f, const DiagramTerm& g) {
  if (!validate(f).ok || !validate(g).ok) return false;
  return equivalent(invariant_profile(f), invariant_profile(g));
}

Cycles canonical_cycles(Cycles c) {
  for (auto& cy : c) std::rotate(cy.begin(), std::min_element(cy.begin(), cy.end()), cy.end());
  std::sort(c.begin(), c.end(), [](auto& a, auto& b) { return a.front() < b.front(); });
  return c;
}

std::string cycles_str(const Cycles& c) {
  std::string s;
  for (auto& cy : c) {
    s += "(";
    for (size_t i = 0; i < cy.size(); ++i) s += (i ? " " : "") + std::to_string(cy[i]);
    s += ")";
  }
  return s.empty() ? "()" : s;
}

static nlohmann::json slots_json(const std::set<BoundarySlot>& s) {
  auto arr = nlohmann::json::array();
  for (auto& x : s) arr.push_back({{"side", x.side == Side::Source ? "source" : "target"}, {"position", x.position}});
  return arr;
}

std::string profile_json(const InvariantProfile& p, int indent) {
  nlohmann::json j;
  j["source"] = p.source.kinds_str();
  j["target"] = p.target.kinds_str();
  auto comps = nlohmann::json::array();
  for (auto& c : p.components) {
    nlohmann::json cj;
    cj["genus"] = c.genus;
    cj["euler"] = c.euler;
    cj["boundary_circles"] = c.b;
    cj["windows"] = c.windows;
    cj["boundary_cycles"] = c.boundary_cycles;
    nlohmann::json gb = nlohmann::json::object();
    for (auto& [k, v] : c.gamma_boundary) gb[std::to_string(k)] = v;
    cj["gamma_boundary"] = gb;
    cj["closed_boundary"] = slots_json(c.closed_boundary);
    cj["interval_boundary"] = slots_json(c.interval_boundary);
    comps.push_back(cj);
  }
  j["components"] = comps;
  return j.dump(indent);
}

std::string profile_text(const InvariantProfile& p) {
  std::ostringstream os;
  os << "source " << p.source.kinds_str() << " target " << p.target.kinds_str() << "\n";
  os << "components " << p.components.size() << "\n";
  Cycles all;
  for (size_t i = 0; i < p.components.size(); ++i) {
    auto& c = p.components[i];
    os << "component " << i + 1 << ": genus " << c.genus << ", chi " << c.euler << ", b " << c.b << ", windows {";
    bool first = true;
    for (auto& [col, n] : c.windows) os << (first ? "" : ", ") << col << ":" << n, first = false;
    os << "}, sigma " << cycles_str(c.boundary_cycles) << "\n";
    all.insert(all.end(), c.boundary_cycles.begin(), c.boundary_cycles.end());
  }
  os << "sigma = " << cycles_str(canonical_cycles(all)) << "\n";
  return os.str();
}

}  // namespace ocfa
