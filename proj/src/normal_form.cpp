#include "ocfa/normal_form.hpp"

#include <algorithm>
#include <numeric>

namespace ocfa {

Perm perm_from_cycles(const Cycles& c, int k) {
  Perm p(k);
  std::iota(p.begin(), p.end(), 1);
  for (auto& cy : c)
    for (size_t i = 0; i < cy.size(); ++i) p.at(cy[i] - 1) = cy[(i + 1) % cy.size()];
  return p;
}

Cycles perm_cycles(const Perm& p) {
  Cycles out;
  std::vector<char> seen(p.size(), 0);
  for (int i = 1; i <= (int)p.size(); ++i) {
    if (seen[i - 1]) continue;
    std::vector<int> cy;
    for (int j = i; !seen[j - 1]; j = p[j - 1]) seen[j - 1] = 1, cy.push_back(j);
    out.push_back(cy);
  }
  return out;
}

Perm perm_compose(const Perm& a, const Perm& b) {
  Perm r(b.size());
  for (size_t i = 0; i < b.size(); ++i) r[i] = a.at(b[i] - 1);
  return r;
}

Perm perm_inverse(const Perm& p) {
  Perm r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r.at(p[i] - 1) = (int)i + 1;
  return r;
}

namespace {

void sort_cycles(Cycles& c) {
  c = canonical_cycles(c);
  std::stable_sort(c.begin(), c.end(), [](auto& a, auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.front() < b.front();
  });
}

}  // namespace

Perm sigma_bar(const Perm& sigma, const Perm& tau) {
  if (sigma.size() != tau.size()) throw CycleTypeMismatch("permutations act on different sets");
  Cycles cs = perm_cycles(sigma), ct = perm_cycles(tau);
  sort_cycles(cs);
  sort_cycles(ct);
  if (cs.size() != ct.size()) throw CycleTypeMismatch("different number of cycles");
  Perm sb(sigma.size());
  for (size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].size() != ct[i].size()) throw CycleTypeMismatch("different cycle type");
    for (size_t j = 0; j < cs[i].size(); ++j) sb[cs[i][j] - 1] = ct[i][j];
  }
  return sb;
}

NormalFormBlocks nf_blocks(const ComponentProfile& p, const BoundaryObject& n, const BoundaryObject& m) {
  for (auto& s : n.segments)
    if (!s.is_interval()) throw InconsistentProfile("source of an open-to-closed normal form must be all intervals");
  for (auto& s : m.segments)
    if (!s.is_circle()) throw InconsistentProfile("target of an open-to-closed normal form must be all circles");
  if (p.genus < 0) throw InconsistentProfile("negative genus");
  int k = (int)n.size();
  std::vector<int> hit(k + 1, 0);
  for (auto& cy : p.boundary_cycles)
    for (int x : cy) {
      if (x < 1 || x > k) throw InconsistentProfile("cycle entry out of range");
      if (hit[x]++) throw InconsistentProfile("cycles are not disjoint");
    }
  for (int x = 1; x <= k; ++x)
    if (!hit[x]) throw InconsistentProfile("interval " + std::to_string(x) + " missing from the cycles");
  NormalFormBlocks b;
  Cycles cs = p.boundary_cycles;
  sort_cycles(cs);
  Cycles tau_c;
  int s = 1;
  for (auto& cy : cs) {
    int q = (int)cy.size();
    b.q.push_back(q);
    std::vector<int> t{s};
    for (int i = q - 1; i >= 1; --i) t.push_back(s + i);
    tau_c.push_back(t);
    std::vector<int> leaves(q);
    for (int i = 0; i < q; ++i) leaves[(q - i) % q] = cy[i];
    b.leaves.push_back(leaves);
    s += q;
  }
  b.r = (int)cs.size();
  for (auto& [c, w] : p.windows)
    if (w < 0) throw InconsistentProfile("negative window count");
    else if (w > 0) b.omega[c] = w;
  b.g = p.genus;
  b.m = (int)m.size();
  b.sigma_bar = sigma_bar(perm_from_cycles(p.boundary_cycles, k), perm_from_cycles(tau_c, k));
  return b;
}

PortGraph nf_open_to_closed_graph(const ComponentProfile& p, const BoundaryObject& n, const BoundaryObject& m) {
  NormalFormBlocks b = nf_blocks(p, n, m);
  PortGraph g;
  g.source = n;
  g.target = m;
  g.src.resize(n.size());
  g.tgt.resize(m.size());
  std::vector<Endpoint> closed;  // outputs of the A blocks
  for (auto& leaves : b.leaves) {
    Endpoint acc{kSource, leaves[0] - 1};
    Segment at = n[leaves[0] - 1];
    for (size_t t = 1; t < leaves.size(); ++t) {
      Segment leaf = n[leaves[t] - 1];
      if (at.minus != leaf.plus) throw InconsistentProfile("colour word of a boundary cycle does not close up");
      int mu = g.add_node(Generator::mult_a(at.plus, at.minus, leaf.minus));
      g.connect(acc, {mu, 0});
      g.connect({kSource, leaves[t] - 1}, {mu, 1});
      acc = {mu, 0};
      at = Segment::interval(at.plus, leaf.minus);
    }
    if (at.plus != at.minus) throw InconsistentProfile("colour word of a boundary cycle does not close up");
    int cz = g.add_node(Generator::cozip(at.plus));
    g.connect(acc, {cz, 0});
    closed.push_back({cz, 0});
  }
  Endpoint cur;
  if (closed.empty()) {
    cur = {g.add_node(Generator::closed(Gen::EtaC)), 0};
  } else {
    cur = closed[0];
    for (size_t i = 1; i < closed.size(); ++i) {
      int mu = g.add_node(Generator::closed(Gen::MultC));
      g.connect(cur, {mu, 0});
      g.connect(closed[i], {mu, 1});
      cur = {mu, 0};
    }
  }
  for (auto& [c, w] : b.omega)
    for (int i = 0; i < w; ++i) {
      int z = g.add_node(Generator::zip(c));
      int cz = g.add_node(Generator::cozip(c));
      g.connect(cur, {z, 0});
      g.connect({z, 0}, {cz, 0});
      cur = {cz, 0};
    }
  for (int i = 0; i < b.g; ++i) {
    int d = g.add_node(Generator::closed(Gen::ComultC));
    int mu = g.add_node(Generator::closed(Gen::MultC));
    g.connect(cur, {d, 0});
    g.connect({d, 0}, {mu, 0});
    g.connect({d, 1}, {mu, 1});
    cur = {mu, 0};
  }
  if (b.m == 0) {
    int e = g.add_node(Generator::closed(Gen::EpsC));
    g.connect(cur, {e, 0});
  } else {
    for (int j = b.m - 1; j >= 1; --j) {
      int d = g.add_node(Generator::closed(Gen::ComultC));
      g.connect(cur, {d, 0});
      g.connect({d, 1}, {kTarget, j});
      cur = {d, 0};
    }
    g.connect(cur, {kTarget, 0});
  }
  return g;
}

DiagramTerm nf_open_to_closed(const ComponentProfile& p, const BoundaryObject& n, const BoundaryObject& m) {
  return from_port_graph(nf_open_to_closed_graph(p, n, m));
}

WrapData wrap_data(const BoundaryObject& n, const BoundaryObject& m) {
  WrapData w;
  w.n = n;
  w.m = m;
  for (int i = 0; i < (int)n.size(); ++i) (n[i].is_interval() ? w.n1 : w.n0).push_back(i);
  for (int j = 0; j < (int)m.size(); ++j) (m[j].is_interval() ? w.m1 : w.m0).push_back(j);
  w.sigma1 = w.n1;
  w.sigma1.insert(w.sigma1.end(), w.n0.begin(), w.n0.end());
  w.sigma2 = w.m1;
  w.sigma2.insert(w.sigma2.end(), w.m0.begin(), w.m0.end());
  return w;
}

BoundaryObject wrapped_source(const WrapData& w) {
  BoundaryObject s;
  for (int j : w.m1) s.segments.push_back(Segment::interval(w.m[j].minus, w.m[j].plus));
  for (int i : w.n1) s.segments.push_back(w.n[i]);
  return s;
}

size_t wrapped_target_size(const WrapData& w) { return w.m0.size() + w.n0.size(); }

namespace {

std::vector<int> rank_in(const std::vector<int>& list, size_t total) {
  std::vector<int> r(total, -1);
  for (int k = 0; k < (int)list.size(); ++k) r[list[k]] = k;
  return r;
}

// all wires of a graph as (origin, destination)
std::vector<std::pair<Endpoint, Endpoint>> wires(const PortGraph& g) {
  std::vector<std::pair<Endpoint, Endpoint>> w;
  for (int i = 0; i < (int)g.src.size(); ++i) w.push_back({{kSource, i}, g.src[i]});
  for (int id : g.node_ids())
    for (int j = 0; j < (int)g.node(id).out.size(); ++j) w.push_back({{id, j}, g.node(id).out[j]});
  return w;
}

}  // namespace

void embed_graph(PortGraph& r, const PortGraph& k, const std::vector<int>& src_map, const std::vector<int>& tgt_map) {
  std::map<int, int> id;
  for (int v : k.node_ids()) id[v] = r.add_node(k.node(v).gen);
  for (auto [o, d] : wires(k)) {
    Endpoint o2 = o.node == kSource ? Endpoint{kSource, src_map.at(o.port)} : Endpoint{id.at(o.node), o.port};
    Endpoint d2 = d.node == kTarget ? Endpoint{kTarget, tgt_map.at(d.port)} : Endpoint{id.at(d.node), d.port};
    r.connect(o2, d2);
  }
}

std::pair<PortGraph, WrapData> lambda_graph(const PortGraph& g) {
  WrapData w = wrap_data(g.source, g.target);
  PortGraph h;
  h.source = wrapped_source(w);
  h.target = BoundaryObject(std::vector<Segment>(wrapped_target_size(w), Segment::circle()));
  h.src.resize(h.source.size());
  h.tgt.resize(h.target.size());
  h.nodes = g.nodes;  // keep ids
  auto rn1 = rank_in(w.n1, g.source.size());
  auto rm0 = rank_in(w.m0, g.target.size());
  int M1 = (int)w.m1.size(), M0 = (int)w.m0.size();
  // closed copairing on each source circle
  std::vector<int> copair(g.source.size(), -1);
  for (int k = 0; k < (int)w.n0.size(); ++k) {
    int eta = h.add_node(Generator::closed(Gen::EtaC));
    int d = h.add_node(Generator::closed(Gen::ComultC));
    h.connect({eta, 0}, {d, 0});
    h.connect({d, 0}, {kTarget, M0 + k});
    copair[w.n0[k]] = d;
  }
  // open pairing on each target interval
  std::vector<int> pair(g.target.size(), -1);
  for (int k = 0; k < M1; ++k) {
    const Segment& s = g.target[w.m1[k]];
    int mu = h.add_node(Generator::mult_a(s.plus, s.minus, s.plus));
    int eps = h.add_node(Generator::eps_a(s.plus));
    h.connect({mu, 0}, {eps, 0});
    h.connect({kSource, k}, {mu, 1});
    pair[w.m1[k]] = mu;
  }
  for (auto [o, d] : wires(g)) {
    Endpoint o2 = o, d2 = d;
    if (o.node == kSource)
      o2 = g.source[o.port].is_interval() ? Endpoint{kSource, M1 + rn1[o.port]} : Endpoint{copair[o.port], 1};
    if (d.node == kTarget)
      d2 = g.target[d.port].is_interval() ? Endpoint{pair[d.port], 0} : Endpoint{kTarget, rm0[d.port]};
    h.connect(o2, d2);
  }
  return {h, w};
}

PortGraph lambda_inverse_graph(const PortGraph& h, const WrapData& w) {
  if (!(h.source == wrapped_source(w)))
    throw InconsistentWrap("source " + h.source.str() + " does not match wrap data " + wrapped_source(w).str());
  if (h.target.size() != wrapped_target_size(w) || h.target.count_intervals())
    throw InconsistentWrap("target does not match wrap data");
  PortGraph g;
  g.source = w.n;
  g.target = w.m;
  g.src.resize(w.n.size());
  g.tgt.resize(w.m.size());
  g.nodes = h.nodes;
  int M1 = (int)w.m1.size(), M0 = (int)w.m0.size();
  std::vector<int> copair(M1), pair(w.n0.size());
  for (int k = 0; k < M1; ++k) {
    const Segment& s = w.m[w.m1[k]];
    int eta = g.add_node(Generator::eta_a(s.minus));
    int d = g.add_node(Generator::comult_a(s.minus, s.plus, s.minus));
    g.connect({eta, 0}, {d, 0});
    g.connect({d, 1}, {kTarget, w.m1[k]});
    copair[k] = d;
  }
  for (int k = 0; k < (int)w.n0.size(); ++k) {
    int mu = g.add_node(Generator::closed(Gen::MultC));
    int eps = g.add_node(Generator::closed(Gen::EpsC));
    g.connect({mu, 0}, {eps, 0});
    g.connect({kSource, w.n0[k]}, {mu, 0});
    pair[k] = mu;
  }
  for (auto [o, d] : wires(h)) {
    Endpoint o2 = o, d2 = d;
    if (o.node == kSource) o2 = o.port < M1 ? Endpoint{copair[o.port], 0} : Endpoint{kSource, w.n1[o.port - M1]};
    if (d.node == kTarget) d2 = d.port < M0 ? Endpoint{kTarget, w.m0[d.port]} : Endpoint{pair[d.port - M0], 1};
    g.connect(o2, d2);
  }
  return g;
}

std::pair<DiagramTerm, WrapData> lambda(const DiagramTerm& t) {
  auto [h, w] = lambda_graph(to_port_graph(t));
  return {from_port_graph(h), w};
}

DiagramTerm lambda_inverse(const DiagramTerm& t, const WrapData& w) {
  return from_port_graph(lambda_inverse_graph(to_port_graph(t), w));
}

ComponentProfile lambda_profile(const PortGraph& g, const Component& c, const ComponentProfile& p) {
  // local Lambda numbering: the component's target intervals first, then its source intervals
  std::map<int, int> relabel;
  int next = 1;
  for (int j : c.tgt)
    if (g.target[j].is_interval()) relabel[interval_index(g.source, g.target, {Side::Target, size_t(j + 1)})] = next++;
  for (int i : c.src)
    if (g.source[i].is_interval()) relabel[interval_index(g.source, g.target, {Side::Source, size_t(i + 1)})] = next++;
  ComponentProfile q;
  q.genus = p.genus;
  q.windows = p.windows;
  for (auto& cy : p.boundary_cycles) {
    std::vector<int> c2;
    for (int x : cy) c2.push_back(relabel.at(x));
    q.boundary_cycles.push_back(c2);
  }
  q.boundary_cycles = canonical_cycles(q.boundary_cycles);
  for (auto& [k, col] : p.gamma_boundary) q.gamma_boundary[relabel.at(k)] = col;
  for (int k = 1; k < next; ++k) q.interval_boundary.insert({Side::Source, size_t(k)});
  size_t circles = p.closed_boundary.size();
  for (size_t k = 1; k <= circles; ++k) q.closed_boundary.insert({Side::Target, k});
  return q;
}

PortGraph normal_form_graph(const PortGraph& g) {
  PortGraph r;
  r.source = g.source;
  r.target = g.target;
  r.src.resize(g.source.size());
  r.tgt.resize(g.target.size());
  for (auto& c : components(g)) {
    ComponentProfile p = component_profile(g, c);
    BoundaryObject n, m;
    for (int i : c.src) n.segments.push_back(g.source[i]);
    for (int j : c.tgt) m.segments.push_back(g.target[j]);
    WrapData w = wrap_data(n, m);
    ComponentProfile q = lambda_profile(g, c, p);
    PortGraph h = nf_open_to_closed_graph(q, wrapped_source(w),
                                          BoundaryObject(std::vector<Segment>(wrapped_target_size(w), Segment::circle())));
    PortGraph k = lambda_inverse_graph(h, w);
    embed_graph(r, k, c.src, c.tgt);
  }
  return r;
}

DiagramTerm normal_form(const DiagramTerm& t) { return from_port_graph(normal_form_graph(to_port_graph(t))); }

}  // namespace ocfa
