#include "ocfa/port_graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace ocfa {

int PortGraph::add_node(const Generator& g) {
  if (g.kind == Gen::Cross) throw MalformedGraph("crossings are not nodes");
  Node n{g, std::vector<Endpoint>(g.n_in()), std::vector<Endpoint>(g.n_out())};
  nodes.push_back(std::move(n));
  return (int)nodes.size() - 1;
}

std::vector<int> PortGraph::node_ids() const {
  std::vector<int> r;
  for (int i = 0; i < (int)nodes.size(); ++i)
    if (nodes[i]) r.push_back(i);
  return r;
}

size_t PortGraph::node_count() const {
  size_t n = 0;
  for (auto& x : nodes) n += x.has_value();
  return n;
}

Endpoint PortGraph::dest_of(Endpoint o) const {
  if (o.node == kSource) return src.at(o.port);
  return node(o.node).out.at(o.port);
}

Endpoint PortGraph::origin_of(Endpoint d) const {
  if (d.node == kTarget) return tgt.at(d.port);
  return node(d.node).in.at(d.port);
}

void PortGraph::connect(Endpoint o, Endpoint d) {
  if (o.node == kSource)
    src.at(o.port) = d;
  else
    node(o.node).out.at(o.port) = d;
  if (d.node == kTarget)
    tgt.at(d.port) = o;
  else
    node(d.node).in.at(d.port) = o;
}

Segment PortGraph::wire_type(Endpoint o) const {
  if (o.node == kSource) return source.segments.at(o.port);
  return node(o.node).gen.out_seg(o.port);
}

PortGraph to_port_graph(const DiagramTerm& t) {
  auto rep = validate(t);
  if (!rep.ok) throw MalformedGraph("ill-typed term: " + rep.message);
  PortGraph g;
  g.source = t.source;
  g.target = t.target;
  g.src.resize(t.source.size());
  g.tgt.resize(t.target.size());
  std::vector<Endpoint> cur;
  for (int i = 0; i < (int)t.source.size(); ++i) cur.push_back({kSource, i});
  for (auto& sl : t.slices) {
    std::vector<Endpoint> next;
    size_t p = 0;
    for (auto& f : sl.factors) {
      if (f.identity) {
        next.push_back(cur[p++]);
      } else if (f.gen.kind == Gen::Cross) {
        next.push_back(cur[p + 1]);
        next.push_back(cur[p]);
        p += 2;
      } else {
        int id = g.add_node(f.gen);
        for (int i = 0; i < (int)f.gen.n_in(); ++i) g.connect(cur[p++], {id, i});
        for (int j = 0; j < (int)f.gen.n_out(); ++j) next.push_back({id, j});
      }
    }
    cur = std::move(next);
  }
  for (int j = 0; j < (int)cur.size(); ++j) g.connect(cur[j], {kTarget, j});
  return g;
}

void check_port_graph(const PortGraph& g) {
  if (g.src.size() != g.source.size() || g.tgt.size() != g.target.size())
    throw MalformedGraph("boundary size mismatch");
  auto check_pair = [&](Endpoint o, Endpoint d) {
    if (o.node == kTarget || d.node == kSource) throw MalformedGraph("wire direction reversed");
    if (o.node >= 0 && (!g.alive(o.node) || o.port >= (int)g.node(o.node).out.size()))
      throw MalformedGraph("dangling origin");
    if (d.node >= 0 && (!g.alive(d.node) || d.port >= (int)g.node(d.node).in.size()))
      throw MalformedGraph("dangling destination");
    if (o.node == kSource && (o.port < 0 || o.port >= (int)g.src.size())) throw MalformedGraph("bad source index");
    if (d.node == kTarget && (d.port < 0 || d.port >= (int)g.tgt.size())) throw MalformedGraph("bad target index");
    if (!(g.dest_of(o) == d) || !(g.origin_of(d) == o)) throw MalformedGraph("port matched twice");
    Segment want = d.node == kTarget ? g.target[d.port] : g.node(d.node).gen.in_seg(d.port);
    if (!(g.wire_type(o) == want)) throw MalformedGraph("wire type mismatch");
  };
  for (int i = 0; i < (int)g.src.size(); ++i) check_pair({kSource, i}, g.src[i]);
  for (int id : g.node_ids()) {
    auto& n = g.node(id);
    if (n.gen.kind == Gen::Cross) throw MalformedGraph("crossing node");
    for (int j = 0; j < (int)n.out.size(); ++j) check_pair({id, j}, n.out[j]);
  }
  // acyclicity
  std::vector<int> state(g.nodes.size(), 0);
  std::function<void(int)> dfs = [&](int v) {
    state[v] = 1;
    for (auto& d : g.node(v).out) {
      if (d.node < 0) continue;
      if (state[d.node] == 1) throw MalformedGraph("cycle in flow direction");
      if (state[d.node] == 0) dfs(d.node);
    }
    state[v] = 2;
  };
  for (int id : g.node_ids())
    if (!state[id]) dfs(id);
}

namespace {

struct Layout {
  const PortGraph& g;
  DiagramTerm t;
  std::vector<Endpoint> cur;

  BoundaryObject cur_obj() const {
    BoundaryObject o;
    for (auto& e : cur) o.segments.push_back(g.wire_type(e));
    return o;
  }

  void swap_at(size_t j) {  // cross wires j, j+1
    Slice s;
    for (size_t k = 0; k < cur.size(); ++k) {
      if (k == j) {
        s.factors.push_back(Factor::of(Generator::cross(g.wire_type(cur[j]), g.wire_type(cur[j + 1]))));
        ++k;
      } else {
        s.factors.push_back(Factor::id(g.wire_type(cur[k])));
      }
    }
    std::swap(cur[j], cur[j + 1]);
    t.slices.push_back(std::move(s));
  }

  void permute_to(const std::vector<Endpoint>& want) {
    for (size_t i = 0; i < want.size(); ++i) {
      size_t j = std::find(cur.begin() + i, cur.end(), want[i]) - cur.begin();
      while (j > i) swap_at(--j);
    }
  }

  void place(int id, size_t pos) {
    auto& n = g.node(id);
    Slice s;
    for (size_t k = 0; k < pos; ++k) s.factors.push_back(Factor::id(g.wire_type(cur[k])));
    s.factors.push_back(Factor::of(n.gen));
    for (size_t k = pos + n.in.size(); k < cur.size(); ++k) s.factors.push_back(Factor::id(g.wire_type(cur[k])));
    t.slices.push_back(std::move(s));
    cur.erase(cur.begin() + pos, cur.begin() + pos + n.in.size());
    for (int j = (int)n.out.size() - 1; j >= 0; --j) cur.insert(cur.begin() + pos, Endpoint{id, j});
  }
};

}  // namespace

DiagramTerm from_port_graph(const PortGraph& g) {
  check_port_graph(g);
  Layout L{g, {g.source, g.target, {}}, {}};
  for (int i = 0; i < (int)g.source.size(); ++i) L.cur.push_back({kSource, i});
  std::set<int> todo;
  for (int id : g.node_ids()) todo.insert(id);
  auto is_source_free = [&](int id) { return g.node(id).in.empty(); };
  while (true) {
    int best = -1;
    size_t best_key = SIZE_MAX;
    for (int id : todo) {
      if (is_source_free(id)) continue;
      bool ready = true;
      size_t key = L.cur.size();
      for (auto& o : g.node(id).in) {
        auto it = std::find(L.cur.begin(), L.cur.end(), o);
        if (it != L.cur.end()) {
          key = std::min(key, size_t(it - L.cur.begin()));
        } else if (!(o.node >= 0 && todo.count(o.node) && is_source_free(o.node))) {
          ready = false;
          break;
        }
      }
      if (ready && key < best_key) best = id, best_key = key;
    }
    if (best < 0) break;
    auto& n = g.node(best);
    size_t s = best_key;
    for (auto& o : n.in) {
      if (std::find(L.cur.begin(), L.cur.end(), o) == L.cur.end()) {
        L.place(o.node, s);
        todo.erase(o.node);
      }
    }
    std::vector<Endpoint> want;
    for (auto& e : L.cur)
      if (std::find(n.in.begin(), n.in.end(), e) == n.in.end()) want.push_back(e);
    size_t lo = SIZE_MAX;
    for (auto& o : n.in) lo = std::min(lo, size_t(std::find(L.cur.begin(), L.cur.end(), o) - L.cur.begin()));
    want.insert(want.begin() + lo, n.in.begin(), n.in.end());
    L.permute_to(want);
    L.place(best, lo);
    todo.erase(best);
  }
  for (int id : todo) L.place(id, L.cur.size());  // leftover units feeding the target directly
  L.permute_to(g.tgt);
  return L.t;
}

namespace {

std::string ep_str(Endpoint e, const std::map<int, int>& lab) {
  if (e.node == kSource) return "s" + std::to_string(e.port);
  if (e.node == kTarget) return "t" + std::to_string(e.port);
  return "n" + std::to_string(lab.at(e.node)) + "." + std::to_string(e.port);
}

std::string node_str(const PortGraph& g, int id, const std::map<int, int>& lab) {
  auto& n = g.node(id);
  std::string s = n.gen.str() + "<";
  for (auto& e : n.in) s += ep_str(e, lab) + " ";
  s += ">";
  for (auto& e : n.out) s += ep_str(e, lab) + " ";
  return s + ";";
}

// BFS labelling from a seed list; nodes already in lab are skipped
void bfs_label(const PortGraph& g, std::vector<int> seeds, std::map<int, int>& lab, std::vector<int>& order) {
  std::deque<int> q;
  auto visit = [&](int id) {
    if (id < 0 || lab.count(id)) return;
    lab[id] = (int)lab.size();
    order.push_back(id);
    q.push_back(id);
  };
  for (int s : seeds) visit(s);
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (auto& e : g.node(v).in) visit(e.node);
    for (auto& e : g.node(v).out) visit(e.node);
  }
}

}  // namespace

std::vector<int> canonical_order(const PortGraph& g) {
  std::map<int, int> lab;
  std::vector<int> order;
  std::vector<int> seeds;
  for (auto& e : g.src) seeds.push_back(e.node);
  for (auto& e : g.tgt) seeds.push_back(e.node);
  bfs_label(g, seeds, lab, order);
  // floating closed components
  std::vector<std::pair<std::string, std::vector<int>>> floating;
  std::set<int> seen;
  for (int id : g.node_ids()) {
    if (lab.count(id) || seen.count(id)) continue;
    std::map<int, int> comp_lab;
    std::vector<int> comp;
    bfs_label(g, {id}, comp_lab, comp);
    for (int c : comp) seen.insert(c);
    std::string best;
    std::vector<int> best_order;
    for (int start : comp) {
      std::map<int, int> l2;
      std::vector<int> o2;
      bfs_label(g, {start}, l2, o2);
      std::string enc;
      for (int v : o2) enc += node_str(g, v, l2);
      if (best_order.empty() || enc < best) best = enc, best_order = o2;
    }
    floating.push_back({best, best_order});
  }
  std::sort(floating.begin(), floating.end());
  for (auto& [enc, o] : floating)
    for (int v : o) order.push_back(v);
  return order;
}

std::string canonical_form(const PortGraph& g) {
  auto order = canonical_order(g);
  std::map<int, int> lab;
  for (int i = 0; i < (int)order.size(); ++i) lab[order[i]] = i;
  std::string s = "src[" + g.source.str() + "]->";
  for (auto& e : g.src) s += ep_str(e, lab) + " ";
  s += "|tgt[" + g.target.str() + "]<-";
  for (auto& e : g.tgt) s += ep_str(e, lab) + " ";
  s += "|";
  for (int v : order) s += node_str(g, v, lab);
  return s;
}

bool isomorphic(const PortGraph& a, const PortGraph& b) {
  return a.node_count() == b.node_count() && canonical_form(a) == canonical_form(b);
}

bool syntactic_eq(const DiagramTerm& f, const DiagramTerm& g) {
  if (!validate(f).ok || !validate(g).ok) return false;
  return isomorphic(to_port_graph(f), to_port_graph(g));
}

std::vector<char> downstream(const PortGraph& g, int from) {
  std::vector<char> mark(g.nodes.size(), 0);
  std::vector<int> st{from};
  while (!st.empty()) {
    int v = st.back();
    st.pop_back();
    for (auto& e : g.node(v).out)
      if (e.node >= 0 && !mark[e.node]) mark[e.node] = 1, st.push_back(e.node);
  }
  return mark;
}

}  // namespace ocfa
