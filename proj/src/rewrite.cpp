#include <algorithm>
#include <deque>
#include <sstream>

#include "ocfa/dsl.hpp"
#include "ocfa/rewrite.hpp"

namespace ocfa {

const char* dir_str(Dir d) { return d == Dir::LR ? "L->R" : "R->L"; }

namespace {

using Binding = std::map<Color, Color>;

size_t arity(Gen k) {
  switch (k) {
    case Gen::MultA:
    case Gen::ComultA:
      return 3;
    case Gen::EtaA:
    case Gen::EpsA:
    case Gen::Zipper:
    case Gen::Cozipper:
      return 1;
    default:
      return 0;
  }
}

bool bind(Binding& b, const Color& var, const Color& val) {
  auto [it, fresh] = b.emplace(var, val);
  return fresh || it->second == val;
}

bool bind_seg(Binding& b, const Segment& pat, const Segment& s) {
  if (pat.kind != s.kind) return false;
  return !pat.is_interval() || (bind(b, pat.plus, s.plus) && bind(b, pat.minus, s.minus));
}

std::string ep_str(Endpoint e) {
  if (e.node == kSource) return "s" + std::to_string(e.port);
  return std::to_string(e.node) + "." + std::to_string(e.port);
}

// backtracking subgraph matcher for patterns with at least one node
class Matcher {
 public:
  Matcher(const PortGraph& g, const PortGraph& p, const std::vector<char>* blocked) : g_(g), p_(p), blocked_(blocked) {
    img_.assign(p.nodes.size(), -1);
    used_.assign(g.nodes.size(), 0);
  }

  // fixed[i] >= 0 forces pattern node i; start chooses the root of the search order
  void run(int start, const std::vector<int>& fixed, bool first_only) {
    fixed_ = fixed;
    first_only_ = first_only;
    build_order(start);
    Binding b;
    search(0, b);
  }

  std::vector<std::pair<Site, Binding>> found;

 private:
  struct Link {
    int q = -1;        // already placed pattern node
    bool from_q = true;  // q.out[qport] -> this.in[port], else this.out[port] -> q.in[qport]
    int qport = 0, port = 0;
  };

  const PortGraph& g_;
  const PortGraph& p_;
  const std::vector<char>* blocked_;
  std::vector<int> img_, fixed_;
  std::vector<char> used_;
  std::vector<int> order_;
  std::vector<Link> link_;
  bool first_only_ = false;

  void build_order(int start) {
    int n = (int)p_.nodes.size();
    std::vector<char> seen(n, 0);
    std::vector<int> roots{start};
    for (int i = 0; i < n; ++i) roots.push_back(i);
    for (int r : roots) {
      if (seen[r]) continue;
      seen[r] = 1;
      order_.push_back(r);
      link_.push_back({});
      std::deque<int> q{r};
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        auto& nv = p_.node(v);
        for (int j = 0; j < (int)nv.out.size(); ++j) {
          Endpoint d = nv.out[j];
          if (d.node >= 0 && !seen[d.node]) {
            seen[d.node] = 1;
            order_.push_back(d.node);
            link_.push_back({v, true, j, d.port});
            q.push_back(d.node);
          }
        }
        for (int i = 0; i < (int)nv.in.size(); ++i) {
          Endpoint o = nv.in[i];
          if (o.node >= 0 && !seen[o.node]) {
            seen[o.node] = 1;
            order_.push_back(o.node);
            link_.push_back({v, false, i, o.port});
            q.push_back(o.node);
          }
        }
      }
    }
  }

  bool compatible(int pn, int gn, Binding& b) const {
    if (!g_.alive(gn) || used_[gn]) return false;
    if (blocked_ && gn < (int)blocked_->size() && (*blocked_)[gn]) return false;
    auto& pg = p_.node(pn).gen;
    auto& gg = g_.node(gn).gen;
    if (pg.kind != gg.kind) return false;
    for (size_t i = 0; i < arity(pg.kind); ++i)
      if (!bind(b, pg.c[i], gg.c[i])) return false;
    // edges to already placed nodes
    auto& pv = p_.node(pn);
    auto& gv = g_.node(gn);
    for (int i = 0; i < (int)pv.in.size(); ++i) {
      Endpoint o = pv.in[i];
      if (o.node >= 0 && img_[o.node] >= 0 && !(gv.in[i] == Endpoint{img_[o.node], o.port})) return false;
    }
    for (int j = 0; j < (int)pv.out.size(); ++j) {
      Endpoint d = pv.out[j];
      if (d.node >= 0 && img_[d.node] >= 0 && !(gv.out[j] == Endpoint{img_[d.node], d.port})) return false;
    }
    return true;
  }

  bool boundary_ok() const {
    auto in_image = [&](Endpoint e) { return e.node >= 0 && used_[e.node]; };
    for (auto& d : p_.src)
      if (d.node >= 0 && in_image(g_.node(img_[d.node]).in[d.port])) return false;
    for (auto& o : p_.tgt)
      if (o.node >= 0 && in_image(g_.node(img_[o.node]).out[o.port])) return false;
    // convexity: nothing outside the image leads from an output back into the image
    std::vector<char> seen(g_.nodes.size(), 0);
    std::deque<int> q;
    for (auto& o : p_.tgt) {
      Endpoint d = g_.node(img_[o.node]).out[o.port];
      if (d.node >= 0 && !seen[d.node]) seen[d.node] = 1, q.push_back(d.node);
    }
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      if (used_[v]) return false;
      for (auto& d : g_.node(v).out)
        if (d.node >= 0 && !seen[d.node]) seen[d.node] = 1, q.push_back(d.node);
    }
    return true;
  }

  bool search(size_t k, const Binding& b) {
    if (k == order_.size()) {
      if (!boundary_ok()) return false;
      Site s;
      s.nodes.assign(img_.begin(), img_.end());
      found.push_back({s, b});
      return first_only_;
    }
    int pn = order_[k];
    std::vector<int> cands;
    if (fixed_.size() > (size_t)pn && fixed_[pn] >= 0) {
      cands.push_back(fixed_[pn]);
    } else if (link_[k].q >= 0) {
      auto& L = link_[k];
      int gq = img_[L.q];
      Endpoint e = L.from_q ? g_.node(gq).out[L.qport] : g_.node(gq).in[L.qport];
      if (e.node >= 0 && e.port == L.port) cands.push_back(e.node);
    } else {
      for (int id : g_.node_ids())
        if (g_.node(id).gen.kind == p_.node(pn).gen.kind) cands.push_back(id);
    }
    for (int gn : cands) {
      Binding nb = b;
      if (!compatible(pn, gn, nb)) continue;
      img_[pn] = gn;
      used_[gn] = 1;
      bool stop = search(k + 1, nb);
      used_[gn] = 0;
      img_[pn] = -1;
      if (stop) return true;
    }
    return false;
  }
};

const PortGraph& side(const Rule& r, Dir d, bool lhs) { return (d == Dir::LR) == lhs ? r.lhs : r.rhs; }

std::vector<Endpoint> all_wires(const PortGraph& g) {
  std::vector<Endpoint> w;
  for (int i = 0; i < (int)g.src.size(); ++i) w.push_back({kSource, i});
  for (int id : g.node_ids())
    for (int j = 0; j < (int)g.node(id).out.size(); ++j) w.push_back({id, j});
  return w;
}

bool wire_ok(const PortGraph& g, Endpoint o, const std::vector<char>* blocked) {
  if (o.node >= 0 && (!g.alive(o.node) || o.port < 0 || o.port >= (int)g.node(o.node).out.size())) return false;
  if (o.node == kSource && (o.port < 0 || o.port >= (int)g.src.size())) return false;
  if (o.node != kSource && o.node < 0) return false;
  if (!blocked) return true;
  auto bl = [&](int n) { return n >= 0 && n < (int)blocked->size() && (*blocked)[n]; };
  return !bl(o.node) && !bl(g.dest_of(o).node);
}

// identity-strand patterns: the site lists one wire per pattern source strand
bool wires_match(const PortGraph& g, const PortGraph& pat, const Site& s, const std::vector<char>* blocked, Binding& b) {
  if (!s.nodes.empty() || s.wires.size() != pat.src.size()) return false;
  for (size_t i = 0; i < s.wires.size(); ++i) {
    if (!wire_ok(g, s.wires[i], blocked)) return false;
    for (size_t j = 0; j < i; ++j)
      if (s.wires[j] == s.wires[i]) return false;
    if (!bind_seg(b, pat.source[i], g.wire_type(s.wires[i]))) return false;
  }
  return true;
}

void enumerate_wires(const PortGraph& g, const PortGraph& pat, const std::vector<char>* blocked, Site& cur,
                     std::vector<Site>& out) {
  if (cur.wires.size() == pat.src.size()) {
    Binding b;
    if (wires_match(g, pat, cur, blocked, b)) out.push_back(cur);
    return;
  }
  for (auto w : all_wires(g)) {
    cur.wires.push_back(w);
    Binding b;
    Site probe{{}, cur.wires};
    bool ok = true;
    for (size_t i = 0; i < probe.wires.size() && ok; ++i) {
      ok = wire_ok(g, probe.wires[i], blocked) && bind_seg(b, pat.source[i], g.wire_type(probe.wires[i]));
      for (size_t j = 0; j < i && ok; ++j) ok = !(probe.wires[j] == probe.wires[i]);
    }
    if (ok) enumerate_wires(g, pat, blocked, cur, out);
    cur.wires.pop_back();
  }
}

bool locate(const PortGraph& g, const PortGraph& pat, const Site& s, Binding& b) {
  if (pat.node_count() == 0) return wires_match(g, pat, s, nullptr, b);
  if (s.nodes.size() != pat.nodes.size() || !s.wires.empty()) return false;
  for (int n : s.nodes)
    if (!g.alive(n)) return false;
  Matcher m(g, pat, nullptr);
  m.run(0, s.nodes, true);
  if (m.found.empty()) return false;
  b = m.found[0].second;
  return true;
}

}  // namespace

std::string Site::anchor() const {
  std::string r;
  if (!nodes.empty()) {
    for (size_t i = 0; i < nodes.size(); ++i) r += (i ? "," : "") + std::to_string(nodes[i]);
    return r;
  }
  for (size_t i = 0; i < wires.size(); ++i) r += (i ? ",@" : "@") + ep_str(wires[i]);
  return r;
}

Site Site::parse(const std::string& text) {
  Site s;
  std::stringstream ss(text);
  std::string tok;
  try {
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) throw TraceFormatError("empty site component");
      if (tok[0] == '@') {
        std::string w = tok.substr(1);
        size_t used = 0;
        if (!w.empty() && w[0] == 's') {
          int p = std::stoi(w.substr(1), &used);
          if (used + 1 != w.size()) throw TraceFormatError("bad wire '" + tok + "'");
          s.wires.push_back({kSource, p});
        } else {
          auto dot = w.find('.');
          if (dot == std::string::npos) throw TraceFormatError("bad wire '" + tok + "'");
          s.wires.push_back({std::stoi(w.substr(0, dot)), std::stoi(w.substr(dot + 1))});
        }
      } else {
        size_t used = 0;
        int n = std::stoi(tok, &used);
        if (used != tok.size()) throw TraceFormatError("bad node '" + tok + "'");
        s.nodes.push_back(n);
      }
    }
  } catch (const std::logic_error&) {
    throw TraceFormatError("bad site '" + text + "'");
  }
  if (!s.nodes.empty() && !s.wires.empty()) throw TraceFormatError("site mixes nodes and wires");
  return s;
}

std::vector<Site> match_rule(const PortGraph& g, const Rule& r, Dir dir, const std::vector<char>* blocked) {
  const PortGraph& pat = side(r, dir, true);
  std::vector<Site> out;
  if (pat.node_count() == 0) {
    Site cur;
    enumerate_wires(g, pat, blocked, cur, out);
  } else {
    Matcher m(g, pat, blocked);
    m.run(0, {}, false);
    for (auto& f : m.found) out.push_back(f.first);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Site> sites_containing(const PortGraph& g, const Rule& r, Dir dir, const std::vector<int>& must,
                                   const std::vector<char>* blocked) {
  const PortGraph& pat = side(r, dir, true);
  if (must.empty() || pat.node_count() == 0) return match_rule(g, r, dir, blocked);
  std::vector<Site> out;
  int m0 = must[0];
  if (!g.alive(m0)) return out;
  for (int pn : pat.node_ids()) {
    if (pat.node(pn).gen.kind != g.node(m0).gen.kind) continue;
    Matcher m(g, pat, blocked);
    std::vector<int> fixed(pat.nodes.size(), -1);
    fixed[pn] = m0;
    m.run(pn, fixed, false);
    for (auto& f : m.found) {
      bool all = true;
      for (int x : must) all = all && std::find(f.first.nodes.begin(), f.first.nodes.end(), x) != f.first.nodes.end();
      if (all) out.push_back(f.first);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool site_matches(const PortGraph& g, const Rule& r, Dir dir, const Site& s) {
  Binding b;
  return locate(g, side(r, dir, true), s, b);
}

std::vector<int> apply_in_place(PortGraph& g, const Rule& r, Dir dir, const Site& s) {
  const PortGraph& L = side(r, dir, true);
  const PortGraph& R = side(r, dir, false);
  Binding b;
  if (!locate(g, L, s, b)) throw StaleSite("rule " + r.id + " " + dir_str(dir) + " does not match at " + s.anchor());
  // external endpoints of the occurrence
  std::vector<Endpoint> O(L.src.size()), D(L.tgt.size());
  if (L.node_count() == 0) {
    for (size_t i = 0; i < L.src.size(); ++i) {
      O[i] = s.wires[i];
      D[L.src[i].port] = g.dest_of(s.wires[i]);
    }
  } else {
    for (size_t i = 0; i < L.src.size(); ++i) O[i] = g.node(s.nodes[L.src[i].node]).in[L.src[i].port];
    for (size_t j = 0; j < L.tgt.size(); ++j) D[j] = g.node(s.nodes[L.tgt[j].node]).out[L.tgt[j].port];
    for (int n : s.nodes) g.erase(n);
  }
  auto col = [&](const Color& c) {
    auto it = b.find(c);
    return it == b.end() ? c : it->second;
  };
  std::vector<int> made(R.nodes.size(), -1);
  for (int pn : R.node_ids()) {
    Generator gen = R.node(pn).gen;
    for (size_t i = 0; i < arity(gen.kind); ++i) gen.c[i] = col(gen.c[i]);
    made[pn] = g.add_node(gen);
  }
  auto map_o = [&](Endpoint o) { return o.node == kSource ? O[o.port] : Endpoint{made[o.node], o.port}; };
  for (int pn : R.node_ids()) {
    auto& nv = R.node(pn);
    for (int i = 0; i < (int)nv.in.size(); ++i) g.connect(map_o(nv.in[i]), {made[pn], i});
  }
  for (size_t j = 0; j < R.tgt.size(); ++j) g.connect(map_o(R.tgt[j]), D[j]);
  std::vector<int> out;
  for (int x : made)
    if (x >= 0) out.push_back(x);
  return out;
}

PortGraph apply(const PortGraph& g, const Move& m, const RuleCatalog& cat) {
  PortGraph h = g;
  apply_in_place(h, cat.get(m.rule), m.dir, m.site);
  return h;
}

PortGraph replay(const MoveTrace& tr, const RuleCatalog& cat) {
  PortGraph g = to_port_graph(tr.initial);
  for (auto& m : tr.moves) apply_in_place(g, cat.get(m.rule), m.dir, m.site);
  return g;
}

bool check_trace(const MoveTrace& tr, const RuleCatalog& cat) {
  try {
    PortGraph g = replay(tr, cat);
    check_port_graph(g);
    return g.source == tr.final_term.source && g.target == tr.final_term.target &&
           isomorphic(g, to_port_graph(tr.final_term));
  } catch (const std::exception&) {
    return false;
  }
}

std::string write_trace(const MoveTrace& tr) {
  std::ostringstream os;
  os << "# move trace: <step> <rule-id> <dir> <site-anchor>\n";
  os << "begin initial\n" << print(tr.initial) << "end initial\n";
  os << "begin final\n" << print(tr.final_term) << "end final\n";
  for (auto& m : tr.moves) os << m.step << " " << m.rule << " " << dir_str(m.dir) << " " << m.site.anchor() << "\n";
  return os.str();
}

MoveTrace read_trace(const std::string& text) {
  MoveTrace tr;
  std::istringstream in(text);
  std::string line;
  int have = 0;
  size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("begin ", 0) == 0) {
      std::string what = line.substr(6), body, l;
      bool closed = false;
      while (std::getline(in, l)) {
        ++ln;
        if (l == "end " + what) {
          closed = true;
          break;
        }
        body += l + "\n";
      }
      if (!closed) throw TraceFormatError("unterminated block '" + what + "'");
      try {
        if (what == "initial")
          tr.initial = parse(body), have |= 1;
        else if (what == "final")
          tr.final_term = parse(body), have |= 2;
        else
          throw TraceFormatError("unknown block '" + what + "'");
      } catch (const ParseError& e) {
        throw TraceFormatError("block " + what + ": " + e.what());
      }
      continue;
    }
    std::istringstream ls(line);
    Move m;
    std::string d, site, extra;
    if (!(ls >> m.step >> m.rule >> d >> site) || (ls >> extra))
      throw TraceFormatError("line " + std::to_string(ln) + ": expected <step> <rule-id> <dir> <site-anchor>");
    if (d == "L->R")
      m.dir = Dir::LR;
    else if (d == "R->L")
      m.dir = Dir::RL;
    else
      throw TraceFormatError("line " + std::to_string(ln) + ": bad direction '" + d + "'");
    m.site = Site::parse(site);
    tr.moves.push_back(m);
  }
  if (have != 3) throw TraceFormatError("trace needs initial and final blocks");
  return tr;
}

}  // namespace ocfa
