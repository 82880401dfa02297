#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "ocfa/dsl.hpp"
#include "ocfa/invariants.hpp"
#include "ocfa/normal_form.hpp"
#include "ocfa/rewrite.hpp"

namespace ocfa {

// Normalisation as a sequence of catalogued moves.
//
//  wrap      snake on every source circle and target interval; the outer halves are
//            frozen and coincide with the unwrapping, the inner part is open-to-closed
//  caps      open counits become cozip + closed counit
//  zips      every zipper not feeding a cozipper is rerouted through a cozipper, so no
//            open wire depends on the closed part
//  comult    open comultiplications are removed lowest first: the trees under its two legs
//            are rotated and reassociated, Frobenius pushes it down to a cozipper
//            (cozipsplit) or, when both legs close the same cycle, the twisted handle
//            becomes cozip+zip (cardy). Zippers created on the way are absorbed (zipmodule).
//  units     leftover open units
//  blocks    each open tree is rotated and combed into its normal-form block
//  split     closed comultiplications become copairings
//  slide     closed trees are merged into the main tree by sliding across copairings
//  assemble  comb the main tree, lower the windows, rebuild handles and the output comb
//
// Each comult round removes one open comultiplication and no later step creates one.

namespace {

struct Plan {
  std::vector<int> src, tgt;  // indices into the region boundary lists
  std::vector<int> nodes;
  NormalFormBlocks b;
};

class Strategy {
 public:
  explicit Strategy(const DiagramTerm& t) : cat_(default_catalog()), t_(t) {
    tr_.initial = t;
    g_ = to_port_graph(t);
    frozen_.assign(g_.nodes.size(), 0);
  }

  std::pair<DiagramTerm, MoveTrace> run() {
    wrap();
    caps_and_zips();
    eliminate_comults();
    open_units();
    for (auto& p : plans()) build_blocks(p);
    closed_split();
    closed_cleanup();
    for (auto& p : plans()) {
      Endpoint sink0 = main_sink(p);
      merge(sink0);
      assemble(p, sink0);
    }
    PortGraph want = normal_form_graph(to_port_graph(t_));
    check_port_graph(g_);
    if (!isomorphic(g_, want)) stuck("result differs from the normal form");
    DiagramTerm out = from_port_graph(g_);
    tr_.final_term = out;
    return {out, tr_};
  }

 private:
  const RuleCatalog& cat_;
  DiagramTerm t_;
  PortGraph g_;
  MoveTrace tr_;
  std::vector<char> frozen_;
  std::string step_;
  std::vector<Endpoint> rsrc_, rtgt_;  // region boundary: origins and destinations

  [[noreturn]] void stuck(const std::string& why) const {
    throw StrategyStuck("normalisation stuck in step " + step_ + ": " + why, print(t_));
  }

  bool is(int n, Gen k) const { return n >= 0 && g_.alive(n) && !frozen_[n] && g_.node(n).gen.kind == k; }
  Endpoint dest(Endpoint o) const { return g_.dest_of(o); }
  Endpoint origin(Endpoint d) const { return g_.origin_of(d); }
  Gen kind(int n) const { return g_.node(n).gen.kind; }

  std::vector<int> mv(const char* rule, Dir d, const std::vector<int>& must) {
    const Rule& r = cat_.get(rule);
    auto sites = sites_containing(g_, r, d, must, &frozen_);
    if (sites.empty()) {
      std::string at;
      for (int n : must) at += " " + std::to_string(n);
      stuck(std::string("no site for ") + rule + " " + dir_str(d) + " at" + at);
    }
    return commit(r, d, sites.front());
  }

  std::vector<int> mv_wire(const char* rule, Dir d, Endpoint w) {
    const Rule& r = cat_.get(rule);
    Site s{{}, {w}};
    if (!site_matches(g_, r, d, s)) stuck(std::string("no wire site for ") + rule);
    return commit(r, d, s);
  }

  std::vector<int> commit(const Rule& r, Dir d, const Site& s) {
    auto made = apply_in_place(g_, r, d, s);
    frozen_.resize(g_.nodes.size(), 0);
    tr_.moves.push_back({step_, r.id, d, s});
    return made;
  }

  int made_of(const std::vector<int>& made, Gen k, int nth = 0) const {
    for (int n : made)
      if (kind(n) == k && nth-- == 0) return n;
    stuck("rewrite did not produce the expected generator");
  }

  // ---------------------------------------------------------------- wrap
  void wrap() {
    step_ = "wrap";
    WrapData w = wrap_data(g_.source, g_.target);
    std::vector<int> cap(w.n0.size()), cup(w.m1.size());
    for (size_t k = 0; k < w.n0.size(); ++k) {
      auto made = mv_wire("zigzag_c", Dir::RL, {kSource, w.n0[k]});
      cap[k] = made_of(made, Gen::MultC);
      frozen_[cap[k]] = frozen_[made_of(made, Gen::EpsC)] = 1;
    }
    for (size_t k = 0; k < w.m1.size(); ++k) {
      auto made = mv_wire("zigzag_l", Dir::RL, g_.tgt[w.m1[k]]);
      cup[k] = made_of(made, Gen::ComultA);
      frozen_[cup[k]] = frozen_[made_of(made, Gen::EtaA)] = 1;
    }
    for (int d : cup) rsrc_.push_back({d, 0});
    for (int i : w.n1) rsrc_.push_back({kSource, i});
    for (int j : w.m0) rtgt_.push_back({kTarget, j});
    for (int c : cap) rtgt_.push_back({c, 1});
  }

  std::vector<int> live(Gen k) const {
    std::vector<int> r;
    for (int n : g_.node_ids())
      if (is(n, k)) r.push_back(n);
    return r;
  }

  bool is_window_zip(int z) const { return is(z, Gen::Zipper) && is(dest({z, 0}).node, Gen::Cozipper); }

  void caps_and_zips() {
    step_ = "caps";
    for (int e : live(Gen::EpsA)) mv("counithomo_unit", Dir::RL, {e});
    step_ = "zips";
    for (int z : live(Gen::Zipper))
      if (!is_window_zip(z)) mv("zipviacozip", Dir::LR, {z});
  }

  // ---------------------------------------------------------------- open trees
  // cozipper at the bottom of the open multiplication tree below an open wire
  int a_root(Endpoint o) const {
    Endpoint e = dest(o);
    while (is(e.node, Gen::MultA)) e = dest({e.node, 0});
    return is(e.node, Gen::Cozipper) ? e.node : -1;
  }

  void a_leaves(Endpoint o, std::vector<Endpoint>& out) const {
    if (is(o.node, Gen::MultA)) {
      a_leaves(origin({o.node, 0}), out);
      a_leaves(origin({o.node, 1}), out);
    } else {
      out.push_back(o);
    }
  }

  bool a_contains(Endpoint o, Endpoint leaf) const {
    if (o == leaf) return true;
    return is(o.node, Gen::MultA) && (a_contains(origin({o.node, 0}), leaf) || a_contains(origin({o.node, 1}), leaf));
  }

  // make `leaf` the right input of the root multiplication; returns the (possibly new) cozipper
  int bring_last(int Z, Endpoint leaf) {
    for (int guard = 0;; ++guard) {
      if (guard > 10000) stuck("bring_last does not terminate");
      Endpoint r = origin({Z, 0});
      if (r == leaf) return Z;
      if (!is(r.node, Gen::MultA)) stuck("leaf not under cozipper");
      int M = r.node;
      if (origin({M, 1}) == leaf) return Z;
      if (a_contains(origin({M, 0}), leaf)) {
        Z = made_of(mv("zipcross_m", Dir::LR, {M, Z}), Gen::Cozipper);
        continue;
      }
      int N = origin({M, 1}).node;
      if (!is(N, Gen::MultA)) stuck("malformed open tree");
      mv("assoc_a", Dir::RL, {N, M});
    }
  }

  int bring_first(int Z, Endpoint leaf) {
    for (int guard = 0;; ++guard) {
      if (guard > 10000) stuck("bring_first does not terminate");
      Endpoint r = origin({Z, 0});
      if (r == leaf) return Z;
      if (!is(r.node, Gen::MultA)) stuck("leaf not under cozipper");
      int M = r.node;
      if (origin({M, 0}) == leaf) return Z;
      if (a_contains(origin({M, 1}), leaf)) {
        Z = made_of(mv("zipcross_m", Dir::LR, {M, Z}), Gen::Cozipper);
        continue;
      }
      int N = origin({M, 0}).node;
      if (!is(N, Gen::MultA)) stuck("malformed open tree");
      mv("assoc_a", Dir::LR, {N, M});
    }
  }

  // reassociate the tree above Z into a left comb, keeping the leaf sequence
  void left_comb_a(int Z) {
    int cur = origin({Z, 0}).node;
    while (is(cur, Gen::MultA)) {
      while (is(origin({cur, 1}).node, Gen::MultA)) {
        auto made = mv("assoc_a", Dir::RL, {origin({cur, 1}).node, cur});
        cur = made[1];
      }
      cur = origin({cur, 0}).node;
    }
  }

  void zip_cleanup(int z) {
    if (is_window_zip(z)) return;
    int Z = a_root({z, 0});
    if (Z < 0) stuck("zipper not under a cozipper");
    Z = bring_first(Z, {z, 0});
    mv("zipmodule", Dir::LR, {z, origin({Z, 0}).node, Z});
  }

  // ---------------------------------------------------------------- comult
  void eliminate_comults() {
    step_ = "comult";
    while (true) {
      auto ds = live(Gen::ComultA);
      if (ds.empty()) return;
      int pick = -1;
      for (int D : ds) {
        auto down = downstream(g_, D);
        bool lowest = true;
        for (int E : ds) lowest = lowest && !(E < (int)down.size() && down[E]);
        if (lowest) {
          pick = D;
          break;
        }
      }
      if (pick < 0) stuck("no lowest open comultiplication");
      eliminate(pick);
      if (live(Gen::ComultA).size() >= ds.size()) stuck("open comultiplication count did not drop");
    }
  }

  void eliminate(int D) {
    Endpoint d0 = dest({D, 0}), d1 = dest({D, 1});
    if (is(d0.node, Gen::Cozipper)) {
      zip_cleanup(made_of(mv("cozipsplit_l", Dir::LR, {D, d0.node}), Gen::Zipper));
      return;
    }
    if (is(d1.node, Gen::Cozipper)) {
      zip_cleanup(made_of(mv("cozipsplit_r", Dir::LR, {D, d1.node}), Gen::Zipper));
      return;
    }
    int Z0 = a_root({D, 0}), Z1 = a_root({D, 1});
    if (Z0 < 0 || Z1 < 0) stuck("open comultiplication leg does not reach a cozipper");
    if (Z0 != Z1) {
      Z0 = bring_last(Z0, {D, 0});
      int M = origin({Z0, 0}).node;
      int D2 = made_of(mv("frob2_a", Dir::LR, {D, M}), Gen::ComultA);
      int Z = dest({D2, 0}).node;
      zip_cleanup(made_of(mv("cozipsplit_l", Dir::LR, {D2, Z}), Gen::Zipper));
      return;
    }
    // both legs in one cycle: absorb what lies between the right leg and the left leg, then cardy
    int Z = Z0;
    std::vector<Endpoint> lv;
    a_leaves(origin({Z, 0}), lv);
    int n = (int)lv.size();
    int at = (int)(std::find(lv.begin(), lv.end(), Endpoint{D, 1}) - lv.begin());
    Endpoint pred = lv[(at + n - 1) % n];
    Z = bring_last(Z, pred);
    left_comb_a(Z);
    for (int guard = 0;; ++guard) {
      if (guard > 10000) stuck("absorption does not terminate");
      int M = dest({D, 1}).node;
      if (!is(M, Gen::MultA) || dest({D, 1}).port != 0) stuck("right leg is not at the comb start");
      if (origin({M, 1}) == Endpoint{D, 0}) {
        zip_cleanup(made_of(mv("cardy", Dir::RL, {D, M}), Gen::Zipper));
        return;
      }
      D = made_of(mv("frob1_a", Dir::LR, {D, M}), Gen::ComultA);
    }
  }

  void open_units() {
    step_ = "units";
    bool again = true;
    while (again) {
      again = false;
      for (int e : live(Gen::EtaA)) {
        Endpoint d = dest({e, 0});
        if (is(d.node, Gen::MultA)) {
          mv(d.port == 0 ? "unitl_a" : "unitr_a", Dir::LR, {e, d.node});
          again = true;
        } else if (is(d.node, Gen::Cozipper)) {
          mv("ziphom_unit", Dir::RL, {e});
          again = true;
        } else {
          stuck("open unit in an unexpected position");
        }
      }
    }
    for (int z : live(Gen::Zipper))
      if (!is_window_zip(z)) stuck("zipper left inside an open tree");
  }

  // ---------------------------------------------------------------- components of the region
  std::vector<Plan> plans() const {
    std::vector<int> ids;
    for (int n : g_.node_ids())
      if (!frozen_[n]) ids.push_back(n);
    std::vector<int> parent(g_.nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (int n : ids)
      for (auto& d : g_.node(n).out)
        if (d.node >= 0 && !frozen_[d.node]) unite(n, d.node);
    std::map<int, Plan> by_root;
    for (int n : ids) by_root[find(n)].nodes.push_back(n);
    for (int k = 0; k < (int)rsrc_.size(); ++k) by_root.at(find(dest(rsrc_[k]).node)).src.push_back(k);
    for (int k = 0; k < (int)rtgt_.size(); ++k) by_root.at(find(origin(rtgt_[k]).node)).tgt.push_back(k);
    std::vector<Plan> out;
    for (auto& [root, p] : by_root) {
      // standalone copy of the component
      PortGraph r;
      std::map<int, int> id;
      for (int n : p.nodes) id[n] = r.add_node(g_.node(n).gen);
      for (int k : p.src) r.source.segments.push_back(g_.wire_type(rsrc_[k]));
      r.target.segments.assign(p.tgt.size(), Segment::circle());
      r.src.resize(p.src.size());
      r.tgt.resize(p.tgt.size());
      std::map<Endpoint, Endpoint> omap, dmap;
      for (int i = 0; i < (int)p.src.size(); ++i) omap[rsrc_[p.src[i]]] = {kSource, i};
      for (int j = 0; j < (int)p.tgt.size(); ++j) dmap[rtgt_[p.tgt[j]]] = {kTarget, j};
      auto mo = [&](Endpoint o) { return o.node >= 0 && !frozen_[o.node] ? Endpoint{id.at(o.node), o.port} : omap.at(o); };
      auto md = [&](Endpoint d) { return d.node >= 0 && !frozen_[d.node] ? Endpoint{id.at(d.node), d.port} : dmap.at(d); };
      for (int n : p.nodes)
        for (int j = 0; j < (int)g_.node(n).out.size(); ++j) r.connect(mo({n, j}), md(g_.node(n).out[j]));
      for (auto& [o, d] : omap) r.connect(d, md(dest(o)));
      auto comps = components(r);
      if (comps.size() != 1) stuck("region component splits");
      p.b = nf_blocks(component_profile(r, comps[0]), r.source, r.target);
      out.push_back(std::move(p));
    }
    return out;
  }

  // ---------------------------------------------------------------- blocks
  void build_blocks(const Plan& p) {
    step_ = "blocks";
    for (auto& leaves : p.b.leaves) {
      std::vector<Endpoint> want;
      for (int l : leaves) want.push_back(rsrc_[p.src[l - 1]]);
      int Z = a_root(want[0]);
      if (Z < 0) stuck("boundary interval does not reach a cozipper");
      if (want.size() > 1) {
        Z = bring_last(Z, want.back());
        left_comb_a(Z);
      }
      std::vector<Endpoint> got;
      a_leaves(origin({Z, 0}), got);
      if (got != want) stuck("open block does not match its boundary cycle");
    }
  }

  Endpoint block_output(const Plan& p, size_t bi) const {
    return {a_root(rsrc_[p.src[p.b.leaves[bi][0] - 1]]), 0};
  }

  // ---------------------------------------------------------------- closed part
  void closed_split() {
    step_ = "split";
    for (int d : live(Gen::ComultC))
      if (!is(origin({d, 0}).node, Gen::EtaC)) mv("comultviacopairing", Dir::LR, {d});
  }

  // window starting at a wire destination: returns zip id or -1
  int window_at(Endpoint d) const { return is_window_zip(d.node) ? d.node : -1; }

  void closed_cleanup() {
    std::string saved = step_;
    bool again = true;
    while (again) {
      again = false;
      for (int e : live(Gen::EtaC)) {
        Endpoint d = dest({e, 0});
        if (is(d.node, Gen::MultC)) {
          mv(d.port == 0 ? "unitl_c" : "unitr_c", Dir::LR, {e, d.node});
          again = true;
        }
      }
      for (int k : live(Gen::ComultC))
        for (int j = 0; j < 2 && g_.alive(k); ++j)
          if (is(dest({k, j}).node, Gen::EpsC)) {
            mv(j == 0 ? "counitl_c" : "counitr_c", Dir::LR, {k, dest({k, j}).node});
            again = true;
          }
      for (int z : live(Gen::Zipper)) {
        if (!is_window_zip(z)) continue;
        int c = dest({z, 0}).node;
        Endpoint d = dest({c, 0});
        if (is(d.node, Gen::MultC)) {
          mv(d.port == 0 ? "movewhole_ml" : "movewhole_mr", Dir::LR, {z, c, d.node});
          again = true;
        }
      }
    }
    step_ = saved;
  }

  // follow a closed wire through multiplications and windows to its sink
  Endpoint sink_of(Endpoint o, bool* trivial = nullptr, bool* windowed = nullptr) const {
    if (trivial) *trivial = true;
    if (windowed) *windowed = false;
    Endpoint d = dest(o);
    while (true) {
      if (is(d.node, Gen::MultC)) {
        if (trivial) *trivial = false;
        d = dest({d.node, 0});
      } else if (window_at(d) >= 0) {
        if (windowed) *windowed = true;
        d = dest({dest({d.node, 0}).node, 0});
      } else {
        return d;
      }
    }
  }

  // origin above the window chain that ends in sink
  Endpoint top_of(Endpoint sink) const {
    Endpoint o = origin(sink);
    while (is(o.node, Gen::Cozipper) && is(origin({o.node, 0}).node, Gen::Zipper)) o = origin({origin({o.node, 0}).node, 0});
    return o;
  }

  void c_leaves(Endpoint o, std::vector<Endpoint>& out) const {
    if (is(o.node, Gen::MultC)) {
      c_leaves(origin({o.node, 0}), out);
      c_leaves(origin({o.node, 1}), out);
    } else {
      out.push_back(o);
    }
  }

  bool c_contains(Endpoint o, Endpoint leaf) const {
    if (o == leaf) return true;
    return is(o.node, Gen::MultC) && (c_contains(origin({o.node, 0}), leaf) || c_contains(origin({o.node, 1}), leaf));
  }

  bool is_region_target(Endpoint d) const { return std::find(rtgt_.begin(), rtgt_.end(), d) != rtgt_.end(); }

  int bring_last_c(int cur, Endpoint leaf) {
    for (int guard = 0;; ++guard) {
      if (guard > 10000) stuck("bring_last_c does not terminate");
      if (origin({cur, 1}) == leaf) return cur;
      if (c_contains(origin({cur, 0}), leaf)) {
        cur = mv("comm_c", Dir::LR, {cur})[0];
        continue;
      }
      int N = origin({cur, 1}).node;
      if (!is(N, Gen::MultC)) stuck("leaf not in closed tree");
      if (c_contains(origin({N, 0}), leaf)) N = mv("comm_c", Dir::LR, {N})[0];
      cur = mv("assoc_c", Dir::RL, {N, cur})[1];
    }
  }

  Endpoint main_sink(const Plan& p) const {
    if (!p.tgt.empty()) return rtgt_[p.tgt[0]];
    if (p.b.r > 0) return sink_of(block_output(p, 0));
    for (int n : p.nodes)
      if (is(n, Gen::EpsC)) return {n, 0};
    stuck("closed component without a sink");
  }

  // copairing {K} with one leg `other` whose tree is not the main one
  void absorb(int K, Endpoint other, Endpoint sinkO, bool trivial) {
    if (!trivial) {
      int top = top_of(sinkO).node;
      top = bring_last_c(top, other);
      if (other.port == 1) {
        K = mv("cocomm_c", Dir::LR, {K})[0];
        other = {K, 0};
      }
      int eta = origin({K, 0}).node;
      K = made_of(mv("copairslide", Dir::LR, {eta, K, top}), Gen::ComultC);
      other = {K, 0};
    }
    // carry windows over to the main side
    while (window_at(dest(other)) >= 0) {
      if (other.port == 1) {
        K = mv("cocomm_c", Dir::LR, {K})[0];
        other = {K, 0};
      }
      int z = dest(other).node, c = dest({z, 0}).node;
      auto up = mv("movewhole_dl", Dir::RL, {K, z, c});
      auto down = mv("movewhole_dr", Dir::LR, {made_of(up, Gen::Zipper), made_of(up, Gen::Cozipper), made_of(up, Gen::ComultC)});
      K = made_of(down, Gen::ComultC);
      other = {K, 0};
    }
    Endpoint s = dest(other);
    if (is(s.node, Gen::EpsC)) mv(other.port == 0 ? "counitl_c" : "counitr_c", Dir::LR, {K, s.node});
  }

  void merge(Endpoint sink0) {
    step_ = "slide";
    for (int guard = 0;; ++guard) {
      if (guard > 100000) stuck("merge does not terminate");
      closed_cleanup();
      std::vector<Endpoint> lv;
      c_leaves(top_of(sink0), lv);
      bool acted = false;
      for (auto e : lv) {
        if (!is(e.node, Gen::ComultC)) continue;
        Endpoint other{e.node, 1 - e.port};
        bool trivial = true, windowed = false;
        Endpoint s = sink_of(other, &trivial, &windowed);
        if (s == sink0) continue;  // handle
        if (trivial && !windowed && is_region_target(s)) continue;
        absorb(e.node, other, s, trivial);
        acted = true;
        break;
      }
      if (!acted) return;
    }
  }

  void assemble(const Plan& p, Endpoint sink0) {
    step_ = "assemble";
    closed_cleanup();
    int r = p.b.r, m = (int)p.tgt.size();
    std::vector<Endpoint> lv;
    c_leaves(top_of(sink0), lv);
    std::vector<Endpoint> order;
    for (int bi = 0; bi < r; ++bi) order.push_back(block_output(p, bi));
    std::map<int, int> comb;  // target index -> copairing
    std::vector<int> handles;
    for (auto e : lv) {
      if (std::find(order.begin(), order.begin() + r, e) != order.begin() + r) continue;
      if (is(e.node, Gen::EtaC) && lv.size() == 1) continue;
      if (!is(e.node, Gen::ComultC)) stuck("unexpected leaf in the main closed tree");
      Endpoint other{e.node, 1 - e.port};
      Endpoint s = sink_of(other);
      if (s == sink0) {
        if (e.port == 0) handles.push_back(e.node);
        continue;
      }
      auto it = std::find(p.tgt.begin(), p.tgt.end(), (int)(std::find(rtgt_.begin(), rtgt_.end(), s) - rtgt_.begin()));
      if (it == p.tgt.end() || it == p.tgt.begin()) stuck("copairing leg ends outside the output comb");
      comb[(int)(it - p.tgt.begin())] = e.node;
    }
    if ((int)handles.size() != p.b.g) stuck("handle count differs from the genus");
    if ((int)comb.size() != std::max(m - 1, 0)) stuck("output comb incomplete");
    std::sort(handles.begin(), handles.end());
    std::vector<Endpoint> rest;
    for (int K : handles) rest.push_back({K, 0}), rest.push_back({K, 1});
    for (int j = m - 1; j >= 1; --j) {
      int K = comb.at(j);
      rest.push_back(sink_of({K, 0}) == rtgt_[p.tgt[j]] ? Endpoint{K, 1} : Endpoint{K, 0});
    }
    if (r == 0 && !rest.empty()) {
      auto made = mv_wire("unitl_c", Dir::RL, rest[0]);
      order.push_back({made_of(made, Gen::EtaC), 0});
    } else if (r == 0) {
      order.push_back(top_of(sink0));
    }
    int core = (int)order.size();
    order.insert(order.end(), rest.begin(), rest.end());
    int n = (int)order.size();
    std::vector<int> spine(n, -1);
    if (n >= 2) {
      int cur = top_of(sink0).node;
      for (int i = n - 1; i >= 1; --i) {
        cur = bring_last_c(cur, order[i]);
        spine[i] = cur;
        Endpoint below = origin({cur, 0});
        if (i >= 2) {
          cur = below.node;
          if (!is(cur, Gen::MultC)) stuck("main tree too small");
        } else if (!(below == order[0])) {
          stuck("main tree leaves out of order");
        }
      }
    }
    // lower the windows to sit right after the block product
    if (n > core) {
      int root = spine[n - 1];
      while (window_at(dest({root, 0})) >= 0) {
        int z = dest({root, 0}).node;
        for (int i = n - 1; i >= core; --i) {
          if (!(origin({z, 0}) == Endpoint{spine[i], 0})) break;
          int c = dest({z, 0}).node;
          auto made = mv("movewhole_ml", Dir::RL, {spine[i], z, c});
          spine[i] = made_of(made, Gen::MultC);
          z = made_of(made, Gen::Zipper);
        }
        root = spine[n - 1];
      }
    }
    sort_windows(core >= 2 ? Endpoint{spine[core - 1], 0} : order[0]);
    // handles and the output comb
    for (int i = core; i < n;) {
      Endpoint leaf = order[i];
      int K = leaf.node;
      bool handle = i + 1 < n && order[i + 1].node == K;
      if (leaf.port == 1) {
        K = mv("cocomm_c", Dir::LR, {K})[0];
        if (handle) order[i + 1] = {K, 1};
      }
      int eta = origin({K, 0}).node;
      mv("comultviacopairing", Dir::RL, {eta, K, spine[i]});
      i += handle ? 2 : 1;
    }
  }

  void sort_windows(Endpoint core) {
    while (true) {
      std::vector<std::pair<int, int>> ws;
      Endpoint o = core;
      while (window_at(dest(o)) >= 0) {
        int z = dest(o).node, c = dest({z, 0}).node;
        ws.push_back({z, c});
        o = {c, 0};
      }
      bool swapped = false;
      for (size_t i = 0; i + 1 < ws.size(); ++i) {
        if (g_.node(ws[i].first).gen.c[0] > g_.node(ws[i + 1].first).gen.c[0]) {
          mv("windowcommute", Dir::LR, {ws[i].first, ws[i].second, ws[i + 1].first, ws[i + 1].second});
          swapped = true;
          break;
        }
      }
      if (!swapped) return;
    }
  }
};

}  // namespace

std::pair<DiagramTerm, MoveTrace> normalize_with_trace(const DiagramTerm& t) {
  auto rep = validate(t);
  if (!rep.ok) throw MalformedGraph("ill-typed term: " + rep.message);
  return Strategy(t).run();
}

}  // namespace ocfa
