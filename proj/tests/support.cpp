#include "support.hpp"

#include "ocfa/dsl.hpp"
#include "ocfa/invariants.hpp"

namespace ocfa::testing {

DiagramTerm permutation_term(const BoundaryObject& obj, const Perm& p) {
  PortGraph g;
  g.source = g.target = obj;
  g.src.resize(obj.size());
  g.tgt.resize(obj.size());
  for (size_t i = 0; i < obj.size(); ++i) {
    if (!(obj[i] == obj[p[i] - 1])) throw std::invalid_argument("permutation does not preserve segment types");
    g.connect({kSource, (int)i}, {kTarget, p[i] - 1});
  }
  return from_port_graph(g);
}

std::vector<Move> mutate(PortGraph& g, std::mt19937& rng, int count, const RuleCatalog& cat) {
  std::vector<Move> done;
  auto pick = [&](size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); };
  for (int tries = 0; (int)done.size() < count && tries < 200 * count; ++tries) {
    const Rule& r = cat.rules[pick(cat.rules.size())];
    Dir d = pick(2) ? Dir::LR : Dir::RL;
    auto sites = match_rule(g, r, d);
    if (sites.empty()) continue;
    Site s = sites[pick(sites.size())];
    apply_in_place(g, r, d, s);
    done.push_back({"mutate", r.id, d, s});
  }
  return done;
}

namespace {

std::vector<Endpoint> wires(const PortGraph& g) {
  std::vector<Endpoint> w;
  for (int i = 0; i < (int)g.source.size(); ++i) w.push_back({kSource, i});
  for (int n : g.node_ids())
    for (int j = 0; j < (int)g.node(n).out.size(); ++j) w.push_back({n, j});
  return w;
}

// put a one-in one-out graph piece (entry, exit) on wire o
void splice(PortGraph& g, Endpoint o, Endpoint entry, Endpoint exit) {
  Endpoint d = g.dest_of(o);
  g.connect(o, entry);
  g.connect(exit, d);
}

}  // namespace

bool perturb(PortGraph& g, Perturbation kind, std::mt19937& rng) {
  auto all = wires(g);
  std::shuffle(all.begin(), all.end(), rng);
  auto colors = colors_of(from_port_graph(g));
  if (colors.empty()) colors = {kNoColor};
  Color c = colors[std::uniform_int_distribution<size_t>(0, colors.size() - 1)(rng)];
  switch (kind) {
    case Perturbation::Genus:
      for (auto o : all)
        if (g.wire_type(o).is_circle()) {
          int d = g.add_node(Generator::closed(Gen::ComultC)), m = g.add_node(Generator::closed(Gen::MultC));
          splice(g, o, {d, 0}, {m, 0});
          g.connect({d, 0}, {m, 0});
          g.connect({d, 1}, {m, 1});
          return true;
        }
      return false;
    case Perturbation::Window:
      for (auto o : all) {
        Segment s = g.wire_type(o);
        if (s.is_interval()) {
          int d = g.add_node(Generator::comult_a(s.plus, c, s.minus)), m = g.add_node(Generator::mult_a(s.plus, c, s.minus));
          splice(g, o, {d, 0}, {m, 0});
          g.connect({d, 0}, {m, 0});
          g.connect({d, 1}, {m, 1});
        } else {
          int m = g.add_node(Generator::closed(Gen::MultC)), e = g.add_node(Generator::closed(Gen::EtaC));
          int z = g.add_node(Generator::zip(c)), y = g.add_node(Generator::cozip(c));
          splice(g, o, {m, 0}, {m, 0});
          g.connect({e, 0}, {z, 0});
          g.connect({z, 0}, {y, 0});
          g.connect({y, 0}, {m, 1});
        }
        return true;
      }
      return false;
    case Perturbation::Permutation: {
      // swap two target intervals of equal type unless the swap commutes with sigma
      auto prof = invariant_profile(g);
      int ns = (int)g.source.count_intervals();
      std::map<int, int> sigma;
      for (auto& comp : prof.components)
        for (auto& cyc : comp.boundary_cycles)
          for (size_t k = 0; k < cyc.size(); ++k) sigma[cyc[k]] = cyc[(k + 1) % cyc.size()];
      std::vector<int> tpos, tidx;
      for (int j = 0, k = 0; j < (int)g.target.size(); ++j)
        if (g.target[j].is_interval()) tpos.push_back(j), tidx.push_back(ns + 1 + k++);
      std::vector<std::pair<int, int>> cand;
      for (size_t x = 0; x < tpos.size(); ++x)
        for (size_t y = x + 1; y < tpos.size(); ++y) {
          if (!(g.target[tpos[x]] == g.target[tpos[y]])) continue;
          int a = tidx[x], b = tidx[y];
          bool fixed = sigma[a] == a && sigma[b] == b;
          bool swap = sigma[a] == b && sigma[b] == a;
          if (!fixed && !swap) cand.push_back({tpos[x], tpos[y]});
        }
      if (cand.empty()) return false;
      auto [p, q] = cand[std::uniform_int_distribution<size_t>(0, cand.size() - 1)(rng)];
      Endpoint op = g.tgt[p], oq = g.tgt[q];
      g.connect(op, {kTarget, q});
      g.connect(oq, {kTarget, p});
      return true;
    }
  }
  return false;
}

}  // namespace ocfa::testing
