#include <catch_amalgamated.hpp>
#include <set>

#include "ocfa/algebra.hpp"
#include "ocfa/dsl.hpp"
#include "ocfa/invariants.hpp"
#include "ocfa/normal_form.hpp"
#include "ocfa/rewrite.hpp"
#include "random_diagram.hpp"
#include "support.hpp"

using namespace ocfa;

namespace {
const RuleCatalog& cat() { return default_catalog(); }

DiagramTerm plain(const DiagramTerm& t, const Rule& r) {
  std::map<Color, Color> b;
  for (auto& v : pattern_variables(r)) b[v] = kNoColor;
  return instantiate(t, b);
}

int count(const PortGraph& g, Gen k) {
  int n = 0;
  for (int id : g.node_ids()) n += g.node(id).gen.kind == k;
  return n;
}
}  // namespace

TEST_CASE("catalog loads with every group represented", "[rewrite][catalog]") {
  CHECK(cat().rules.size() >= 30);
  std::set<std::string> groups, ids;
  for (auto& r : cat().rules) {
    groups.insert(r.group);
    ids.insert(r.id);
    CHECK_FALSE(r.anchor.empty());
  }
  CHECK(groups == std::set<std::string>{"commFrobC", "symmFrobA", "zipHom", "knowledge", "cozipDual", "cardy", "derived"});
  for (auto id : {"assoc_a", "frob1_a", "cardy", "zigzag_l", "zigzag_c", "zipdual", "zipcenter", "ziphom_mult", "movewhole_ml",
                  "movelhole_l", "movechole_ml", "counithomo_comult", "whitecirc_z", "zipcross_m"})
    CHECK(ids.count(id));
  CHECK_THROWS_AS(cat().get("nope"), CatalogError);
}

TEST_CASE("catalog parser rejects malformed rules", "[rewrite][catalog]") {
  CHECK_THROWS_AS(parse_catalog("[x]\ngroup = derived\nanchor = t\nlhs = source I ; mu_A\n"), CatalogError);
  CHECK_THROWS_AS(parse_catalog("[x]\ngroup = bogus\nanchor = t\nlhs = source I\nrhs = source I\n"), CatalogError);
  CHECK_THROWS_AS(parse_catalog("[x]\ngroup = derived\nanchor = t\nlhs = source I,I ; mu_A\nrhs = source I,I\n"), CatalogError);
  auto ok = parse_catalog("# unit\n[u]\ngroup = symmFrobA\nanchor = left unit\nlhs = source I[a,b] ; eta_A[a] | id:I[a,b] ; mu_A[a,a,b]\nrhs = source I[a,b]\n");
  CHECK(ok.rules.size() == 1);
}

TEST_CASE("every rule is sound", "[rewrite][soundness]") {
  auto m2 = builtin_by_id("matrix2"), m3 = builtin_by_id("matrix3"), gz = builtin_by_id("groupoid_pair_z2");
  for (auto& r : cat().rules) {
    INFO(r.id);
    auto l = plain(r.lhs_term, r), rr = plain(r.rhs_term, r);
    CHECK(equivalent(l, rr));
    CHECK(evaluate(l, m2) == evaluate(rr, m2));
    CHECK(evaluate(l, m3) == evaluate(rr, m3));
    auto vars = pattern_variables(r);
    for (size_t mask = 0; mask < (1u << vars.size()); ++mask) {
      std::map<Color, Color> b;
      for (size_t i = 0; i < vars.size(); ++i) b[vars[i]] = (mask >> i & 1) ? "b" : "a";
      auto lc = instantiate(r.lhs_term, b), rc = instantiate(r.rhs_term, b);
      CHECK(equivalent(lc, rc));
      CHECK(evaluate(lc, gz) == evaluate(rc, gz));
    }
  }
}

TEST_CASE("matching", "[rewrite]") {
  auto& frob = cat().get("frob1_a");
  CHECK(match_rule(to_port_graph(plain(frob.lhs_term, frob)), frob, Dir::LR).size() == 1);
  auto unit = cat().get("unitl_a");
  CHECK(match_rule(to_port_graph(parse("source I")), unit, Dir::LR).empty());
  auto assoc = cat().get("assoc_a");
  CHECK(match_rule(to_port_graph(parse("source I,I,I ; mu_A | id:I ; mu_A")), assoc, Dir::LR).size() == 1);
  CHECK(match_rule(to_port_graph(parse("source I,I,I ; id:I | mu_A ; mu_A")), assoc, Dir::LR).empty());
  // colours must agree with the pattern's variables
  CHECK(match_rule(to_port_graph(parse("colors a,b\nsource I[a,b] ; Delta_A[a,b,b] ; mu_A[a,b,b]")), cat().get("zipmodule"), Dir::LR).empty());
}

TEST_CASE("applying moves", "[rewrite]") {
  auto g = to_port_graph(parse("source I ; eta_A | id:I ; mu_A"));
  auto& unit = cat().get("unitl_a");
  auto sites = match_rule(g, unit, Dir::LR);
  REQUIRE(sites.size() == 1);
  auto h = apply(g, {"x", "unitl_a", Dir::LR, sites[0]});
  CHECK(isomorphic(h, to_port_graph(parse("source I"))));

  auto c = to_port_graph(parse("source I ; cozip ; zip"));
  auto& cardy = cat().get("cardy");
  auto cs = match_rule(c, cardy, Dir::LR);
  REQUIRE(cs.size() == 1);
  auto d = apply(c, {"x", "cardy", Dir::LR, cs[0]});
  CHECK(isomorphic(d, to_port_graph(parse("source I ; Delta_A ; cross(I,I) ; mu_A"))));
  CHECK(equivalent(from_port_graph(d), from_port_graph(c)));

  CHECK_THROWS_AS(apply(d, {"x", "cardy", Dir::LR, cs[0]}), StaleSite);
}

TEST_CASE("random moves keep invariants and values", "[rewrite]") {
  std::mt19937 rng(41);
  auto m2 = builtin_by_id("matrix2");
  for (int k = 0; k < 60; ++k) {
    auto t = ocfa::testing::random_diagram(rng, {{kNoColor}, 10, 3, true});
    auto g = to_port_graph(t);
    ocfa::testing::mutate(g, rng, 3);
    auto u = from_port_graph(g);
    CHECK(equivalent(t, u));
    CHECK(evaluate(t, m2) == evaluate(u, m2));
  }
}

TEST_CASE("normalisation reaches the normal form with a valid trace", "[rewrite][strategy]") {
  std::mt19937 rng(43);
  ocfa::testing::RandomOptions o;
  o.colors = {"a", "b"};
  o.connected = false;
  for (int k = 0; k < 150; ++k) {
    auto t = ocfa::testing::random_diagram(rng, o);
    auto [nf, tr] = normalize_with_trace(t);
    CHECK(syntactic_eq(nf, normal_form(t)));
    CHECK(check_trace(tr));
    for (auto& m : tr.moves) CHECK(cat().find(m.rule));
  }
}

TEST_CASE("normal forms need no closed rework", "[rewrite][strategy]") {
  std::mt19937 rng(47);
  for (int k = 0; k < 40; ++k) {
    auto nf = normal_form(ocfa::testing::random_diagram(rng));
    auto [again, tr] = normalize_with_trace(nf);
    CHECK(syntactic_eq(again, nf));
    CHECK(check_trace(tr));
  }
}

TEST_CASE("both sides of each rule normalise identically", "[rewrite][strategy]") {
  for (auto& r : cat().rules) {
    INFO(r.id);
    auto a = normalize_with_trace(plain(r.lhs_term, r));
    auto b = normalize_with_trace(plain(r.rhs_term, r));
    CHECK(syntactic_eq(a.first, b.first));
    CHECK(a.second.moves.size() < 500);
  }
}

TEST_CASE("equivalent decompositions normalise to the same term", "[rewrite][strategy]") {
  std::mt19937 rng(53);
  for (int k = 0; k < 60; ++k) {
    auto t = ocfa::testing::random_diagram(rng, {{"a", "b"}, 12, 3, true});
    auto g = to_port_graph(t);
    ocfa::testing::mutate(g, rng, 4);
    CHECK(syntactic_eq(normalize_with_trace(t).first, normalize_with_trace(from_port_graph(g)).first));
  }
}

TEST_CASE("trace checking rejects forged and truncated traces", "[rewrite][trace]") {
  auto t = parse("source I,I,O ; mu_A | id:O ; Delta_A | Delta_C ; cozip | id:I | id:O | id:O");
  auto [nf, tr] = normalize_with_trace(t);
  REQUIRE(tr.moves.size() > 3);
  CHECK(check_trace(tr));

  auto cut = tr;
  cut.moves.pop_back();
  CHECK_FALSE(check_trace(cut));

  auto forged = tr;
  forged.moves[2].site.nodes[0] += 1000;
  CHECK_FALSE(check_trace(forged));

  auto wrong_rule = tr;
  wrong_rule.moves[1].rule = wrong_rule.moves[1].rule == "assoc_a" ? "comm_c" : "assoc_a";
  CHECK_FALSE(check_trace(wrong_rule));

  auto text = write_trace(tr);
  auto back = read_trace(text);
  CHECK(back.moves.size() == tr.moves.size());
  CHECK(check_trace(back));
  CHECK(write_trace(back) == text);
  CHECK_THROWS_AS(read_trace("garbage"), TraceFormatError);
}

TEST_CASE("strategy progress measure", "[rewrite][strategy]") {
  // replay each trace and watch the counters documented for the steps
  const std::vector<std::string> order = {"wrap", "caps", "zips", "comult", "units", "blocks", "split", "slide", "assemble"};
  auto phase = [&](const std::string& s) { return (int)(std::find(order.begin(), order.end(), s) - order.begin()); };
  std::mt19937 rng(59);
  ocfa::testing::RandomOptions o;
  o.colors = {"a", "b"};
  for (int k = 0; k < 80; ++k) {
    auto t = ocfa::testing::random_diagram(rng, o);
    auto [nf, tr] = normalize_with_trace(t);
    int m1 = (int)t.target.count_intervals();
    auto g = to_port_graph(t);
    auto open = [&] { return count(g, Gen::MultA) + count(g, Gen::ComultA) + count(g, Gen::EtaA) + count(g, Gen::EpsA); };
    int ph = 0, comults = 1 << 30, units = 1 << 30, open_total = -1;
    for (auto& m : tr.moves) {
      int p = phase(m.step);
      REQUIRE(p < (int)order.size());
      CHECK(p >= ph);  // steps run in order
      ph = p;
      g = apply(g, m);
      if (p >= phase("comult")) {
        CHECK(count(g, Gen::ComultA) <= comults);
        comults = count(g, Gen::ComultA);
        CHECK(count(g, Gen::EtaA) + count(g, Gen::EpsA) <= units);
        units = count(g, Gen::EtaA) + count(g, Gen::EpsA);
      }
      if (p > phase("comult")) CHECK(count(g, Gen::ComultA) == m1);
      if (p > phase("units")) {
        CHECK(count(g, Gen::EtaA) == m1);
        CHECK(count(g, Gen::EpsA) == 0);
        if (open_total < 0) open_total = open();
        CHECK(open() == open_total);
      }
    }
  }
}
