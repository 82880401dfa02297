#include <catch_amalgamated.hpp>

#include "ocfa/dsl.hpp"
#include "ocfa/normal_form.hpp"
#include "ocfa/rewrite.hpp"
#include "random_diagram.hpp"
#include "support.hpp"

using namespace ocfa;

namespace {
std::map<Gen, int> census(const DiagramTerm& t) {
  std::map<Gen, int> c;
  for (auto& s : t.slices)
    for (auto& f : s.factors)
      if (!f.identity && f.gen.kind != Gen::Cross) ++c[f.gen.kind];
  return c;
}
ComponentProfile profile1(const DiagramTerm& t) {
  auto p = invariant_profile(t);
  REQUIRE(p.components.size() == 1);
  return p.components[0];
}
}  // namespace

TEST_CASE("open-to-closed normal form of small profiles", "[normal-form]") {
  auto disc = parse("source ; eta_C");
  auto nf = nf_open_to_closed(profile1(disc), disc.source, disc.target);
  CHECK(census(nf) == std::map<Gen, int>{{Gen::EtaC, 1}});

  auto cap = parse("source I ; cozip ; eps_C");
  nf = nf_open_to_closed(profile1(cap), cap.source, cap.target);
  CHECK(census(nf) == std::map<Gen, int>{{Gen::Cozipper, 1}, {Gen::EpsC, 1}});

  auto two = parse("source I,I,I ; id:I | mu_A ; cozip | cozip ; mu_C");
  nf = nf_open_to_closed(profile1(two), two.source, two.target);
  CHECK(census(nf) == std::map<Gen, int>{{Gen::MultA, 1}, {Gen::Cozipper, 2}, {Gen::MultC, 1}});
  CHECK(equivalent(nf, two));
  auto b = nf_blocks(profile1(two), two.source, two.target);
  CHECK(b.q == std::vector<int>{1, 2});
  CHECK(b.r == 2);
}

TEST_CASE("open-to-closed normal form rejects inconsistent profiles", "[normal-form]") {
  auto two = parse("source I,I,I ; id:I | mu_A ; cozip | cozip ; mu_C");
  auto p = profile1(two);
  p.boundary_cycles.pop_back();
  CHECK_THROWS_AS(nf_open_to_closed(p, two.source, two.target), InconsistentProfile);
}

TEST_CASE("sigma bar conjugates", "[normal-form]") {
  Perm s = perm_from_cycles({{1, 2}}, 2);
  CHECK(sigma_bar(s, s) == Perm{1, 2});
  Perm sigma = perm_from_cycles({{2, 5, 6}, {3, 4}}, 6);
  Perm tau = perm_from_cycles({{1}, {2, 3}, {4, 5, 6}}, 6);
  Perm sb = sigma_bar(sigma, tau);
  CHECK(perm_compose(perm_inverse(sb), perm_compose(tau, sb)) == sigma);
  CHECK_THROWS_AS(sigma_bar(perm_from_cycles({{1, 2, 3}}, 3), Perm{1, 2, 3}), CycleTypeMismatch);
}

TEST_CASE("lambda and its inverse", "[normal-form]") {
  for (auto text : {"source O", "source I", "source I,O,O,I ; id:I | mu_C | id:I ; cozip | zip ; cross(O,I) ; id:I | Delta_C"}) {
    auto t = parse(text);
    auto [l, w] = lambda(t);
    CHECK(l.source.count_circles() == 0);
    CHECK(l.target.count_intervals() == 0);
    CHECK(equivalent(lambda_inverse(l, w), t));
    CHECK(invariant_profile(l).components.size() == invariant_profile(t).components.size());
  }
  auto t = parse("source I,O");
  auto [l, w] = lambda(t);
  auto bad = wrap_data(BoundaryObject(std::vector<Segment>{Segment::circle()}), BoundaryObject());
  CHECK_THROWS_AS(lambda_inverse(l, bad), InconsistentWrap);
}

TEST_CASE("normal form preserves invariants and is idempotent", "[normal-form]") {
  std::mt19937 rng(29);
  ocfa::testing::RandomOptions o;
  o.colors = {"a", "b"};
  o.connected = false;
  for (int k = 0; k < 200; ++k) {
    auto t = ocfa::testing::random_diagram(rng, o);
    auto nf = normal_form(t);
    CHECK(nf.source == t.source);
    CHECK(nf.target == t.target);
    CHECK(equivalent(nf, t));
    CHECK(syntactic_eq(normal_form(nf), nf));
  }
}

TEST_CASE("both sides of every rule share a normal form", "[normal-form]") {
  for (auto& r : default_catalog().rules) {
    std::map<Color, Color> b;
    for (auto& v : pattern_variables(r)) b[v] = kNoColor;
    auto l = instantiate(r.lhs_term, b), rr = instantiate(r.rhs_term, b);
    INFO(r.id);
    CHECK(syntactic_eq(normal_form(l), normal_form(rr)));
  }
}

TEST_CASE("normal form ignores target and source cycle permutations", "[normal-form]") {
  std::mt19937 rng(31);
  for (int k = 0; k < 50; ++k) {
    auto nf = normal_form(ocfa::testing::random_diagram(rng));
    std::vector<int> circles;
    for (int j = 0; j < (int)nf.target.size(); ++j)
      if (nf.target[j].is_circle()) circles.push_back(j);
    Perm p(nf.target.size());
    for (size_t j = 0; j < p.size(); ++j) p[j] = (int)j + 1;
    auto shuffled = circles;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (size_t i = 0; i < circles.size(); ++i) p[circles[i]] = shuffled[i] + 1;
    CHECK(equivalent(compose(nf, ocfa::testing::permutation_term(nf.target, p)), nf));
  }
}
