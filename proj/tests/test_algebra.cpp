#include <catch_amalgamated.hpp>

#include "ocfa/algebra.hpp"
#include "ocfa/dsl.hpp"
#include "ocfa/normal_form.hpp"
#include "random_diagram.hpp"

using namespace ocfa;

namespace {
std::vector<LinearMap*> all_maps(KFA& A) {
  std::vector<LinearMap*> v;
  for (auto& [k, m] : A.mu) v.push_back(&m);
  for (auto& [k, m] : A.delta) v.push_back(&m);
  for (auto* f : {&A.eta, &A.eps, &A.zip, &A.cozip})
    for (auto& [k, m] : *f) v.push_back(&m);
  for (auto* m : {&A.muC, &A.etaC, &A.deltaC, &A.epsC}) v.push_back(m);
  return v;
}
}  // namespace

TEST_CASE("builtin algebras satisfy their axioms", "[algebra]") {
  for (auto& b : builtin_algebras()) {
    INFO(b.id);
    auto A = builtin_by_id(b.id);
    auto rep = check_axioms(A);
    CHECK(rep.all_pass());
    CHECK(A.verified);
  }
}

TEST_CASE("a wrong closed counit breaks Cardy", "[algebra]") {
  auto A = builtin_matrix_example(2, 2);
  auto rep = check_axioms(A);
  REQUIRE_FALSE(rep.all_pass());
  bool cardy = false;
  for (auto* f : rep.failures()) {
    CHECK(f->lhs != f->rhs);
    cardy = cardy || f->name.find("ardy") != std::string::npos;
  }
  CHECK(cardy);
  CHECK_FALSE(A.verified);
}

TEST_CASE("single-entry mutations are caught", "[algebra]") {
  std::mt19937 rng(61);
  for (auto id : {"matrix2", "groupoid_pair_z2"}) {
    for (int k = 0; k < 20; ++k) {
      auto A = builtin_by_id(id);
      auto maps = all_maps(A);
      auto* m = maps[std::uniform_int_distribution<size_t>(0, maps.size() - 1)(rng)];
      m->a[std::uniform_int_distribution<size_t>(0, m->a.size() - 1)(rng)] += 1;
      auto rep = check_axioms(A);
      REQUIRE_FALSE(rep.all_pass());
      auto* f = rep.failures().front();
      CHECK(f->lhs != f->rhs);
    }
  }
}

TEST_CASE("matrix evaluations against hand computations", "[algebra][oracle]") {
  for (int n = 1; n <= 3; ++n) {
    auto A = builtin_matrix_example(n);
    size_t d = n * n;
    CHECK(evaluate(parse("source I"), A) == LinearMap::identity(d));
    // cozip then zip: x -> tr(x) 1
    LinearMap w(d, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w.at(i * n + i, j * n + j) = 1;
    CHECK(evaluate(parse("source I ; cozip ; zip"), A) == w);
    // Delta then mu: x -> sum_ij x e_ij e_ji = n x
    LinearMap ow = LinearMap::identity(d);
    for (auto& v : ow.a) v *= n;
    CHECK(evaluate(parse("source I ; Delta_A ; mu_A"), A) == ow);
    // Delta, twist, mu agrees with cozip then zip
    CHECK(evaluate(parse("source I ; Delta_A ; cross(I,I) ; mu_A"), A) == w);
    auto torus = evaluate(parse("source ; eta_C ; Delta_C ; mu_C ; eps_C"), A);
    CHECK(torus.rows == 1);
    CHECK(torus.at(0, 0) == 1);
    CHECK(evaluate(parse("source ; eta_C ; zip ; cozip ; eps_C"), A).at(0, 0) == n);
  }
}

TEST_CASE("zig-zags evaluate to identities", "[algebra]") {
  auto A = builtin_matrix_example(2);
  CHECK(evaluate(parse("source I ; id:I | eta_A ; id:I | Delta_A ; mu_A | id:I ; eps_A | id:I"), A) == LinearMap::identity(4));
  CHECK(evaluate(parse("source O ; id:O | eta_C ; id:O | Delta_C ; mu_C | id:O ; eps_C | id:O"), A) == LinearMap::identity(1));
}

TEST_CASE("evaluation is functorial and monoidal", "[algebra]") {
  std::mt19937 rng(67);
  auto A = builtin_by_id("groupoid_pair_z2");
  ocfa::testing::RandomOptions o;
  o.colors = {"a", "b"};
  o.max_generators = 8;
  o.max_source = 2;
  for (int k = 0; k < 60; ++k) {
    auto t = ocfa::testing::random_diagram(rng, o);
    if (t.slices.size() < 2) continue;
    size_t cut = t.slices.size() / 2;
    DiagramTerm f{t.source, t.slices[cut - 1].target(), {t.slices.begin(), t.slices.begin() + cut}};
    DiagramTerm g{f.target, t.target, {t.slices.begin() + cut, t.slices.end()}};
    CHECK(evaluate(t, A) == matmul(evaluate(g, A), evaluate(f, A)));
    auto s = ocfa::testing::random_diagram(rng, o);
    auto ts = tensor(f, s);
    if (ts.source.size() + ts.target.size() > 6) continue;
    CHECK(evaluate(ts, A) == kron(evaluate(f, A), evaluate(s, A)));
  }
}

TEST_CASE("evaluation is invariant under the normal form", "[algebra]") {
  std::mt19937 rng(71);
  auto m2 = builtin_by_id("matrix2");
  auto gp = builtin_by_id("groupoid_pair");
  ocfa::testing::RandomOptions o;
  o.max_source = 3;
  ocfa::testing::RandomOptions oc = o;
  oc.colors = {"a", "b"};
  for (int k = 0; k < 60; ++k) {
    auto t = ocfa::testing::random_diagram(rng, o);
    CHECK(evaluate(t, m2) == evaluate(normal_form(t), m2));
    auto u = ocfa::testing::random_diagram(rng, oc);
    CHECK(evaluate(u, gp) == evaluate(normal_form(u), gp));
  }
}

TEST_CASE("evaluation errors", "[algebra]") {
  auto A = builtin_matrix_example(3);
  CHECK_THROWS_AS(evaluate(parse("source I,I,I,I"), A), DimensionCapExceeded);
  CHECK_THROWS_AS(evaluate(parse("colors z\nsource I[z,z]"), builtin_by_id("groupoid_pair")), UnknownColor);
  auto B = builtin_matrix_example(2);
  B.muC = LinearMap(2, 2);
  CHECK_THROWS_AS(check_axioms(B), DimensionMismatch);
}

TEST_CASE("kfa files round-trip", "[algebra]") {
  for (auto id : {"matrix2", "groupoid_pair_z2"}) {
    auto A = builtin_by_id(id);
    auto B = read_kfa(write_kfa(A));
    CHECK(check_axioms(B).all_pass());
    CHECK(write_kfa(B) == write_kfa(A));
  }
  CHECK_THROWS_AS(read_kfa("algebra x\ndim A = 2\nmu_A (0,0,9) = 1\n"), MalformedAlgebra);
}
