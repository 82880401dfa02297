// One PASS/FAIL line per acceptance criterion. Exit status 0 iff all pass.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "cw_oracle.hpp"
#include "ocfa/algebra.hpp"
#include "ocfa/dsl.hpp"
#include "ocfa/invariants.hpp"
#include "ocfa/normal_form.hpp"
#include "ocfa/rewrite.hpp"
#include "random_diagram.hpp"
#include "support.hpp"

using namespace ocfa;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path corpus() { return fs::path(OCFA_SOURCE_DIR) / "corpus"; }

struct Outcome {
  bool ok = true;
  std::string detail;
};

bool all_ok = true;

void criterion(int n, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(Clock::now() - t0).count();
  if (s > limit_s) {
    o.ok = false;
    o.detail += " (over the " + std::to_string((int)limit_s) + " s limit)";
  }
  all_ok = all_ok && o.ok;
  std::cout << (o.ok ? "PASS" : "FAIL") << " " << n << " " << title << " [" << std::fixed;
  std::cout.precision(2);
  std::cout << s << " s] " << o.detail << std::endl;
}

Outcome figure1() {
  auto t = parse(slurp(corpus() / "figure1.ocd"));
  auto p = invariant_profile(t);
  std::string sigma = p.components.size() == 1 ? cycles_str(p.components[0].boundary_cycles) : "?";
  bool ok = t.source.kinds_str() == "(1,0,1,1,1)" && t.target.kinds_str() == "(0,1,1,0,0)" && sigma == "(1)(2 5 6)(3 4)";
  return {ok, t.source.kinds_str() + " -> " + t.target.kinds_str() + ", sigma = " + sigma};
}

Outcome soundness() {
  auto m2 = builtin_matrix_example(2), m3 = builtin_matrix_example(3);
  const auto& cat = default_catalog();
  std::set<std::string> groups;
  int bad = 0;
  std::string which;
  for (auto& r : cat.rules) {
    groups.insert(r.group);
    std::map<Color, Color> b;
    for (auto& v : pattern_variables(r)) b[v] = kNoColor;
    auto l = instantiate(r.lhs_term, b), rr = instantiate(r.rhs_term, b);
    bool ok = equivalent(l, rr) && evaluate(l, m2) == evaluate(rr, m2) && evaluate(l, m3) == evaluate(rr, m3);
    if (!ok) ++bad, which += " " + r.id;
  }
  bool ok = bad == 0 && cat.rules.size() >= 30 && groups.size() == 7;
  return {ok, std::to_string(cat.rules.size()) + " rules in " + std::to_string(groups.size()) + " groups, " + std::to_string(bad) +
                  " unsound" + which};
}

Outcome normal_form_theorem() {
  std::mt19937 rng(20261015);
  testing::RandomOptions o;
  o.max_generators = 25;
  o.max_target_intervals = 6;  // 4^6 = the dense cap under the 2x2 example
  auto m2 = builtin_matrix_example(2);
  int pass = 0, total = 500;
  size_t moves = 0;
  std::string first;
  for (int k = 0; k < total; ++k) {
    auto t = testing::random_diagram(rng, o);
    try {
      auto [nf, tr] = normalize_with_trace(t);
      auto want = normal_form(t);
      bool ok = check_trace(tr) && syntactic_eq(nf, want) && evaluate(t, m2) == evaluate(want, m2);
      pass += ok;
      moves += tr.moves.size();
      if (!ok && first.empty()) first = print(t);
    } catch (const std::exception& e) {
      if (first.empty()) first = std::string(e.what()) + "\n" + print(t);
    }
  }
  std::string d = std::to_string(pass) + "/" + std::to_string(total) + ", mean trace " + std::to_string(moves / std::max(pass, 1)) + " moves";
  if (!first.empty()) d += "\nfirst failure:\n" + first;
  return {pass == total, d};
}

Outcome equivalence_probe() {
  std::mt19937 rng(7);
  testing::RandomOptions o;
  o.colors = {"a", "b"};
  o.max_generators = 15;
  int pos = 0, neg = 0;
  for (int k = 0; k < 200; ++k) {
    auto t = testing::random_diagram(rng, o);
    auto g = to_port_graph(t);
    int n = std::uniform_int_distribution<int>(1, 10)(rng);
    testing::mutate(g, rng, n);
    pos += equivalent(t, from_port_graph(g));
  }
  const testing::Perturbation kinds[] = {testing::Perturbation::Genus, testing::Perturbation::Window, testing::Perturbation::Permutation};
  int made = 0;
  for (int k = 0; made < 200; ++k) {
    auto t = testing::random_diagram(rng, o);
    auto g = to_port_graph(t);
    bool done = false;
    for (int j = 0; j < 3 && !done; ++j) done = testing::perturb(g, kinds[(k + j) % 3], rng);
    if (!done) continue;
    ++made;
    neg += !equivalent(t, from_port_graph(g));
  }
  return {pos == 200 && neg == 200, "mutated " + std::to_string(pos) + "/200 equivalent, perturbed " + std::to_string(neg) + "/200 distinguished"};
}

Outcome euler_oracle() {
  int checked = 0, bad = 0;
  auto check = [&](const DiagramTerm& t) {
    auto g = to_port_graph(t);
    for (auto& c : components(g)) {
      ++checked;
      bad += euler_characteristic(g, c) != testing::cw_euler(g, c);
    }
  };
  int files = 0;
  for (auto& e : fs::recursive_directory_iterator(corpus()))
    if (e.path().extension() == ".ocd") check(parse(slurp(e.path()))), ++files;
  std::mt19937 rng(99);
  testing::RandomOptions o;
  o.colors = {"a", "b"};
  o.connected = false;
  for (int k = 0; k < 1000; ++k) check(testing::random_diagram(rng, o));
  return {bad == 0, std::to_string(files) + " corpus files + 1000 random, " + std::to_string(checked) + " components, " + std::to_string(bad) + " mismatches"};
}

Outcome axioms() {
  bool ok = true;
  std::string d;
  for (int n = 1; n <= 3; ++n) {
    bool p = check_axioms(builtin_matrix_example(n)).all_pass();
    ok = ok && p;
    d += "M" + std::to_string(n) + (p ? " ok, " : " FAILS, ");
  }
  for (auto id : {"groupoid_pair", "groupoid_pair_z2"}) {
    bool p = check_axioms(builtin_by_id(id)).all_pass();
    ok = ok && p;
    d += std::string(id) + (p ? " ok, " : " FAILS, ");
  }
  std::mt19937 rng(123);
  int killed = 0;
  for (int k = 0; k < 20; ++k) {
    KFA A = builtin_matrix_example(2);
    std::vector<LinearMap*> maps;
    for (auto& [key, m] : A.mu) maps.push_back(&m);
    for (auto& [key, m] : A.delta) maps.push_back(&m);
    for (auto* f : {&A.eta, &A.eps, &A.zip, &A.cozip})
      for (auto& [key, m] : *f) maps.push_back(&m);
    for (auto* m : {&A.muC, &A.etaC, &A.deltaC, &A.epsC}) maps.push_back(m);
    LinearMap* m = maps[std::uniform_int_distribution<size_t>(0, maps.size() - 1)(rng)];
    m->a[std::uniform_int_distribution<size_t>(0, m->a.size() - 1)(rng)] += Rational(1, 2);
    auto rep = check_axioms(A);
    auto fails = rep.failures();
    killed += !fails.empty() && fails.front()->lhs != fails.front()->rhs;
  }
  ok = ok && killed == 20;
  return {ok, d + "mutations killed " + std::to_string(killed) + "/20"};
}

Outcome permutation_invariance() {
  std::mt19937 rng(55);
  testing::RandomOptions o;
  int tgt = 0, src = 0, src_tried = 0;
  for (int k = 0; k < 50; ++k) {
    auto nf = normal_form(testing::random_diagram(rng, o));
    // target circles in any order
    std::vector<int> circles;
    for (int j = 0; j < (int)nf.target.size(); ++j)
      if (nf.target[j].is_circle()) circles.push_back(j);
    Perm p(nf.target.size());
    for (size_t j = 0; j < p.size(); ++j) p[j] = (int)j + 1;
    auto sh = circles;
    std::shuffle(sh.begin(), sh.end(), rng);
    for (size_t i = 0; i < circles.size(); ++i) p[circles[i]] = sh[i] + 1;
    tgt += equivalent(compose(nf, testing::permutation_term(nf.target, p)), nf);
    // rotate the source intervals along one boundary cycle, on the term and on its wrapped
    // open-to-closed normal form where every interval sits in the source
    for (const DiagramTerm& f : {nf, normal_form(lambda(nf).first)}) {
      auto prof = invariant_profile(f);
      std::vector<int> spos;
      for (int i = 0; i < (int)f.source.size(); ++i)
        if (f.source[i].is_interval()) spos.push_back(i);
      std::vector<std::vector<int>> cands;
      for (auto& c : prof.components)
        for (auto& cyc : c.boundary_cycles)
          if (cyc.size() > 1 && std::all_of(cyc.begin(), cyc.end(), [&](int x) { return x <= (int)spos.size(); })) cands.push_back(cyc);
      if (cands.empty()) continue;
      auto cyc = cands[std::uniform_int_distribution<size_t>(0, cands.size() - 1)(rng)];
      Perm q(f.source.size());
      for (size_t j = 0; j < q.size(); ++j) q[j] = (int)j + 1;
      for (size_t i = 0; i < cyc.size(); ++i) q[spos[cyc[i] - 1]] = spos[cyc[(i + 1) % cyc.size()] - 1] + 1;
      ++src_tried;
      src += equivalent(compose(testing::permutation_term(f.source, q), f), f);
    }
  }
  return {tgt == 50 && src == src_tried && src_tried >= 25,
          "target permutations " + std::to_string(tgt) + "/50, source cycles " + std::to_string(src) + "/" + std::to_string(src_tried)};
}

}  // namespace

int main() {
  criterion(1, "figure 1 boundary and permutation", 1, figure1);
  criterion(2, "relation soundness", 30, soundness);
  criterion(3, "normal form by rewriting on 500 random diagrams", 300, normal_form_theorem);
  criterion(4, "equivalence completeness probe", 300, equivalence_probe);
  criterion(5, "euler characteristic against the cell-complex oracle", 300, euler_oracle);
  criterion(6, "axiom checker and mutation kill rate", 300, axioms);
  criterion(7, "permutation invariances of normal forms", 300, permutation_invariance);
  return all_ok ? 0 : 1;
}
