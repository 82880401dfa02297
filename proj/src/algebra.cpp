#include "ocfa/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ocfa {

LinearMap LinearMap::identity(size_t n) {
  LinearMap m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

std::string LinearMap::str() const {
  std::ostringstream os;
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) os << (c ? " " : "") << at(r, c).get_str();
    os << "\n";
  }
  return os.str();
}

LinearMap matmul(const LinearMap& a, const LinearMap& b) {
  if (a.cols != b.rows) throw DimensionMismatch("matmul: " + std::to_string(a.cols) + " vs " + std::to_string(b.rows));
  LinearMap r(a.rows, b.cols);
  for (size_t i = 0; i < a.rows; ++i)
    for (size_t k = 0; k < a.cols; ++k) {
      const Rational& x = a.at(i, k);
      if (sgn(x) == 0) continue;
      for (size_t j = 0; j < b.cols; ++j)
        if (sgn(b.at(k, j))) r.at(i, j) += x * b.at(k, j);
    }
  return r;
}

LinearMap kron(const LinearMap& a, const LinearMap& b) {
  LinearMap r(a.rows * b.rows, a.cols * b.cols);
  for (size_t i = 0; i < a.rows; ++i)
    for (size_t j = 0; j < a.cols; ++j) {
      if (sgn(a.at(i, j)) == 0) continue;
      for (size_t k = 0; k < b.rows; ++k)
        for (size_t l = 0; l < b.cols; ++l) r.at(i * b.rows + k, j * b.cols + l) = a.at(i, j) * b.at(k, l);
    }
  return r;
}

LinearMap swap_map(size_t d1, size_t d2) {
  LinearMap r(d1 * d2, d1 * d2);
  for (size_t i = 0; i < d1; ++i)
    for (size_t j = 0; j < d2; ++j) r.at(j * d1 + i, i * d2 + j) = 1;
  return r;
}

std::vector<Rational> column(const LinearMap& m, size_t c) {
  std::vector<Rational> v(m.rows);
  for (size_t r = 0; r < m.rows; ++r) v[r] = m.at(r, c);
  return v;
}

LinearMap invert(const LinearMap& m) {
  if (m.rows != m.cols) throw DimensionMismatch("inverse of a non-square matrix");
  size_t n = m.rows;
  LinearMap a = m, inv = LinearMap::identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && sgn(a.at(p, c)) == 0) ++p;
    if (p == n) throw MalformedAlgebra("degenerate pairing: Gram matrix is singular");
    if (p != c)
      for (size_t j = 0; j < n; ++j) std::swap(a.at(p, j), a.at(c, j)), std::swap(inv.at(p, j), inv.at(c, j));
    Rational piv = a.at(c, c);
    for (size_t j = 0; j < n; ++j) a.at(c, j) /= piv, inv.at(c, j) /= piv;
    for (size_t r = 0; r < n; ++r) {
      if (r == c || sgn(a.at(r, c)) == 0) continue;
      Rational f = a.at(r, c);
      for (size_t j = 0; j < n; ++j) a.at(r, j) -= f * a.at(c, j), inv.at(r, j) -= f * inv.at(c, j);
    }
  }
  return inv;
}

size_t KFA::dim_a(const Color& a, const Color& b) const {
  auto it = dimA.find({a, b});
  if (it == dimA.end()) throw UnknownColor("no space A[" + a + "," + b + "] in algebra " + name);
  return it->second;
}

size_t KFA::dim(const Segment& s) const { return s.is_circle() ? dimC : dim_a(s.plus, s.minus); }

const LinearMap& KFA::map_for(const Generator& g) const {
  auto get3 = [&](const std::map<std::array<Color, 3>, LinearMap>& m) -> const LinearMap& {
    auto it = m.find(g.c);
    if (it == m.end()) throw UnknownColor("no structure map " + g.str() + " in algebra " + name);
    return it->second;
  };
  auto get1 = [&](const std::map<Color, LinearMap>& m) -> const LinearMap& {
    auto it = m.find(g.c[0]);
    if (it == m.end()) throw UnknownColor("no structure map " + g.str() + " in algebra " + name);
    return it->second;
  };
  switch (g.kind) {
    case Gen::MultA: return get3(mu);
    case Gen::ComultA: return get3(delta);
    case Gen::EtaA: return get1(eta);
    case Gen::EpsA: return get1(eps);
    case Gen::Zipper: return get1(zip);
    case Gen::Cozipper: return get1(cozip);
    case Gen::MultC: return muC;
    case Gen::EtaC: return etaC;
    case Gen::ComultC: return deltaC;
    case Gen::EpsC: return epsC;
    case Gen::Cross: break;
  }
  throw std::logic_error("crossings have no structure map");
}

bool AxiomReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](auto& r) { return r.pass; });
}

std::vector<const AxiomResult*> AxiomReport::failures() const {
  std::vector<const AxiomResult*> f;
  for (auto& r : results)
    if (!r.pass) f.push_back(&r);
  return f;
}

static nlohmann::json vec_json(const std::vector<Rational>& v) {
  auto a = nlohmann::json::array();
  for (auto& x : v) a.push_back(x.get_str());
  return a;
}

std::string AxiomReport::json(int indent) const {
  nlohmann::json j;
  j["verified"] = all_pass();
  auto arr = nlohmann::json::array();
  for (auto& r : results) {
    nlohmann::json e{{"axiom", r.name}, {"pass", r.pass}};
    if (!r.pass) e["witness"] = {{"basis_vector", r.witness}, {"lhs", vec_json(r.lhs)}, {"rhs", vec_json(r.rhs)}};
    arr.push_back(e);
  }
  j["axioms"] = arr;
  return j.dump(indent);
}

std::string AxiomReport::text() const {
  std::ostringstream os;
  size_t ok = 0;
  for (auto& r : results) {
    ok += r.pass;
    if (r.pass) continue;
    os << "FAIL " << r.name << " at basis vector " << r.witness << ": lhs [";
    for (size_t i = 0; i < r.lhs.size(); ++i) os << (i ? " " : "") << r.lhs[i].get_str();
    os << "] rhs [";
    for (size_t i = 0; i < r.rhs.size(); ++i) os << (i ? " " : "") << r.rhs[i].get_str();
    os << "]\n";
  }
  os << ok << "/" << results.size() << " axioms hold" << (all_pass() ? ", verified" : "") << "\n";
  return os.str();
}

namespace {

struct Checker {
  const KFA& A;
  AxiomReport rep;

  LinearMap I(const Color& a, const Color& b) const { return LinearMap::identity(A.dim_a(a, b)); }
  LinearMap IC() const { return LinearMap::identity(A.dimC); }
  const LinearMap& mu(const Color& a, const Color& b, const Color& c) const { return A.mu.at({a, b, c}); }
  const LinearMap& de(const Color& a, const Color& b, const Color& c) const { return A.delta.at({a, b, c}); }

  void eq(const std::string& name, const LinearMap& l, const LinearMap& r) {
    AxiomResult res;
    res.name = name;
    if (l.rows != r.rows || l.cols != r.cols) throw DimensionMismatch("axiom " + name + ": sides have different shapes");
    for (size_t c = 0; c < l.cols && res.pass; ++c)
      for (size_t k = 0; k < l.rows; ++k)
        if (l.at(k, c) != r.at(k, c)) {
          res.pass = false;
          res.witness = c;
          res.lhs = column(l, c);
          res.rhs = column(r, c);
          break;
        }
    rep.results.push_back(std::move(res));
  }
};

std::string tag(std::initializer_list<Color> cs) {
  std::string s = "[";
  bool first = true;
  for (auto& c : cs) s += (first ? "" : ",") + c, first = false;
  return s + "]";
}

void expect_shape(const std::string& what, const LinearMap& m, size_t rows, size_t cols) {
  if (m.rows != rows || m.cols != cols)
    throw DimensionMismatch(what + " has shape " + std::to_string(m.rows) + "x" + std::to_string(m.cols) +
                            ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
}

void check_shapes(const KFA& A) {
  for (auto& a : A.colors)
    for (auto& b : A.colors) A.dim_a(a, b);
  for (auto& a : A.colors) {
    size_t daa = A.dim_a(a, a);
    for (auto* m : {&A.eta, &A.eps, &A.zip, &A.cozip})
      if (!m->count(a)) throw DimensionMismatch("missing unary structure map at colour " + a);
    expect_shape("eta_A[" + a + "]", A.eta.at(a), daa, 1);
    expect_shape("eps_A[" + a + "]", A.eps.at(a), 1, daa);
    expect_shape("zip[" + a + "]", A.zip.at(a), daa, A.dimC);
    expect_shape("cozip[" + a + "]", A.cozip.at(a), A.dimC, daa);
    for (auto& b : A.colors)
      for (auto& c : A.colors) {
        std::array<Color, 3> k{a, b, c};
        if (!A.mu.count(k) || !A.delta.count(k)) throw DimensionMismatch("missing mu/Delta at " + tag({a, b, c}));
        expect_shape("mu_A" + tag({a, b, c}), A.mu.at(k), A.dim_a(a, c), A.dim_a(a, b) * A.dim_a(b, c));
        expect_shape("Delta_A" + tag({a, b, c}), A.delta.at(k), A.dim_a(a, b) * A.dim_a(b, c), A.dim_a(a, c));
      }
  }
  size_t C = A.dimC;
  expect_shape("mu_C", A.muC, C, C * C);
  expect_shape("eta_C", A.etaC, C, 1);
  expect_shape("Delta_C", A.deltaC, C * C, C);
  expect_shape("eps_C", A.epsC, 1, C);
}

}  // namespace

AxiomReport check_axioms(const KFA& A) {
  check_shapes(A);
  Checker k{A, {}};
  const auto& S = A.colors;
  for (auto& a : S)
    for (auto& b : S) {
      for (auto& c : S)
        for (auto& d : S) {
          auto t = tag({a, b, c, d});
          k.eq("assoc_A" + t, matmul(k.mu(a, b, d), kron(k.I(a, b), k.mu(b, c, d))),
               matmul(k.mu(a, c, d), kron(k.mu(a, b, c), k.I(c, d))));
          k.eq("coassoc_A" + t, matmul(kron(k.de(a, b, c), k.I(c, d)), k.de(a, c, d)),
               matmul(kron(k.I(a, b), k.de(b, c, d)), k.de(a, b, d)));
          k.eq("frobenius_l_A" + t, matmul(k.de(a, b, d), k.mu(a, c, d)),
               matmul(kron(k.I(a, b), k.mu(b, c, d)), kron(k.de(a, b, c), k.I(c, d))));
          k.eq("frobenius_r_A" + t, matmul(k.de(a, c, d), k.mu(a, b, d)),
               matmul(kron(k.mu(a, b, c), k.I(c, d)), kron(k.I(a, b), k.de(b, c, d))));
        }
      auto t = tag({a, b});
      k.eq("unit_l_A" + t, matmul(k.mu(a, a, b), kron(A.eta.at(a), k.I(a, b))), k.I(a, b));
      k.eq("unit_r_A" + t, matmul(k.mu(a, b, b), kron(k.I(a, b), A.eta.at(b))), k.I(a, b));
      k.eq("counit_l_A" + t, matmul(kron(A.eps.at(a), k.I(a, b)), k.de(a, a, b)), k.I(a, b));
      k.eq("counit_r_A" + t, matmul(kron(k.I(a, b), A.eps.at(b)), k.de(a, b, b)), k.I(a, b));
      k.eq("symmetry_A" + t, matmul(A.eps.at(a), k.mu(a, b, a)),
           matmul(matmul(A.eps.at(b), k.mu(b, a, b)), swap_map(A.dim_a(a, b), A.dim_a(b, a))));
      k.eq("knowledge" + t, matmul(k.mu(a, a, b), kron(A.zip.at(a), k.I(a, b))),
           matmul(matmul(k.mu(a, b, b), swap_map(A.dim_a(b, b), A.dim_a(a, b))), kron(A.zip.at(b), k.I(a, b))));
      k.eq("cardy" + t, matmul(A.zip.at(a), A.cozip.at(b)),
           matmul(matmul(k.mu(a, b, a), swap_map(A.dim_a(b, a), A.dim_a(a, b))), k.de(b, a, b)));
    }
  LinearMap IC = k.IC();
  size_t C = A.dimC;
  k.eq("assoc_C", matmul(A.muC, kron(IC, A.muC)), matmul(A.muC, kron(A.muC, IC)));
  k.eq("unit_l_C", matmul(A.muC, kron(A.etaC, IC)), IC);
  k.eq("unit_r_C", matmul(A.muC, kron(IC, A.etaC)), IC);
  k.eq("coassoc_C", matmul(kron(A.deltaC, IC), A.deltaC), matmul(kron(IC, A.deltaC), A.deltaC));
  k.eq("counit_l_C", matmul(kron(A.epsC, IC), A.deltaC), IC);
  k.eq("counit_r_C", matmul(kron(IC, A.epsC), A.deltaC), IC);
  k.eq("frobenius_l_C", matmul(A.deltaC, A.muC), matmul(kron(IC, A.muC), kron(A.deltaC, IC)));
  k.eq("frobenius_r_C", matmul(A.deltaC, A.muC), matmul(kron(A.muC, IC), kron(IC, A.deltaC)));
  k.eq("commutativity_C", A.muC, matmul(A.muC, swap_map(C, C)));
  for (auto& a : S) {
    auto t = tag({a});
    k.eq("zip_mult" + t, matmul(k.mu(a, a, a), kron(A.zip.at(a), A.zip.at(a))), matmul(A.zip.at(a), A.muC));
    k.eq("zip_unit" + t, matmul(A.zip.at(a), A.etaC), A.eta.at(a));
    k.eq("duality" + t, matmul(matmul(A.epsC, A.muC), kron(IC, A.cozip.at(a))),
         matmul(matmul(A.eps.at(a), k.mu(a, a, a)), kron(A.zip.at(a), k.I(a, a))));
  }
  return k.rep;
}

LinearMap SparseMap::dense() const {
  LinearMap m(rows, cols);
  for (size_t c = 0; c < cols; ++c)
    for (auto& [r, v] : col[c]) m.at(r, c) = v;
  return m;
}

namespace {

using SparseCol = std::vector<std::pair<size_t, Rational>>;

std::vector<SparseCol> to_sparse(const LinearMap& m) {
  std::vector<SparseCol> cols(m.cols);
  for (size_t c = 0; c < m.cols; ++c)
    for (size_t r = 0; r < m.rows; ++r)
      if (sgn(m.at(r, c))) cols[c].push_back({r, m.at(r, c)});
  return cols;
}

size_t product(const std::vector<size_t>& d, size_t lo, size_t hi) {
  size_t p = 1;
  for (size_t i = lo; i < hi; ++i) p *= d[i];
  return p;
}

// source and target spaces become dense matrices, so they are capped
void cap(const std::vector<size_t>& dims, const char* which) {
  size_t p = 1;
  for (size_t d : dims) {
    if (d == 0) return;
    if (p * d > kDimensionCap)
      throw DimensionCapExceeded(std::string(which) + " space exceeds dimension cap " + std::to_string(kDimensionCap));
    p *= d;
  }
}

// intermediate interfaces stay sparse; only the index arithmetic has to fit
constexpr size_t kIndexLimit = size_t(1) << 62;
constexpr size_t kNonzeroBudget = size_t(1) << 24;

void index_guard(const std::vector<size_t>& dims) {
  size_t p = 1;
  for (size_t d : dims) {
    if (d == 0) return;
    if (p > kIndexLimit / d) throw DimensionCapExceeded("intermediate space too large to index");
    p *= d;
  }
}

}  // namespace

SparseMap evaluate_sparse(const DiagramTerm& t, const KFA& alg) {
  auto rep = validate(t);
  if (!rep.ok) throw DimensionMismatch("ill-typed term: " + rep.message);
  std::vector<size_t> dims;
  for (auto& s : t.source.segments) dims.push_back(alg.dim(s));
  cap(dims, "source");
  {
    std::vector<size_t> td;
    for (auto& s : t.target.segments) td.push_back(alg.dim(s));
    cap(td, "target");
  }
  size_t din = product(dims, 0, dims.size());
  std::vector<SparseCol> state(din);
  for (size_t i = 0; i < din; ++i) state[i].push_back({i, Rational(1)});
  std::map<std::string, std::vector<SparseCol>> cache;
  for (auto& sl : t.slices) {
    size_t pos = 0;
    for (auto& f : sl.factors) {
      if (f.identity) {
        ++pos;
        continue;
      }
      const Generator& g = f.gen;
      size_t nin = g.n_in(), nout = g.n_out();
      std::vector<size_t> out_dims;
      for (auto& s : g.target().segments) out_dims.push_back(alg.dim(s));
      size_t R = product(dims, pos + nin, dims.size());
      size_t li = product(dims, pos, pos + nin), lo = product(out_dims, 0, out_dims.size());
      std::vector<SparseCol>* local;
      std::vector<SparseCol> perm;
      if (g.kind == Gen::Cross) {
        size_t d1 = dims[pos], d2 = dims[pos + 1];
        perm.resize(d1 * d2);
        for (size_t i = 0; i < d1; ++i)
          for (size_t j = 0; j < d2; ++j) perm[i * d2 + j].push_back({j * d1 + i, Rational(1)});
        local = &perm;
      } else {
        auto key = g.str();
        auto it = cache.find(key);
        if (it == cache.end()) {
          const LinearMap& m = alg.map_for(g);
          if (m.rows != lo || m.cols != li) throw DimensionMismatch("structure map " + key + " has wrong shape");
          it = cache.emplace(key, to_sparse(m)).first;
        }
        local = &it->second;
      }
      std::vector<size_t> nd(dims.begin(), dims.begin() + pos);
      nd.insert(nd.end(), out_dims.begin(), out_dims.end());
      nd.insert(nd.end(), dims.begin() + pos + nin, dims.end());
      index_guard(nd);
      size_t nonzeros = 0;
      for (auto& colv : state) {
        std::map<size_t, Rational> acc;
        for (auto& [idx, v] : colv) {
          size_t r = idx % R, rest = idx / R, x = rest % li, l = rest / li;
          for (auto& [y, w] : (*local)[x]) acc[(l * lo + y) * R + r] += v * w;
        }
        SparseCol nc;
        for (auto& [i, v] : acc)
          if (sgn(v)) nc.push_back({i, v});
        nonzeros += nc.size();
        if (nonzeros > kNonzeroBudget) throw DimensionCapExceeded("evaluation exceeds the nonzero budget");
        colv = std::move(nc);
      }
      dims = std::move(nd);
      pos += nout;
    }
  }
  SparseMap out;
  out.rows = product(dims, 0, dims.size());
  out.cols = din;
  out.col = std::move(state);
  return out;
}

LinearMap evaluate(const DiagramTerm& t, const KFA& alg) { return evaluate_sparse(t, alg).dense(); }

void derive_comultiplications(KFA& A) {
  // Delta_abc(x) = sum_ij (P^-1)_ij u_i (x) mu_bac(v_j, x), u basis of A_ab, v of A_ba,
  // P_jk = eps_b(mu_bab(v_j, u_k))
  for (auto& a : A.colors)
    for (auto& b : A.colors) {
      size_t dab = A.dim_a(a, b), dba = A.dim_a(b, a);
      if (dab != dba) throw MalformedAlgebra("A[a,b] and A[b,a] must have equal dimension for a nondegenerate pairing");
      LinearMap P(dba, dab);
      const LinearMap& mbab = A.mu.at({b, a, b});
      for (size_t j = 0; j < dba; ++j)
        for (size_t kk = 0; kk < dab; ++kk) {
          Rational s = 0;
          for (size_t r = 0; r < A.dim_a(b, b); ++r) s += A.eps.at(b).at(0, r) * mbab.at(r, j * dab + kk);
          P.at(j, kk) = s;
        }
      LinearMap K = invert(P);
      for (auto& c : A.colors) {
        size_t dac = A.dim_a(a, c), dbc = A.dim_a(b, c);
        const LinearMap& mbac = A.mu.at({b, a, c});
        LinearMap D(dab * dbc, dac);
        for (size_t x = 0; x < dac; ++x)
          for (size_t i = 0; i < dab; ++i)
            for (size_t j = 0; j < dba; ++j) {
              if (sgn(K.at(i, j)) == 0) continue;
              for (size_t y = 0; y < dbc; ++y) {
                const Rational& m = mbac.at(y, j * dac + x);
                if (sgn(m)) D.at(i * dbc + y, x) += K.at(i, j) * m;
              }
            }
        A.delta[{a, b, c}] = D;
      }
    }
  // closed part
  size_t C = A.dimC;
  LinearMap G(C, C);
  for (size_t i = 0; i < C; ++i)
    for (size_t j = 0; j < C; ++j) {
      Rational s = 0;
      for (size_t r = 0; r < C; ++r) s += A.epsC.at(0, r) * A.muC.at(r, i * C + j);
      G.at(i, j) = s;
    }
  LinearMap K = invert(G);
  LinearMap D(C * C, C);
  for (size_t x = 0; x < C; ++x)
    for (size_t i = 0; i < C; ++i)
      for (size_t j = 0; j < C; ++j) {
        if (sgn(K.at(i, j)) == 0) continue;
        for (size_t y = 0; y < C; ++y) {
          const Rational& m = A.muC.at(y, j * C + x);
          if (sgn(m)) D.at(i * C + y, x) += K.at(i, j) * m;
        }
      }
  A.deltaC = D;
}

// cozipper determined by duality: eps_C(c * cozip(x)) = eps_a(zip(c) * x)
static void derive_cozippers(KFA& A) {
  size_t C = A.dimC;
  LinearMap G(C, C);
  for (size_t i = 0; i < C; ++i)
    for (size_t j = 0; j < C; ++j) {
      Rational s = 0;
      for (size_t r = 0; r < C; ++r) s += A.epsC.at(0, r) * A.muC.at(r, i * C + j);
      G.at(i, j) = s;
    }
  LinearMap Ginv = invert(G);
  for (auto& a : A.colors) {
    size_t d = A.dim_a(a, a);
    const LinearMap& m = A.mu.at({a, a, a});
    // rhs(c, x) = eps_a(mu(zip(c), x))
    LinearMap rhs(C, d);
    for (size_t c = 0; c < C; ++c)
      for (size_t x = 0; x < d; ++x) {
        Rational s = 0;
        for (size_t z = 0; z < d; ++z) {
          if (sgn(A.zip.at(a).at(z, c)) == 0) continue;
          for (size_t r = 0; r < d; ++r) s += A.eps.at(a).at(0, r) * A.zip.at(a).at(z, c) * m.at(r, z * d + x);
        }
        rhs.at(c, x) = s;
      }
    // G y = rhs column-wise (G symmetric by commutativity)
    A.cozip[a] = matmul(Ginv, rhs);
  }
}

KFA builtin_matrix_example(int n, const Rational& closed_counit) {
  if (n < 1) throw MalformedAlgebra("matrix size must be positive");
  KFA A;
  A.name = "matrix" + std::to_string(n);
  A.colors = {kNoColor};
  size_t d = n * n;
  A.dimA[{kNoColor, kNoColor}] = d;
  A.dimC = 1;
  LinearMap mu(d, d * d), eta(d, 1), eps(1, d), zip(d, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) mu.at(i * n + l, (i * n + j) * d + (j * n + l)) = 1;
  for (int i = 0; i < n; ++i) eta.at(i * n + i, 0) = 1, eps.at(0, i * n + i) = 1, zip.at(i * n + i, 0) = 1;
  std::array<Color, 3> k{kNoColor, kNoColor, kNoColor};
  A.mu[k] = mu;
  A.eta[kNoColor] = eta;
  A.eps[kNoColor] = eps;
  A.zip[kNoColor] = zip;
  A.muC = LinearMap::identity(1);
  A.etaC = LinearMap::identity(1);
  A.epsC = LinearMap(1, 1);
  A.epsC.at(0, 0) = closed_counit;
  derive_comultiplications(A);
  derive_cozippers(A);
  A.verified = check_axioms(A).all_pass();
  return A;
}

Groupoid Groupoid::cyclic(std::vector<Color> objects, int order) {
  Groupoid g{std::move(objects), {}};
  g.table.assign(order, std::vector<int>(order));
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) g.table[i][j] = (i + j) % order;
  return g;
}

KFA builtin_groupoid_example(const Groupoid& gp, const Rational& lambda) {
  size_t n = gp.table.size();
  if (gp.objects.empty() || n == 0) throw MalformedAlgebra("groupoid needs objects and a non-empty vertex group");
  std::set<Color> uniq(gp.objects.begin(), gp.objects.end());
  if (uniq.size() != gp.objects.size()) throw MalformedAlgebra("duplicate object names");
  for (auto& row : gp.table) {
    if (row.size() != n) throw MalformedAlgebra("group table is not square");
    std::set<int> s(row.begin(), row.end());
    if (s.size() != n || *s.begin() < 0 || *s.rbegin() >= (int)n) throw MalformedAlgebra("group table row is not a permutation");
  }
  auto mul = [&](int x, int y) { return gp.table[x][y]; };
  for (size_t i = 0; i < n; ++i)
    if (mul(0, i) != (int)i || mul(i, 0) != (int)i) throw MalformedAlgebra("element 0 is not the unit");
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y)
      for (size_t z = 0; z < n; ++z)
        if (mul(mul(x, y), z) != mul(x, mul(y, z))) throw MalformedAlgebra("group table is not associative");
  std::vector<int> inv(n);
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y)
      if (mul(x, y) == 0) inv[x] = y;
  // conjugacy classes
  std::vector<int> cls(n, -1);
  std::vector<std::vector<int>> classes;
  for (size_t x = 0; x < n; ++x) {
    if (cls[x] >= 0) continue;
    std::set<int> orbit;
    for (size_t h = 0; h < n; ++h) orbit.insert(mul(mul(h, x), inv[h]));
    for (int y : orbit) cls[y] = (int)classes.size();
    classes.push_back({orbit.begin(), orbit.end()});
  }
  size_t C = classes.size();
  KFA A;
  A.name = "groupoid";
  A.colors = gp.objects;
  std::sort(A.colors.begin(), A.colors.end());
  A.dimC = C;
  // morphism a->b labelled g; composite of f:a->b (g1) then h:b->c (g2) is g1*g2
  for (auto& a : A.colors)
    for (auto& b : A.colors) A.dimA[{a, b}] = n;
  for (auto& a : A.colors) {
    for (auto& b : A.colors)
      for (auto& c : A.colors) {
        LinearMap m(n, n * n);
        for (size_t x = 0; x < n; ++x)
          for (size_t y = 0; y < n; ++y) m.at(mul(x, y), x * n + y) = 1;
        A.mu[{a, b, c}] = m;
      }
    LinearMap eta(n, 1), eps(1, n), zip(n, C);
    eta.at(0, 0) = 1;
    eps.at(0, 0) = lambda;
    for (size_t k = 0; k < C; ++k)
      for (int x : classes[k]) zip.at(x, k) = 1;
    A.eta[a] = eta;
    A.eps[a] = eps;
    A.zip[a] = zip;
  }
  // centre: class sums
  A.muC = LinearMap(C, C * C);
  for (size_t i = 0; i < C; ++i)
    for (size_t j = 0; j < C; ++j) {
      std::vector<Rational> coef(n);
      for (int x : classes[i])
        for (int y : classes[j]) coef[mul(x, y)] += 1;
      for (size_t k = 0; k < C; ++k) A.muC.at(k, i * C + j) = coef[classes[k][0]];
    }
  A.etaC = LinearMap(C, 1);
  A.etaC.at(cls[0], 0) = 1;
  A.epsC = LinearMap(1, C);
  A.epsC.at(0, cls[0]) = lambda * lambda / Rational((long)n);
  derive_comultiplications(A);
  derive_cozippers(A);
  A.verified = check_axioms(A).all_pass();
  return A;
}

std::vector<BuiltinAlgebra> builtin_algebras() {
  return {{"matrix1", "1x1 matrices, eps_A = trace, C = Q"},
          {"matrix2", "2x2 matrices, eps_A = trace, C = Q"},
          {"matrix3", "3x3 matrices, eps_A = trace, C = Q"},
          {"group_z2", "group algebra of Z/2 as a one-object groupoid (uncoloured)"},
          {"groupoid_pair", "two objects a,b with trivial vertex group (coloured)"},
          {"groupoid_pair_z2", "two objects a,b with vertex group Z/2 (coloured)"}};
}

KFA builtin_by_id(const std::string& id) {
  if (id == "matrix1") return builtin_matrix_example(1);
  if (id == "matrix2") return builtin_matrix_example(2);
  if (id == "matrix3") return builtin_matrix_example(3);
  if (id == "group_z2") return builtin_groupoid_example(Groupoid::cyclic({kNoColor}, 2));
  if (id == "groupoid_pair") return builtin_groupoid_example(Groupoid::cyclic({"a", "b"}, 1));
  if (id == "groupoid_pair_z2") return builtin_groupoid_example(Groupoid::cyclic({"a", "b"}, 2));
  throw std::invalid_argument("unknown builtin algebra '" + id + "'");
}

}  // namespace ocfa
