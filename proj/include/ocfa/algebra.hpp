#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocfa/diagram.hpp"

namespace ocfa {

using Rational = mpq_class;

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownColor : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedAlgebra : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// bound on the (dense) source and target spaces of an evaluation
constexpr size_t kDimensionCap = 4096;

struct LinearMap {
  size_t rows = 0, cols = 0;
  std::vector<Rational> a;  // row-major

  LinearMap() = default;
  LinearMap(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}
  Rational& at(size_t r, size_t c) { return a[r * cols + c]; }
  const Rational& at(size_t r, size_t c) const { return a[r * cols + c]; }
  static LinearMap identity(size_t n);
  bool operator==(const LinearMap& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
  std::string str() const;
};

LinearMap matmul(const LinearMap& a, const LinearMap& b);  // a after b
LinearMap kron(const LinearMap& a, const LinearMap& b);    // left factor major
LinearMap swap_map(size_t d1, size_t d2);                  // x (x) y -> y (x) x
std::vector<Rational> column(const LinearMap& m, size_t c);
LinearMap invert(const LinearMap& m);                      // throws MalformedAlgebra when singular

// Structure constants for an S-coloured knowledgeable Frobenius algebra. The uncoloured case is S = {"*"}.
// Basis of a tensor product: index(x1,...,xk) = ((x1*d2 + x2)*d3 + ...), left factor major.
struct KnowledgeableFrobeniusAlgebra {
  std::string name;
  std::vector<Color> colors;
  std::map<std::pair<Color, Color>, size_t> dimA;
  size_t dimC = 0;
  std::map<std::array<Color, 3>, LinearMap> mu, delta;
  std::map<Color, LinearMap> eta, eps, zip, cozip;
  LinearMap muC, etaC, deltaC, epsC;
  bool verified = false;

  size_t dim(const Segment& s) const;
  size_t dim_a(const Color& a, const Color& b) const;
  const LinearMap& map_for(const Generator& g) const;
};

using KFA = KnowledgeableFrobeniusAlgebra;

struct AxiomResult {
  std::string name;
  bool pass = true;
  size_t witness = 0;  // basis vector of the source where the two sides differ
  std::vector<Rational> lhs, rhs;
};

struct AxiomReport {
  std::vector<AxiomResult> results;
  bool all_pass() const;
  std::vector<const AxiomResult*> failures() const;
  std::string json(int indent = 2) const;
  std::string text() const;
};

AxiomReport check_axioms(const KFA& alg);

// sparse evaluation; columns indexed by source basis
struct SparseMap {
  size_t rows = 0, cols = 0;
  std::vector<std::vector<std::pair<size_t, Rational>>> col;  // sorted by row
  bool operator==(const SparseMap& o) const { return rows == o.rows && cols == o.cols && col == o.col; }
  LinearMap dense() const;
};

SparseMap evaluate_sparse(const DiagramTerm& t, const KFA& alg);
LinearMap evaluate(const DiagramTerm& t, const KFA& alg);

// derive the comultiplications from mu and the counits by inverting the pairing Gram matrices
void derive_comultiplications(KFA& alg);

KFA builtin_matrix_example(int n, const Rational& closed_counit = 1);

// connected groupoid: the given objects, every hom-set a copy of a finite vertex group
struct Groupoid {
  std::vector<Color> objects;
  std::vector<std::vector<int>> table;  // group multiplication table, element 0 is the unit
  static Groupoid cyclic(std::vector<Color> objects, int order);
};

KFA builtin_groupoid_example(const Groupoid& g, const Rational& open_counit = 1);

struct BuiltinAlgebra {
  std::string id, description;
};
std::vector<BuiltinAlgebra> builtin_algebras();
KFA builtin_by_id(const std::string& id);

KFA read_kfa(const std::string& text);
std::string write_kfa(const KFA& alg);

}  // namespace ocfa
