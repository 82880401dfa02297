#include <sstream>

#include "ocfa/algebra.hpp"

namespace ocfa {

// .kfa text format, one statement per line, '#' comments, 0-based basis indices:
//   algebra <name>
//   colors a b                  (omitted for the uncoloured theory)
//   dim A[a,b] = 2              (uncoloured: dim A = 4)
//   dim C = 1
//   mu_A[a,b,c] (i,j,k) = p/q   inputs i,j, output k
//   Delta_A[a,b,c] (i,j,k) = .. input i, outputs j,k
//   eta_A[a] (k) = ..   eps_A[a] (i) = ..
//   zip[a] (i,k) = ..   cozip[a] (i,k) = ..
//   mu_C (i,j,k)  Delta_C (i,j,k)  eta_C (k)  eps_C (i)
//   derive comultiplications    fill Delta_A and Delta_C from mu and the counits

namespace {

struct LineError : MalformedAlgebra {
  LineError(size_t line, const std::string& m) : MalformedAlgebra("line " + std::to_string(line) + ": " + m) {}
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> r;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      r.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  r.push_back(trim(cur));
  return r;
}

}  // namespace

KFA read_kfa(const std::string& text) {
  KFA A;
  A.name = "algebra";
  struct Entry {
    size_t line;
    std::string map;
    std::vector<Color> cs;
    std::vector<size_t> idx;
    Rational v;
  };
  std::vector<Entry> entries;
  bool derive = false;
  std::istringstream in(text);
  std::string raw;
  size_t ln = 0;
  bool colored = false;
  while (std::getline(in, raw)) {
    ++ln;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "algebra") {
      ls >> A.name;
    } else if (head == "colors") {
      std::string rest;
      std::getline(ls, rest);
      for (char& c : rest)
        if (c == ',') c = ' ';
      std::istringstream cs(rest);
      std::string c;
      while (cs >> c) A.colors.push_back(c);
      colored = true;
    } else if (head == "derive") {
      derive = true;
    } else if (head == "dim") {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw LineError(ln, "expected '='");
      std::string lhs = trim(line.substr(3, eq - 3));
      size_t d = std::stoul(trim(line.substr(eq + 1)));
      if (lhs == "C") {
        A.dimC = d;
      } else if (lhs == "A") {
        A.dimA[{kNoColor, kNoColor}] = d;
      } else if (lhs.rfind("A[", 0) == 0 && lhs.back() == ']') {
        auto cs = split(lhs.substr(2, lhs.size() - 3), ',');
        if (cs.size() != 2) throw LineError(ln, "A[...] takes two colours");
        A.dimA[{cs[0], cs[1]}] = d;
      } else {
        throw LineError(ln, "unknown space '" + lhs + "'");
      }
    } else {
      auto eq = line.find('='), lp = line.find('('), rp = line.find(')');
      if (eq == std::string::npos || lp == std::string::npos || rp == std::string::npos || rp < lp)
        throw LineError(ln, "expected map (indices) = value");
      Entry e;
      e.line = ln;
      std::string name = trim(line.substr(0, lp));
      auto lb = name.find('[');
      if (lb != std::string::npos) {
        if (name.back() != ']') throw LineError(ln, "unterminated colour list");
        e.cs = split(name.substr(lb + 1, name.size() - lb - 2), ',');
        name = name.substr(0, lb);
      }
      e.map = name;
      for (auto& s : split(line.substr(lp + 1, rp - lp - 1), ',')) e.idx.push_back(std::stoul(s));
      try {
        e.v = Rational(trim(line.substr(eq + 1)));
        e.v.canonicalize();
      } catch (const std::exception&) {
        throw LineError(ln, "bad rational");
      }
      entries.push_back(e);
    }
  }
  if (!colored) A.colors = {kNoColor};
  auto zero = [](size_t r, size_t c) { return LinearMap(r, c); };
  for (auto& a : A.colors) {
    size_t daa = A.dim_a(a, a);
    A.eta[a] = zero(daa, 1);
    A.eps[a] = zero(1, daa);
    A.zip[a] = zero(daa, A.dimC);
    A.cozip[a] = zero(A.dimC, daa);
    for (auto& b : A.colors)
      for (auto& c : A.colors) {
        A.mu[{a, b, c}] = zero(A.dim_a(a, c), A.dim_a(a, b) * A.dim_a(b, c));
        A.delta[{a, b, c}] = zero(A.dim_a(a, b) * A.dim_a(b, c), A.dim_a(a, c));
      }
  }
  size_t C = A.dimC;
  A.muC = zero(C, C * C);
  A.etaC = zero(C, 1);
  A.deltaC = zero(C * C, C);
  A.epsC = zero(1, C);
  for (auto& e : entries) {
    auto col = [&](size_t i) -> const Color& {
      if (!colored) return kNoColor;
      if (i >= e.cs.size()) throw LineError(e.line, "missing colour argument");
      return e.cs[i];
    };
    auto need = [&](size_t k) {
      if (e.idx.size() != k) throw LineError(e.line, e.map + " takes " + std::to_string(k) + " indices");
    };
    auto set = [&](LinearMap& m, size_t r, size_t c) {
      if (r >= m.rows || c >= m.cols) throw LineError(e.line, "index out of range");
      m.at(r, c) = e.v;
    };
    auto find1 = [&](std::map<Color, LinearMap>& m) -> LinearMap& {
      auto it = m.find(col(0));
      if (it == m.end()) throw LineError(e.line, "unknown colour");
      return it->second;
    };
    auto find3 = [&](std::map<std::array<Color, 3>, LinearMap>& m) -> LinearMap& {
      auto it = m.find({col(0), col(1), col(2)});
      if (it == m.end()) throw LineError(e.line, "unknown colour");
      return it->second;
    };
    if (e.map == "mu_A") {
      need(3);
      size_t d2 = A.dim_a(col(1), col(2));
      set(find3(A.mu), e.idx[2], e.idx[0] * d2 + e.idx[1]);
    } else if (e.map == "Delta_A") {
      need(3);
      size_t d2 = A.dim_a(col(1), col(2));
      set(find3(A.delta), e.idx[1] * d2 + e.idx[2], e.idx[0]);
    } else if (e.map == "eta_A") {
      need(1);
      set(find1(A.eta), e.idx[0], 0);
    } else if (e.map == "eps_A") {
      need(1);
      set(find1(A.eps), 0, e.idx[0]);
    } else if (e.map == "zip") {
      need(2);
      set(find1(A.zip), e.idx[1], e.idx[0]);
    } else if (e.map == "cozip") {
      need(2);
      set(find1(A.cozip), e.idx[1], e.idx[0]);
    } else if (e.map == "mu_C") {
      need(3);
      set(A.muC, e.idx[2], e.idx[0] * C + e.idx[1]);
    } else if (e.map == "Delta_C") {
      need(3);
      set(A.deltaC, e.idx[1] * C + e.idx[2], e.idx[0]);
    } else if (e.map == "eta_C") {
      need(1);
      set(A.etaC, e.idx[0], 0);
    } else if (e.map == "eps_C") {
      need(1);
      set(A.epsC, 0, e.idx[0]);
    } else {
      throw LineError(e.line, "unknown structure map '" + e.map + "'");
    }
  }
  if (derive) derive_comultiplications(A);
  return A;
}

std::string write_kfa(const KFA& A) {
  std::ostringstream os;
  bool colored = !(A.colors.size() == 1 && A.colors[0] == kNoColor);
  os << "algebra " << A.name << "\n";
  if (colored) {
    os << "colors";
    for (auto& c : A.colors) os << " " << c;
    os << "\n";
  }
  for (auto& [k, d] : A.dimA) {
    if (colored)
      os << "dim A[" << k.first << "," << k.second << "] = " << d << "\n";
    else
      os << "dim A = " << d << "\n";
  }
  os << "dim C = " << A.dimC << "\n";
  auto tag = [&](std::initializer_list<Color> cs) {
    if (!colored) return std::string();
    std::string s = "[";
    bool first = true;
    for (auto& c : cs) s += (first ? "" : ",") + c, first = false;
    return s + "]";
  };
  for (auto& [k, m] : A.mu) {
    size_t d2 = A.dim_a(k[1], k[2]);
    for (size_t r = 0; r < m.rows; ++r)
      for (size_t c = 0; c < m.cols; ++c)
        if (sgn(m.at(r, c)))
          os << "mu_A" << tag({k[0], k[1], k[2]}) << " (" << c / d2 << "," << c % d2 << "," << r
             << ") = " << m.at(r, c).get_str() << "\n";
  }
  for (auto& [k, m] : A.delta) {
    size_t d2 = A.dim_a(k[1], k[2]);
    for (size_t r = 0; r < m.rows; ++r)
      for (size_t c = 0; c < m.cols; ++c)
        if (sgn(m.at(r, c)))
          os << "Delta_A" << tag({k[0], k[1], k[2]}) << " (" << c << "," << r / d2 << "," << r % d2
             << ") = " << m.at(r, c).get_str() << "\n";
  }
  auto unary = [&](const std::string& name, const std::map<Color, LinearMap>& ms, bool out_only, bool in_only) {
    for (auto& [a, m] : ms)
      for (size_t r = 0; r < m.rows; ++r)
        for (size_t c = 0; c < m.cols; ++c) {
          if (!sgn(m.at(r, c))) continue;
          os << name << tag({a}) << " (";
          if (out_only)
            os << r;
          else if (in_only)
            os << c;
          else
            os << c << "," << r;
          os << ") = " << m.at(r, c).get_str() << "\n";
        }
  };
  unary("eta_A", A.eta, true, false);
  unary("eps_A", A.eps, false, true);
  unary("zip", A.zip, false, false);
  unary("cozip", A.cozip, false, false);
  size_t C = A.dimC;
  for (size_t r = 0; r < A.muC.rows; ++r)
    for (size_t c = 0; c < A.muC.cols; ++c)
      if (sgn(A.muC.at(r, c))) os << "mu_C (" << c / C << "," << c % C << "," << r << ") = " << A.muC.at(r, c).get_str() << "\n";
  for (size_t r = 0; r < A.deltaC.rows; ++r)
    for (size_t c = 0; c < A.deltaC.cols; ++c)
      if (sgn(A.deltaC.at(r, c)))
        os << "Delta_C (" << c << "," << r / C << "," << r % C << ") = " << A.deltaC.at(r, c).get_str() << "\n";
  for (size_t r = 0; r < C; ++r)
    if (sgn(A.etaC.at(r, 0))) os << "eta_C (" << r << ") = " << A.etaC.at(r, 0).get_str() << "\n";
  for (size_t c = 0; c < C; ++c)
    if (sgn(A.epsC.at(0, c))) os << "eps_C (" << c << ") = " << A.epsC.at(0, c).get_str() << "\n";
  return os.str();
}

}  // namespace ocfa
