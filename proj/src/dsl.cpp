#include "ocfa/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace ocfa {

ParseError::ParseError(ParseErrorKind k, SourceSpan s, const std::string& msg)
    : std::runtime_error(std::to_string(s.line) + ":" + std::to_string(s.column) + ": " + msg), kind(k), span(s) {}

namespace {

bool word_char(char c) { return std::isalnum((unsigned char)c) || c == '_' || c == '*'; }

class Parser {
 public:
  Parser(const std::string& text, const ColorSet& cs) : s_(text), cs_(cs) {}

  DiagramTerm run() {
    skip_seps();
    SourceSpan kw = here();
    std::string w = peek_word();
    std::vector<Color> declared;
    if (w == "colors") {
      word();
      while (true) {
        skip_blank();
        if (at_sep()) break;
        if (peek() == ',') {
          ++pos_, ++col_;
          continue;
        }
        SourceSpan sp = here();
        std::string c = word();
        if (c.empty()) fail(ParseErrorKind::Syntax, sp, "expected a colour name");
        declared.push_back(c);
      }
      skip_seps();
      kw = here();
      w = peek_word();
    }
    setup_colors(declared, kw);
    if (w != "source") fail(ParseErrorKind::Syntax, kw, "expected 'source'");
    word();
    BoundaryObject src = object();
    DiagramTerm t = DiagramTerm::identity(src);
    while (true) {
      skip_seps();
      if (pos_ >= s_.size()) break;
      t = row(t);
    }
    return t;
  }

 private:
  const std::string& s_;
  const ColorSet& cs_;
  size_t pos_ = 0, line_ = 1, col_ = 1;
  std::set<Color> palette_;
  bool colored_ = false;

  [[noreturn]] void fail(ParseErrorKind k, SourceSpan sp, const std::string& msg) { throw ParseError(k, sp, msg); }

  SourceSpan here(size_t len = 1) const { return {line_, col_, len}; }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_blank() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_, ++col_;
      } else if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_, ++col_;
      } else {
        break;
      }
    }
  }

  bool at_sep() {
    skip_blank();
    return pos_ >= s_.size() || s_[pos_] == ';' || s_[pos_] == '\n';
  }

  void skip_seps() {
    while (true) {
      skip_blank();
      if (pos_ < s_.size() && s_[pos_] == ';') {
        ++pos_, ++col_;
      } else if (pos_ < s_.size() && s_[pos_] == '\n') {
        ++pos_, ++line_, col_ = 1;
      } else {
        break;
      }
    }
  }

  std::string peek_word() {
    skip_blank();
    size_t e = pos_;
    while (e < s_.size() && word_char(s_[e])) ++e;
    return s_.substr(pos_, e - pos_);
  }

  std::string word() {
    std::string w = peek_word();
    pos_ += w.size(), col_ += w.size();
    return w;
  }

  void expect(char c) {
    skip_blank();
    if (peek() != c) fail(ParseErrorKind::Syntax, here(), std::string("expected '") + c + "'");
    ++pos_, ++col_;
  }

  bool accept(char c) {
    skip_blank();
    if (peek() != c) return false;
    ++pos_, ++col_;
    return true;
  }

  void setup_colors(const std::vector<Color>& declared, SourceSpan sp) {
    if (cs_.any) {
      colored_ = true;
      return;
    }
    if (!cs_.names.empty()) {
      palette_.insert(cs_.names.begin(), cs_.names.end());
      for (auto& c : declared)
        if (!palette_.count(c)) fail(ParseErrorKind::UnknownColor, sp, "unknown colour '" + c + "'");
    } else if (!declared.empty()) {
      palette_.insert(declared.begin(), declared.end());
    } else {
      palette_.insert(kNoColor);
    }
    colored_ = !(palette_.size() == 1 && *palette_.begin() == kNoColor);
  }

  Color color() {
    skip_blank();
    SourceSpan sp = here();
    std::string c = word();
    if (c.empty()) fail(ParseErrorKind::Syntax, sp, "expected a colour");
    sp.length = c.size();
    if (!cs_.any && !palette_.count(c)) fail(ParseErrorKind::UnknownColor, sp, "unknown colour '" + c + "'");
    return c;
  }

  // bracketed colour list of the given arity; omitted brackets mean the uncoloured label
  std::vector<Color> colors(size_t lo, size_t hi, const std::string& what) {
    skip_blank();
    SourceSpan sp = here();
    if (peek() != '[') {
      if (colored_ && hi > 0) fail(ParseErrorKind::Syntax, sp, what + " needs colour arguments");
      return std::vector<Color>(hi, kNoColor);
    }
    ++pos_, ++col_;
    std::vector<Color> r;
    if (!accept(']')) {
      do r.push_back(color());
      while (accept(','));
      expect(']');
    }
    if (r.size() < lo || r.size() > hi)
      fail(ParseErrorKind::Syntax, sp, what + " takes " + std::to_string(hi) + " colour arguments");
    return r;
  }

  Segment segment() {
    skip_blank();
    SourceSpan sp = here();
    std::string w = word();
    if (w == "O") return Segment::circle();
    if (w == "I") {
      auto c = colors(2, 2, "interval");
      return Segment::interval(c[0], c[1]);
    }
    fail(ParseErrorKind::Syntax, sp, "expected O or I");
  }

  BoundaryObject object() {
    BoundaryObject o;
    skip_blank();
    if (accept('(')) {
      expect(')');
      return o;
    }
    if (at_sep()) return o;
    do o.segments.push_back(segment());
    while (accept(','));
    if (!at_sep()) fail(ParseErrorKind::Syntax, here(), "unexpected text after boundary object");
    return o;
  }

  DiagramTerm chain(std::initializer_list<DiagramTerm> parts) {
    auto it = parts.begin();
    DiagramTerm t = *it++;
    for (; it != parts.end(); ++it) t = compose(t, *it);
    return t;
  }

  static DiagramTerm gen(const Generator& g) { return DiagramTerm::of(g); }
  static DiagramTerm id(const Segment& s) { return DiagramTerm::identity({{s}}); }

  DiagramTerm atom(SourceSpan& sp) {
    skip_blank();
    sp = here();
    size_t start = pos_;
    std::string w = word();
    DiagramTerm t;
    if (w == "id") {
      expect(':');
      t = id(segment());
    } else if (w == "mu_A" || w == "Delta_A") {
      auto c = colors(3, 3, w);
      t = gen(w == "mu_A" ? Generator::mult_a(c[0], c[1], c[2]) : Generator::comult_a(c[0], c[1], c[2]));
    } else if (w == "eta_A" || w == "eps_A" || w == "zip" || w == "cozip") {
      auto c = colors(1, 1, w);
      Generator g = w == "eta_A" ? Generator::eta_a(c[0])
                    : w == "eps_A" ? Generator::eps_a(c[0])
                    : w == "zip"   ? Generator::zip(c[0])
                                   : Generator::cozip(c[0]);
      t = gen(g);
    } else if (w == "mu_C") {
      t = gen(Generator::closed(Gen::MultC));
    } else if (w == "eta_C") {
      t = gen(Generator::closed(Gen::EtaC));
    } else if (w == "Delta_C") {
      t = gen(Generator::closed(Gen::ComultC));
    } else if (w == "eps_C") {
      t = gen(Generator::closed(Gen::EpsC));
    } else if (w == "cross") {
      expect('(');
      Segment x = segment();
      expect(',');
      Segment y = segment();
      expect(')');
      t = gen(Generator::cross(x, y));
    } else if (w == "saddle_x" || w == "saddle_y") {
      auto c = colors(4, 4, w);
      auto &p = c[0], &q = c[1], &r = c[2], &s = c[3];
      Segment A = Segment::interval(p, q), B = Segment::interval(r, s);
      if (w == "saddle_x")
        t = chain({tensor(gen(Generator::comult_a(p, r, q)), id(B)),
                   tensor(id(Segment::interval(p, r)), gen(Generator::cross(Segment::interval(r, q), B))),
                   tensor(gen(Generator::mult_a(p, r, s)), id(Segment::interval(r, q)))});
      else
        t = chain({tensor(id(A), gen(Generator::comult_a(r, q, s))),
                   tensor(gen(Generator::cross(A, Segment::interval(r, q))), id(Segment::interval(q, s))),
                   tensor(id(Segment::interval(r, q)), gen(Generator::mult_a(p, q, s)))});
    } else if (w == "saddle_zl" || w == "saddle_zr" || w == "saddle_cl" || w == "saddle_cr") {
      auto c = colors(2, 2, w);
      auto &a = c[0], &b = c[1];
      Segment ab = Segment::interval(a, b);
      if (w == "saddle_zl")
        t = chain({tensor(gen(Generator::zip(a)), id(ab)), gen(Generator::mult_a(a, a, b))});
      else if (w == "saddle_zr")
        t = chain({tensor(id(ab), gen(Generator::zip(b))), gen(Generator::mult_a(a, b, b))});
      else if (w == "saddle_cl")
        t = chain({gen(Generator::comult_a(a, a, b)), tensor(gen(Generator::cozip(a)), id(ab))});
      else
        t = chain({gen(Generator::comult_a(a, b, b)), tensor(id(ab), gen(Generator::cozip(b)))});
    } else if (w == "window_o") {
      auto c = colors(2, 3, w);
      if (c.size() == 2) c.push_back(c[0]);
      t = chain({gen(Generator::comult_a(c[0], c[1], c[2])), gen(Generator::mult_a(c[0], c[1], c[2]))});
    } else if (w == "window_c") {
      t = chain({gen(Generator::closed(Gen::ComultC)), gen(Generator::closed(Gen::MultC))});
    } else if (w == "window_w") {
      auto c = colors(1, 1, w);
      t = chain({gen(Generator::zip(c[0])), gen(Generator::cozip(c[0]))});
    } else {
      sp.length = std::max<size_t>(1, w.size());
      fail(ParseErrorKind::Syntax, sp, w.empty() ? "expected an atom" : "unknown atom '" + w + "'");
    }
    sp.length = pos_ - start;
    return t;
  }

  DiagramTerm row(const DiagramTerm& acc) {
    std::vector<std::pair<DiagramTerm, SourceSpan>> atoms;
    SourceSpan row_span = here();
    do {
      SourceSpan sp;
      DiagramTerm a = atom(sp);
      atoms.push_back({a, sp});
    } while (accept('|'));
    if (!at_sep()) fail(ParseErrorKind::Syntax, here(), "expected '|' or end of row");
    const auto& cur = acc.target.segments;
    DiagramTerm r = DiagramTerm::identity({});
    size_t cursor = 0;
    size_t index = 0;
    for (auto& [a, sp] : atoms) {
      ++index;
      const auto& need = a.source.segments;
      size_t p = cursor;
      if (!need.empty()) {
        while (p + need.size() <= cur.size() && !std::equal(need.begin(), need.end(), cur.begin() + p)) ++p;
        if (p + need.size() > cur.size()) {
          std::ostringstream os;
          os << "type error in row at line " << row_span.line << ", atom " << index << ": needs " << a.source.str()
             << " at or after position " << cursor + 1 << " of " << acc.target.str();
          fail(ParseErrorKind::Type, sp, os.str());
        }
      }
      r = tensor(r, DiagramTerm::identity({{cur.begin() + cursor, cur.begin() + p}}));
      r = tensor(r, a);
      cursor = p + need.size();
    }
    r = tensor(r, DiagramTerm::identity({{cur.begin() + cursor, cur.end()}}));
    return compose(acc, r);
  }
};

bool is_pure(const Slice& s, size_t& at) {
  size_t n = 0;
  for (size_t i = 0; i < s.factors.size(); ++i)
    if (!s.factors[i].identity) ++n, at = i;
  return n == 1;
}

}  // namespace

DiagramTerm parse(const std::string& text, const ColorSet& colors) {
  Parser p(text, colors);
  DiagramTerm t = p.run();
  auto rep = validate(t);
  if (!rep.ok) throw ParseError(ParseErrorKind::Type, {1, 1, 1}, rep.message);
  return t;
}

std::vector<Color> colors_of(const DiagramTerm& t) {
  std::set<Color> cs;
  auto seg = [&](const Segment& s) {
    if (s.is_interval()) cs.insert(s.plus), cs.insert(s.minus);
  };
  for (auto& s : t.source.segments) seg(s);
  for (auto& sl : t.slices)
    for (auto& f : sl.factors) {
      for (auto& s : f.source().segments) seg(s);
      for (auto& s : f.target().segments) seg(s);
    }
  return {cs.begin(), cs.end()};
}

std::string print(const DiagramTerm& t, const PrintOptions& opt) {
  auto cs = colors_of(t);
  bool colored = !(cs.empty() || (cs.size() == 1 && cs[0] == kNoColor));
  auto seg = [&](const Segment& s) { return colored ? s.str() : std::string(s.is_circle() ? "O" : "I"); };
  auto atom = [&](const Factor& f) -> std::string {
    if (f.identity) return "id:" + seg(f.seg);
    if (colored) return f.gen.str();
    if (f.gen.kind == Gen::Cross) return "cross(" + seg(f.gen.x) + "," + seg(f.gen.y) + ")";
    return gen_name(f.gen.kind);
  };
  std::ostringstream os;
  if (colored) {
    os << "colors ";
    for (size_t i = 0; i < cs.size(); ++i) os << (i ? "," : "") << cs[i];
    os << "\n";
  }
  os << "source ";
  if (t.source.empty()) os << "()";
  for (size_t i = 0; i < t.source.size(); ++i) os << (i ? "," : "") << seg(t.source[i]);
  os << "\n";
  for (size_t i = 0; i < t.slices.size(); ++i) {
    const Slice& s = t.slices[i];
    size_t a = 0, b = 0;
    if (opt.window_macro && i + 1 < t.slices.size() && is_pure(s, a) && is_pure(t.slices[i + 1], b) && a == b &&
        s.factors[a].gen.kind == Gen::Zipper && t.slices[i + 1].factors[b].gen.kind == Gen::Cozipper) {
      for (size_t k = 0; k < s.factors.size(); ++k) {
        if (k) os << " | ";
        if (k == a)
          os << (colored ? "window_w[" + s.factors[a].gen.c[0] + "]" : std::string("window_w"));
        else
          os << atom(s.factors[k]);
      }
      os << "\n";
      ++i;
      continue;
    }
    for (size_t k = 0; k < s.factors.size(); ++k) os << (k ? " | " : "") << atom(s.factors[k]);
    os << "\n";
  }
  return os.str();
}

}  // namespace ocfa
