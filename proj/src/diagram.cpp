#include "ocfa/diagram.hpp"

#include <sstream>

namespace ocfa {

std::string Segment::str() const {
  if (is_circle()) return "O";
  return "I[" + plus + "," + minus + "]";
}

size_t BoundaryObject::count_intervals() const {
  size_t n = 0;
  for (auto& s : segments) n += s.is_interval();
  return n;
}

size_t BoundaryObject::count_circles() const { return size() - count_intervals(); }

std::string BoundaryObject::kinds_str() const {
  std::string out = "(";
  for (size_t i = 0; i < size(); ++i) {
    if (i) out += ",";
    out += segments[i].is_interval() ? "1" : "0";
  }
  return out + ")";
}

std::string BoundaryObject::str() const {
  std::string out;
  for (size_t i = 0; i < size(); ++i) {
    if (i) out += ",";
    out += segments[i].str();
  }
  return out;
}

BoundaryObject concat(const BoundaryObject& a, const BoundaryObject& b) {
  BoundaryObject r = a;
  r.segments.insert(r.segments.end(), b.segments.begin(), b.segments.end());
  return r;
}

const char* gen_name(Gen g) {
  switch (g) {
    case Gen::MultA: return "mu_A";
    case Gen::EtaA: return "eta_A";
    case Gen::ComultA: return "Delta_A";
    case Gen::EpsA: return "eps_A";
    case Gen::MultC: return "mu_C";
    case Gen::EtaC: return "eta_C";
    case Gen::ComultC: return "Delta_C";
    case Gen::EpsC: return "eps_C";
    case Gen::Zipper: return "zip";
    case Gen::Cozipper: return "cozip";
    case Gen::Cross: return "cross";
  }
  return "?";
}

static Segment iv(const Color& a, const Color& b) { return Segment::interval(a, b); }

BoundaryObject Generator::source() const {
  switch (kind) {
    case Gen::MultA: return {{iv(c[0], c[1]), iv(c[1], c[2])}};
    case Gen::ComultA: return {{iv(c[0], c[2])}};
    case Gen::EpsA: return {{iv(c[0], c[0])}};
    case Gen::Cozipper: return {{iv(c[0], c[0])}};
    case Gen::MultC: return {{Segment::circle(), Segment::circle()}};
    case Gen::ComultC: return {{Segment::circle()}};
    case Gen::EpsC: return {{Segment::circle()}};
    case Gen::Zipper: return {{Segment::circle()}};
    case Gen::EtaA:
    case Gen::EtaC: return {};
    case Gen::Cross: return {{x, y}};
  }
  return {};
}

BoundaryObject Generator::target() const {
  switch (kind) {
    case Gen::MultA: return {{iv(c[0], c[2])}};
    case Gen::ComultA: return {{iv(c[0], c[1]), iv(c[1], c[2])}};
    case Gen::EtaA: return {{iv(c[0], c[0])}};
    case Gen::Zipper: return {{iv(c[0], c[0])}};
    case Gen::MultC: return {{Segment::circle()}};
    case Gen::ComultC: return {{Segment::circle(), Segment::circle()}};
    case Gen::EtaC: return {{Segment::circle()}};
    case Gen::Cozipper: return {{Segment::circle()}};
    case Gen::EpsA:
    case Gen::EpsC: return {};
    case Gen::Cross: return {{y, x}};
  }
  return {};
}

size_t Generator::n_in() const {
  switch (kind) {
    case Gen::MultA: case Gen::MultC: case Gen::Cross: return 2;
    case Gen::EtaA: case Gen::EtaC: return 0;
    default: return 1;
  }
}

size_t Generator::n_out() const {
  switch (kind) {
    case Gen::ComultA: case Gen::ComultC: case Gen::Cross: return 2;
    case Gen::EpsA: case Gen::EpsC: return 0;
    default: return 1;
  }
}

Segment Generator::in_seg(size_t i) const { return source().segments.at(i); }
Segment Generator::out_seg(size_t i) const { return target().segments.at(i); }

std::string Generator::str() const {
  std::string name = gen_name(kind);
  switch (kind) {
    case Gen::MultA:
    case Gen::ComultA: return name + "[" + c[0] + "," + c[1] + "," + c[2] + "]";
    case Gen::EtaA:
    case Gen::EpsA:
    case Gen::Zipper:
    case Gen::Cozipper: return name + "[" + c[0] + "]";
    case Gen::Cross: return "cross(" + x.str() + "," + y.str() + ")";
    default: return name;
  }
}

BoundaryObject Factor::source() const { return identity ? BoundaryObject{{seg}} : gen.source(); }
BoundaryObject Factor::target() const { return identity ? BoundaryObject{{seg}} : gen.target(); }

BoundaryObject Slice::source() const {
  BoundaryObject r;
  for (auto& f : factors) r = concat(r, f.source());
  return r;
}

BoundaryObject Slice::target() const {
  BoundaryObject r;
  for (auto& f : factors) r = concat(r, f.target());
  return r;
}

DiagramTerm DiagramTerm::identity(const BoundaryObject& obj) { return {obj, obj, {}}; }

DiagramTerm DiagramTerm::of(const Generator& g) {
  return {g.source(), g.target(), {Slice{{Factor::of(g)}}}};
}

size_t DiagramTerm::generator_count() const {
  size_t n = 0;
  for (auto& s : slices)
    for (auto& f : s.factors) n += !f.identity && f.gen.kind != Gen::Cross;
  return n;
}

TypeMismatch::TypeMismatch(size_t sl, size_t pos, Segment e, Segment f, const std::string& what)
    : std::runtime_error(what), slice(sl), position(pos), expected(std::move(e)), found(std::move(f)) {}

// first differing position (1-based), 0 if equal
static size_t first_mismatch(const BoundaryObject& a, const BoundaryObject& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    if (!(a[i] == b[i])) return i + 1;
  if (a.size() != b.size()) return n + 1;
  return 0;
}

static Segment seg_or_none(const BoundaryObject& o, size_t pos) {
  return pos >= 1 && pos <= o.size() ? o[pos - 1] : Segment{SegKind::Circle, "none", "none"};
}

static std::string describe(const Segment& s) {
  return s.plus == "none" ? std::string("nothing") : s.str();
}

TypingReport validate(const DiagramTerm& t) {
  TypingReport rep;
  rep.source = t.source;
  rep.target = t.target;
  BoundaryObject cur = t.source;
  for (size_t i = 0; i <= t.slices.size(); ++i) {
    BoundaryObject want = i < t.slices.size() ? t.slices[i].source() : t.target;
    rep.interfaces.push_back(cur);
    if (size_t p = first_mismatch(cur, want)) {
      rep.ok = false;
      rep.slice = i;
      rep.position = p;
      std::ostringstream os;
      if (i < t.slices.size())
        os << "slice " << i + 1 << ": ";
      else
        os << "declared target: ";
      os << "position " << p << " expected " << describe(seg_or_none(want, p)) << ", found "
         << describe(seg_or_none(cur, p));
      rep.message = os.str();
      return rep;
    }
    if (i < t.slices.size()) cur = t.slices[i].target();
  }
  rep.message = "ok";
  return rep;
}

DiagramTerm compose(const DiagramTerm& f, const DiagramTerm& g) {
  if (size_t p = first_mismatch(f.target, g.source)) {
    Segment e = seg_or_none(g.source, p), fd = seg_or_none(f.target, p);
    throw TypeMismatch(f.slices.size(), p, e, fd,
                       "type mismatch at position " + std::to_string(p) + ": expected " + describe(e) +
                           ", found " + describe(fd));
  }
  DiagramTerm r{f.source, g.target, f.slices};
  r.slices.insert(r.slices.end(), g.slices.begin(), g.slices.end());
  return r;
}

DiagramTerm tensor(const DiagramTerm& f, const DiagramTerm& g) {
  DiagramTerm r{concat(f.source, g.source), concat(f.target, g.target), {}};
  size_t n = std::max(f.slices.size(), g.slices.size());
  for (size_t i = 0; i < n; ++i) {
    Slice s;
    auto pad = [&](const DiagramTerm& t) {
      if (i < t.slices.size()) {
        s.factors.insert(s.factors.end(), t.slices[i].factors.begin(), t.slices[i].factors.end());
      } else {
        for (auto& seg : t.target.segments) s.factors.push_back(Factor::id(seg));
      }
    };
    pad(f);
    pad(g);
    r.slices.push_back(std::move(s));
  }
  return r;
}

}  // namespace ocfa
