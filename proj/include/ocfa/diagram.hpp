#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocfa {

// colour label; the uncoloured theory uses the single colour "*"
using Color = std::string;
inline const Color kNoColor = "*";

enum class SegKind { Circle, Interval };

struct Segment {
  SegKind kind = SegKind::Circle;
  Color plus, minus;  // only for intervals

  static Segment circle() { return {}; }
  static Segment interval(Color a, Color b) { return {SegKind::Interval, std::move(a), std::move(b)}; }
  bool is_circle() const { return kind == SegKind::Circle; }
  bool is_interval() const { return kind == SegKind::Interval; }
  bool operator==(const Segment&) const = default;
  auto operator<=>(const Segment&) const = default;
  std::string str() const;
};

struct BoundaryObject {
  std::vector<Segment> segments;

  BoundaryObject() = default;
  BoundaryObject(std::vector<Segment> s) : segments(std::move(s)) {}
  size_t size() const { return segments.size(); }
  bool empty() const { return segments.empty(); }
  const Segment& operator[](size_t i) const { return segments[i]; }
  bool operator==(const BoundaryObject&) const = default;
  size_t count_intervals() const;
  size_t count_circles() const;
  // "(1,0,1)" with 1 = interval, 0 = circle
  std::string kinds_str() const;
  std::string str() const;
};

BoundaryObject concat(const BoundaryObject& a, const BoundaryObject& b);

enum class Gen { MultA, EtaA, ComultA, EpsA, MultC, EtaC, ComultC, EpsC, Zipper, Cozipper, Cross };

const char* gen_name(Gen g);

struct Generator {
  Gen kind = Gen::MultC;
  // colour parameters: MultA/ComultA use all three, EtaA/EpsA/Zipper/Cozipper use c[0]
  std::array<Color, 3> c;
  // strand types for Cross
  Segment x, y;

  static Generator mult_a(Color a, Color b, Color cc) { return {Gen::MultA, {a, b, cc}, {}, {}}; }
  static Generator comult_a(Color a, Color b, Color cc) { return {Gen::ComultA, {a, b, cc}, {}, {}}; }
  static Generator eta_a(Color a) { return {Gen::EtaA, {a, "", ""}, {}, {}}; }
  static Generator eps_a(Color a) { return {Gen::EpsA, {a, "", ""}, {}, {}}; }
  static Generator zip(Color a) { return {Gen::Zipper, {a, "", ""}, {}, {}}; }
  static Generator cozip(Color a) { return {Gen::Cozipper, {a, "", ""}, {}, {}}; }
  static Generator closed(Gen k) { return {k, {}, {}, {}}; }
  static Generator cross(Segment x, Segment y) { return {Gen::Cross, {}, std::move(x), std::move(y)}; }

  BoundaryObject source() const;
  BoundaryObject target() const;
  size_t n_in() const;
  size_t n_out() const;
  Segment in_seg(size_t i) const;
  Segment out_seg(size_t i) const;
  bool operator==(const Generator&) const = default;
  std::string str() const;  // dsl atom text
};

struct Factor {
  bool identity = false;
  Segment seg;    // identity strand
  Generator gen;  // otherwise

  static Factor id(Segment s) { return {true, std::move(s), {}}; }
  static Factor of(Generator g) { return {false, {}, std::move(g)}; }
  BoundaryObject source() const;
  BoundaryObject target() const;
};

struct Slice {
  std::vector<Factor> factors;
  BoundaryObject source() const;
  BoundaryObject target() const;
};

struct DiagramTerm {
  BoundaryObject source, target;
  std::vector<Slice> slices;

  static DiagramTerm identity(const BoundaryObject& obj);
  static DiagramTerm of(const Generator& g);
  size_t generator_count() const;  // excluding crossings
};

struct TypeMismatch : std::runtime_error {
  size_t slice;     // index of the slice whose source disagrees (slices.size() for the target)
  size_t position;  // 1-based segment position
  Segment expected, found;
  TypeMismatch(size_t sl, size_t pos, Segment e, Segment f, const std::string& what);
};

struct TypingReport {
  bool ok = true;
  std::string message;
  size_t slice = 0, position = 0;
  BoundaryObject source, target;
  std::vector<BoundaryObject> interfaces;  // interface i sits above slice i
};

TypingReport validate(const DiagramTerm& t);
DiagramTerm compose(const DiagramTerm& f, const DiagramTerm& g);  // g after f
DiagramTerm tensor(const DiagramTerm& f, const DiagramTerm& g);
bool syntactic_eq(const DiagramTerm& f, const DiagramTerm& g);

}  // namespace ocfa
