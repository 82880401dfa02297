#include <set>
#include <sstream>

#include "ocfa/dsl.hpp"
#include "ocfa/rewrite.hpp"

namespace ocfa {

extern const char* const kRuleCatalogText;

namespace {

const std::set<std::string> kGroups = {"commFrobC", "symmFrobA", "zipHom", "knowledge", "cozipDual", "cardy", "derived"};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

void collect(const Segment& s, std::set<Color>& out) {
  if (s.is_interval()) out.insert(s.plus), out.insert(s.minus);
}

std::set<Color> vars_of(const DiagramTerm& t) {
  std::set<Color> v;
  for (auto& s : t.source.segments) collect(s, v);
  for (auto& s : t.target.segments) collect(s, v);
  for (auto& sl : t.slices)
    for (auto& f : sl.factors) {
      if (f.identity) {
        collect(f.seg, v);
        continue;
      }
      switch (f.gen.kind) {
        case Gen::MultA:
        case Gen::ComultA:
          v.insert(f.gen.c.begin(), f.gen.c.end());
          break;
        case Gen::EtaA:
        case Gen::EpsA:
        case Gen::Zipper:
        case Gen::Cozipper:
          v.insert(f.gen.c[0]);
          break;
        case Gen::Cross:
          collect(f.gen.x, v), collect(f.gen.y, v);
          break;
        default:
          break;
      }
    }
  return v;
}

// a side is either all pass-through strands or has no pass-through strand at all
void check_side(const Rule& r, const PortGraph& g, const char* which) {
  int through = 0;
  for (auto& d : g.src) through += d.node == kTarget;
  if (g.node_count() == 0) return;
  if (through) throw CatalogError("rule " + r.id + ": " + which + " mixes identity strands with generators");
}

}  // namespace

const Rule* RuleCatalog::find(const std::string& id) const {
  for (auto& r : rules)
    if (r.id == id) return &r;
  return nullptr;
}

const Rule& RuleCatalog::get(const std::string& id) const {
  if (auto* r = find(id)) return *r;
  throw CatalogError("unknown rule '" + id + "'");
}

RuleCatalog parse_catalog(const std::string& text) {
  RuleCatalog cat;
  std::istringstream in(text);
  std::string raw;
  size_t ln = 0;
  Rule* cur = nullptr;
  auto finish = [&]() {
    if (!cur) return;
    Rule& r = *cur;
    if (r.lhs_text.empty() || r.rhs_text.empty()) throw CatalogError("rule " + r.id + ": missing lhs or rhs");
    if (!kGroups.count(r.group)) throw CatalogError("rule " + r.id + ": unknown group '" + r.group + "'");
    if (r.anchor.empty()) throw CatalogError("rule " + r.id + ": missing anchor");
    ColorSet any;
    any.any = true;
    try {
      r.lhs_term = parse(r.lhs_text, any);
      r.rhs_term = parse(r.rhs_text, any);
    } catch (const std::exception& e) {
      throw CatalogError("rule " + r.id + ": " + e.what());
    }
    if (!(r.lhs_term.source == r.rhs_term.source) || !(r.lhs_term.target == r.rhs_term.target))
      throw CatalogError("rule " + r.id + ": sides have different boundaries " + r.lhs_term.source.str() + " -> " +
                         r.lhs_term.target.str() + " vs " + r.rhs_term.source.str() + " -> " + r.rhs_term.target.str());
    if (vars_of(r.lhs_term) != vars_of(r.rhs_term)) throw CatalogError("rule " + r.id + ": colour variables differ");
    r.lhs = to_port_graph(r.lhs_term);
    r.rhs = to_port_graph(r.rhs_term);
    if (r.lhs.node_count() == 0 && r.rhs.node_count() == 0) throw CatalogError("rule " + r.id + ": both sides empty");
    check_side(r, r.lhs, "lhs");
    check_side(r, r.rhs, "rhs");
    cur = nullptr;
  };
  while (std::getline(in, raw)) {
    ++ln;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      finish();
      if (line.back() != ']') throw CatalogError("line " + std::to_string(ln) + ": bad rule header");
      std::string id = trim(line.substr(1, line.size() - 2));
      if (id.empty() || cat.find(id)) throw CatalogError("line " + std::to_string(ln) + ": empty or duplicate id");
      cat.rules.push_back({});
      cur = &cat.rules.back();
      cur->id = id;
      continue;
    }
    auto eq = line.find('=');
    if (!cur || eq == std::string::npos) throw CatalogError("line " + std::to_string(ln) + ": expected key = value");
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (k == "group")
      cur->group = v;
    else if (k == "anchor")
      cur->anchor = v;
    else if (k == "lhs")
      cur->lhs_text = v;
    else if (k == "rhs")
      cur->rhs_text = v;
    else
      throw CatalogError("line " + std::to_string(ln) + ": unknown key '" + k + "'");
  }
  finish();
  return cat;
}

const RuleCatalog& default_catalog() {
  static const RuleCatalog cat = parse_catalog(kRuleCatalogText);
  return cat;
}

DiagramTerm instantiate(const DiagramTerm& t, const std::map<Color, Color>& b) {
  auto col = [&](const Color& c) {
    auto it = b.find(c);
    return it == b.end() ? c : it->second;
  };
  auto seg = [&](Segment s) {
    if (s.is_interval()) s.plus = col(s.plus), s.minus = col(s.minus);
    return s;
  };
  auto obj = [&](const BoundaryObject& o) {
    BoundaryObject r = o;
    for (auto& s : r.segments) s = seg(s);
    return r;
  };
  DiagramTerm r = t;
  r.source = obj(t.source);
  r.target = obj(t.target);
  for (auto& sl : r.slices)
    for (auto& f : sl.factors) {
      if (f.identity) {
        f.seg = seg(f.seg);
        continue;
      }
      for (auto& c : f.gen.c)
        if (!c.empty()) c = col(c);
      f.gen.x = seg(f.gen.x);
      f.gen.y = seg(f.gen.y);
    }
  return r;
}

std::vector<Color> pattern_variables(const Rule& r) {
  auto v = vars_of(r.lhs_term);
  return {v.begin(), v.end()};
}

}  // namespace ocfa
