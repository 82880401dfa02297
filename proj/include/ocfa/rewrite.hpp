#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocfa/diagram.hpp"
#include "ocfa/port_graph.hpp"

namespace ocfa {

struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StaleSite : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StrategyStuck : std::runtime_error {
  std::string reproducer;  // .ocd text of the input that got stuck
  StrategyStuck(const std::string& what, std::string repro) : std::runtime_error(what), reproducer(std::move(repro)) {}
};
struct TraceFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// colours in lhs/rhs are pattern variables
struct Rule {
  std::string id, group, anchor;
  std::string lhs_text, rhs_text;
  DiagramTerm lhs_term, rhs_term;
  PortGraph lhs, rhs;
};

class RuleCatalog {
 public:
  std::vector<Rule> rules;
  const Rule* find(const std::string& id) const;
  const Rule& get(const std::string& id) const;  // throws CatalogError
};

RuleCatalog parse_catalog(const std::string& text);
const RuleCatalog& default_catalog();

// substitute pattern variables
DiagramTerm instantiate(const DiagramTerm& t, const std::map<Color, Color>& binding);
std::vector<Color> pattern_variables(const Rule& r);

enum class Dir { LR, RL };
const char* dir_str(Dir d);

// image of the pattern: nodes[i] is the graph node for pattern node i (pattern ids in order);
// a pattern without nodes is a bundle of identity strands and is placed on wires instead
struct Site {
  std::vector<int> nodes;
  std::vector<Endpoint> wires;
  std::string anchor() const;
  static Site parse(const std::string& s);  // throws TraceFormatError
  bool operator==(const Site&) const = default;
  auto operator<=>(const Site&) const = default;
};

struct Move {
  std::string step;
  std::string rule;
  Dir dir = Dir::LR;
  Site site;
};

struct MoveTrace {
  DiagramTerm initial, final_term;
  std::vector<Move> moves;
};

// all convex occurrences, sorted by node ids; nodes flagged in `blocked` are never used
std::vector<Site> match_rule(const PortGraph& g, const Rule& r, Dir dir, const std::vector<char>* blocked = nullptr);
// occurrences whose image contains every node in `must`
std::vector<Site> sites_containing(const PortGraph& g, const Rule& r, Dir dir, const std::vector<int>& must,
                                   const std::vector<char>* blocked = nullptr);
bool site_matches(const PortGraph& g, const Rule& r, Dir dir, const Site& s);

// rewrite in place; returns ids of the created nodes in rhs pattern order. Throws StaleSite.
std::vector<int> apply_in_place(PortGraph& g, const Rule& r, Dir dir, const Site& s);
PortGraph apply(const PortGraph& g, const Move& m, const RuleCatalog& cat = default_catalog());

std::pair<DiagramTerm, MoveTrace> normalize_with_trace(const DiagramTerm& t);
PortGraph replay(const MoveTrace& tr, const RuleCatalog& cat = default_catalog());  // throws StaleSite
bool check_trace(const MoveTrace& tr, const RuleCatalog& cat = default_catalog());

std::string write_trace(const MoveTrace& tr);
MoveTrace read_trace(const std::string& text);

}  // namespace ocfa
