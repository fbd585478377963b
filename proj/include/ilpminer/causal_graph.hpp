#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ilpminer/event_log.hpp"

namespace ilpminer {

using ActivityPair = std::pair<Activity, Activity>;
using DirectlyFollows = std::map<ActivityPair, std::uint64_t>;

/// Multiplicity-weighted count of adjacent (a, b) occurrences. Pairs that never
/// occur are absent.
DirectlyFollows directly_follows(const EventLog& log);

/// Heuristics-miner dependency (|a>b| - |b>a|) / (|a>b| + |b>a| + 1).
double dependency(std::uint64_t a_then_b, std::uint64_t b_then_a);
double dependency(const Activity& a, const Activity& b, const DirectlyFollows& df);

/// Causal relation over a USE log. `scores` keeps the dependency of every pair
/// with directly-follows contact (a>b > 0); `arcs` is the selected subset.
struct CausalGraph {
  std::set<Activity> vertices;
  std::map<ActivityPair, double> arcs;
  std::map<ActivityPair, double> scores;
  Activity start;
  Activity end;

  bool has_arc(const Activity& a, const Activity& b) const { return arcs.count({a, b}) != 0; }
  /// Arcs in lexicographic pair order.
  std::vector<ActivityPair> pairs() const;
};

CausalGraph build_causal_graph(const UseLog& log, double threshold);

struct PathReport {
  bool ok = true;
  /// Vertices not on any start -> end path.
  std::vector<Activity> off_path;
  /// Arcs entering `start` or leaving `end`.
  std::vector<ActivityPair> invariant_breaches;
};

PathReport validate_path_property(const CausalGraph& g);

/// Adds max-score arcs until every vertex lies on a start -> end path. Never
/// removes arcs. Throws Error naming a vertex that cannot be attached.
CausalGraph repair_for_path_property(CausalGraph g);

void write_dot(std::ostream& out, const CausalGraph& g);

}  // namespace ilpminer
