#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ilpminer/causal_graph.hpp"
#include "ilpminer/event_log.hpp"
#include "ilpminer/ilp.hpp"
#include "ilpminer/region_constraints.hpp"
#include "ilpminer/sequence_filter.hpp"
#include "ilpminer/workflow_net.hpp"

namespace ilpminer {

struct DiscoveryOptions {
  std::optional<double> alpha;  // nullopt disables the sequence-encoding filter
  double dependency_threshold = 0.9;
  std::shared_ptr<const IlpSolver> solver;  // null selects the built-in solver
  bool parallel_pairs = true;
  ObjectiveKind objective = ObjectiveKind::token_residency;
};

struct DiscoveredPlace {
  std::string id;
  RegionCandidate region;
  std::vector<ActivityPair> pairs;  // causal pairs whose ILP returned this region
};

struct PairOutcome {
  ActivityPair pair;
  IlpInstance instance;
  Solution solution;
};

struct DiscoveryResult {
  WorkflowNet net;
  UseLog use_log;
  CausalGraph causal;
  std::shared_ptr<const SequenceEncodingGraph> encoding_graph;
  std::optional<std::set<SequenceEncodingGraph::Vertex>> kept;  // set when filtering
  std::shared_ptr<const ConstraintSystem> system;
  std::vector<PairOutcome> pairs;  // sorted by pair
  std::vector<DiscoveredPlace> places;
  std::vector<std::string> warnings;
};

DiscoveryResult discover_detailed(const EventLog& log, const DiscoveryOptions& options = {});
WorkflowNet discover(const EventLog& log, const DiscoveryOptions& options = {});

/// Collapses identical (m, x, y) triples, keeping first occurrences in order.
std::vector<RegionCandidate> dedupe_places(const std::vector<RegionCandidate>& regions);

/// `({a,f},{d})`, prefixed by `m` when the place is initially marked.
std::string place_name(const RegionCandidate& region, const Alphabet& alphabet);

}  // namespace ilpminer
