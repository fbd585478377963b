#include "ilpminer/discovery.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "ilpminer/error.hpp"

namespace ilpminer {

std::vector<RegionCandidate> dedupe_places(const std::vector<RegionCandidate>& regions) {
  std::vector<RegionCandidate> out;
  std::set<RegionCandidate> seen;
  for (const auto& r : regions) {
    if (seen.insert(r).second) out.push_back(r);
  }
  return out;
}

std::string place_name(const RegionCandidate& region, const Alphabet& alphabet) {
  auto names = [&](const std::vector<std::uint8_t>& v) {
    std::string s = "{";
    bool first = true;
    for (std::size_t a = 0; a < v.size(); ++a) {
      if (!v[a]) continue;
      if (!first) s += ',';
      first = false;
      s += alphabet[a];
    }
    return s + "}";
  };
  return std::string(region.m ? "m" : "") + "(" + names(region.x) + "," + names(region.y) + ")";
}

namespace {

std::vector<Solution> solve_all(const IlpSolver& solver, const std::vector<IlpInstance>& instances, bool parallel) {
  std::vector<Solution> out(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      try {
        out[i] = solver.solve(instances[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers =
      parallel ? std::min<std::size_t>(instances.size(), std::max(1U, std::thread::hardware_concurrency())) : 1;
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

DiscoveryResult discover_detailed(const EventLog& log, const DiscoveryOptions& options) {
  if (log.empty()) throw Error("cannot discover a model from an empty log");
  if (options.alpha && !(*options.alpha >= 0.0 && *options.alpha <= 1.0)) throw Error("alpha must lie in [0,1]");

  DiscoveryResult result;
  result.use_log = use_transform(log);
  const auto& use = result.use_log;
  result.causal = repair_for_path_property(build_causal_graph(use, options.dependency_threshold));

  const auto closure = prefix_closure(use);
  std::optional<RetainedSet> retained;
  if (options.alpha) {
    auto graph = std::make_shared<const SequenceEncodingGraph>(closure);
    result.kept = sef_bfs(*graph, make_kappa_max(*options.alpha));
    retained = retained_encodings(*graph, *result.kept);
    result.encoding_graph = std::move(graph);
  }
  result.system = std::make_shared<const ConstraintSystem>(build_constraint_system(closure, retained, options.objective));

  std::vector<IlpInstance> instances;
  for (const auto& [a, b] : result.causal.pairs()) instances.push_back(instantiate_causal_ilp(result.system, a, b));
  const BranchAndBoundSolver builtin;
  const IlpSolver& solver = options.solver ? *options.solver : builtin;
  const auto solutions = solve_all(solver, instances, options.parallel_pairs);

  const auto& alphabet = result.system->alphabet;
  std::map<RegionCandidate, std::size_t> place_of;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& pair = *instances[i].pair;
    result.pairs.push_back({pair, instances[i], solutions[i]});
    if (!solutions[i].optimal()) {
      if (!options.alpha) {
        throw Error("region ILP for causal pair (" + pair.first + "," + pair.second + ") is infeasible");
      }
      result.warnings.push_back("no place for causal pair (" + pair.first + "," + pair.second +
                                "): filtered ILP is infeasible");
      continue;
    }
    const auto region = RegionCandidate::from_assignment(solutions[i].assignment);
    auto [it, fresh] = place_of.emplace(region, result.places.size());
    if (fresh) result.places.push_back({"p:" + place_name(region, alphabet), region, {}});
    result.places[it->second].pairs.push_back(pair);
  }

  auto& net = result.net.net;
  std::vector<std::size_t> transition_of(alphabet.size());
  for (std::size_t a = 0; a < alphabet.size(); ++a) {
    const bool marker = alphabet[a] == use.start || alphabet[a] == use.end;
    transition_of[a] = net.add_transition("t:" + alphabet[a], marker ? std::nullopt : std::optional<Activity>(alphabet[a]));
  }
  result.net.source = net.add_place("p:source");
  result.net.sink = net.add_place("p:sink");
  net.add_input_arc(result.net.source, transition_of[alphabet.index_of(use.start)]);
  net.add_output_arc(transition_of[alphabet.index_of(use.end)], result.net.sink);
  for (const auto& place : result.places) {
    const auto p = net.add_place(place.id);
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      if (place.region.x[a]) net.add_output_arc(transition_of[a], p);
      if (place.region.y[a]) net.add_input_arc(p, transition_of[a]);
    }
  }
  return result;
}

WorkflowNet discover(const EventLog& log, const DiscoveryOptions& options) {
  return discover_detailed(log, options).net;
}

}  // namespace ilpminer
