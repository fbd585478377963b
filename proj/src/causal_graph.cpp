#include "ilpminer/causal_graph.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

#include "ilpminer/error.hpp"
#include "text_util.hpp"

namespace ilpminer {

DirectlyFollows directly_follows(const EventLog& log) {
  DirectlyFollows df;
  for (const auto& [trace, count] : log.traces()) {
    for (std::size_t i = 1; i < trace.size(); ++i) df[{trace[i - 1], trace[i]}] += count;
  }
  return df;
}

double dependency(std::uint64_t a_then_b, std::uint64_t b_then_a) {
  const auto ab = static_cast<double>(a_then_b);
  const auto ba = static_cast<double>(b_then_a);
  return (ab - ba) / (ab + ba + 1.0);
}

double dependency(const Activity& a, const Activity& b, const DirectlyFollows& df) {
  auto count = [&](const Activity& x, const Activity& y) -> std::uint64_t {
    auto it = df.find({x, y});
    return it == df.end() ? 0 : it->second;
  };
  return dependency(count(a, b), count(b, a));
}

std::vector<ActivityPair> CausalGraph::pairs() const {
  std::vector<ActivityPair> out;
  out.reserve(arcs.size());
  for (const auto& [p, w] : arcs) out.push_back(p);
  return out;
}

CausalGraph build_causal_graph(const UseLog& log, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error("dependency threshold must lie in [0,1]");
  if (!is_use_log(log.log, log.start, log.end)) throw Error("causal graph requires a USE log");

  CausalGraph g;
  g.start = log.start;
  g.end = log.end;
  g.vertices = log.log.activities();
  const auto df = directly_follows(log.log);
  for (const auto& [pair, count] : df) {
    const double score = dependency(pair.first, pair.second, df);
    g.scores.emplace(pair, score);
    if (pair.second == g.start || pair.first == g.end) continue;
    if (score >= threshold) g.arcs.emplace(pair, score);
  }
  return g;
}

namespace {

std::set<Activity> reachable(const CausalGraph& g, const Activity& from, bool forward) {
  std::map<Activity, std::vector<Activity>> adj;
  for (const auto& [p, w] : g.arcs) {
    if (forward) adj[p.first].push_back(p.second);
    else adj[p.second].push_back(p.first);
  }
  std::set<Activity> seen{from};
  std::deque<Activity> queue{from};
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (const auto& w : adj[v]) {
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  return seen;
}

struct Candidate {
  ActivityPair arc;
  double score;
};

// Highest score first; ties by target name, then source name.
bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.arc.second != b.arc.second) return a.arc.second < b.arc.second;
  return a.arc.first < b.arc.first;
}

}  // namespace

PathReport validate_path_property(const CausalGraph& g) {
  PathReport report;
  for (const auto& [p, w] : g.arcs) {
    if (p.second == g.start || p.first == g.end) report.invariant_breaches.push_back(p);
  }
  const auto fwd = reachable(g, g.start, true);
  const auto bwd = reachable(g, g.end, false);
  for (const auto& v : g.vertices) {
    if (!fwd.count(v) || !bwd.count(v)) report.off_path.push_back(v);
  }
  report.ok = report.off_path.empty() && report.invariant_breaches.empty();
  return report;
}

CausalGraph repair_for_path_property(CausalGraph g) {
  auto attach = [&g](bool forward) {
    while (true) {
      const auto anchor = reachable(g, forward ? g.start : g.end, forward);
      std::vector<Activity> missing;
      for (const auto& v : g.vertices) {
        if (!anchor.count(v)) missing.push_back(v);
      }
      if (missing.empty()) return;

      std::optional<Candidate> best;
      for (const auto& [arc, score] : g.scores) {
        const auto& [from, to] = arc;
        if (to == g.start || from == g.end || g.arcs.count(arc)) continue;
        const bool fits = forward ? (anchor.count(from) && !anchor.count(to))
                                  : (!anchor.count(from) && anchor.count(to));
        if (!fits) continue;
        Candidate c{arc, score};
        if (!best || better(c, *best)) best = c;
      }
      if (!best) {
        throw Error("cannot place activity '" + missing.front() + "' on a path from " + g.start +
                    " to " + g.end + ": no directly-follows contact");
      }
      g.arcs.emplace(best->arc, best->score);
    }
  };
  attach(true);
  attach(false);

  const auto report = validate_path_property(g);
  if (!report.ok) {
    throw Error("causal graph repair failed; off-path vertex: " +
                (report.off_path.empty() ? std::string("<none>") : report.off_path.front()));
  }
  return g;
}

void write_dot(std::ostream& out, const CausalGraph& g) {
  out << "digraph causal {\n  rankdir=LR;\n";
  for (const auto& v : g.vertices) out << "  " << dot_quote(v) << ";\n";
  for (const auto& [p, w] : g.arcs) {
    out << "  " << dot_quote(p.first) << " -> " << dot_quote(p.second) << " [label=\"" << w << "\"];\n";
  }
  out << "}\n";
}

}  // namespace ilpminer
