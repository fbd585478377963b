#include "ilpminer/workflow_net.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

#include "ilpminer/error.hpp"
#include "text_util.hpp"

namespace ilpminer {

std::size_t PetriNet::add_place(std::string id) {
  if (!ids_.emplace(id, true).second) throw Error("duplicate net node id: " + id);
  places_.push_back(std::move(id));
  return places_.size() - 1;
}

std::size_t PetriNet::add_transition(std::string id, std::optional<Activity> label) {
  if (!ids_.emplace(id, false).second) throw Error("duplicate net node id: " + id);
  transitions_.push_back({std::move(id), std::move(label)});
  pre_.emplace_back();
  post_.emplace_back();
  return transitions_.size() - 1;
}

void PetriNet::add_input_arc(std::size_t place, std::size_t transition) {
  if (place >= places_.size() || transition >= transitions_.size()) throw Error("arc references a missing node");
  pre_[transition].insert(place);
}

void PetriNet::add_output_arc(std::size_t transition, std::size_t place) {
  if (place >= places_.size() || transition >= transitions_.size()) throw Error("arc references a missing node");
  post_[transition].insert(place);
}

std::size_t PetriNet::arc_count() const {
  std::size_t n = 0;
  for (std::size_t t = 0; t < transitions_.size(); ++t) n += pre_[t].size() + post_[t].size();
  return n;
}

std::set<std::size_t> PetriNet::producers(std::size_t p) const {
  std::set<std::size_t> out;
  for (std::size_t t = 0; t < transitions_.size(); ++t) {
    if (post_[t].count(p)) out.insert(t);
  }
  return out;
}

std::set<std::size_t> PetriNet::consumers(std::size_t p) const {
  std::set<std::size_t> out;
  for (std::size_t t = 0; t < transitions_.size(); ++t) {
    if (pre_[t].count(p)) out.insert(t);
  }
  return out;
}

std::optional<std::size_t> PetriNet::find_place(const std::string& id) const {
  for (std::size_t p = 0; p < places_.size(); ++p) {
    if (places_[p] == id) return p;
  }
  return std::nullopt;
}

std::optional<std::size_t> PetriNet::find_transition(const std::string& id) const {
  for (std::size_t t = 0; t < transitions_.size(); ++t) {
    if (transitions_[t].id == id) return t;
  }
  return std::nullopt;
}

std::vector<std::size_t> PetriNet::transitions_labeled(const Activity& a) const {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < transitions_.size(); ++t) {
    if (transitions_[t].label == a) out.push_back(t);
  }
  return out;
}

std::set<Activity> PetriNet::labels() const {
  std::set<Activity> out;
  for (const auto& t : transitions_) {
    if (t.label) out.insert(*t.label);
  }
  return out;
}

Marking WorkflowNet::initial_marking() const {
  auto m = net.empty_marking();
  m.at(source) = 1;
  return m;
}

Marking WorkflowNet::final_marking() const {
  auto m = net.empty_marking();
  m.at(sink) = 1;
  return m;
}

bool enabled(const PetriNet& net, const Marking& m, std::size_t t) {
  for (const auto p : net.preset(t)) {
    if (m.at(p) == 0) return false;
  }
  return true;
}

Marking fire(const PetriNet& net, const Marking& m, std::size_t t) {
  if (!enabled(net, m, t)) throw Error("transition " + net.transition(t).id + " is not enabled");
  Marking next = m;
  for (const auto p : net.preset(t)) --next[p];
  for (const auto p : net.postset(t)) ++next[p];
  return next;
}

void fire_silent_towards(const PetriNet& net, Marking& m, std::optional<std::size_t> target, const Marking& goal,
                         std::vector<std::size_t>& fired) {
  auto done = [&](const Marking& x) { return target ? enabled(net, x, *target) : x == goal; };
  for (std::size_t step = 0; step <= net.transition_count(); ++step) {
    if (done(m)) return;
    std::vector<std::size_t> silent;
    std::vector<std::size_t> helpful;
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
      if (!net.transition(t).silent() || !enabled(net, m, t)) continue;
      silent.push_back(t);
      if (done(fire(net, m, t))) helpful.push_back(t);
    }
    std::size_t pick;
    if (helpful.size() == 1) pick = helpful.front();
    else if (helpful.empty() && silent.size() == 1) pick = silent.front();
    else return;
    m = fire(net, m, pick);
    fired.push_back(pick);
  }
}

namespace {

std::size_t unique_transition(const PetriNet& net, const Activity& a) {
  const auto ts = net.transitions_labeled(a);
  if (ts.empty()) throw Error("no transition labeled " + a);
  if (ts.size() > 1) throw Error("several transitions labeled " + a);
  return ts.front();
}

}  // namespace

ReplayResult replay(const WorkflowNet& wf, const Trace& trace) {
  std::vector<std::size_t> targets;
  targets.reserve(trace.size());
  for (const auto& a : trace) targets.push_back(unique_transition(wf.net, a));

  ReplayResult r;
  r.marking = wf.initial_marking();
  const auto goal = wf.final_marking();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    fire_silent_towards(wf.net, r.marking, targets[i], goal, r.fired);
    if (!enabled(wf.net, r.marking, targets[i])) {
      r.blocked_at = i;
      return r;
    }
    r.marking = fire(wf.net, r.marking, targets[i]);
    r.fired.push_back(targets[i]);
  }
  r.completed = true;
  fire_silent_towards(wf.net, r.marking, std::nullopt, goal, r.fired);
  r.reached_final = r.marking == goal;
  if (!r.reached_final) r.blocked_at = trace.size();
  return r;
}

WfNetReport is_wf_net(const PetriNet& net, std::size_t source, std::size_t sink) {
  WfNetReport report;
  auto fail = [&](std::string why) {
    report.ok = false;
    report.violations.push_back(std::move(why));
  };
  if (source >= net.place_count() || sink >= net.place_count()) {
    fail("source or sink is not a place of the net");
    return report;
  }
  if (source == sink) fail("source and sink coincide");
  if (!net.producers(source).empty()) fail("source place " + net.place(source) + " has incoming arcs");
  if (!net.consumers(sink).empty()) fail("sink place " + net.place(sink) + " has outgoing arcs");

  // Nodes 0..P-1 are places, P.. are transitions.
  const std::size_t places = net.place_count();
  const std::size_t nodes = places + net.transition_count();
  std::vector<std::vector<std::size_t>> fwd(nodes), bwd(nodes);
  for (std::size_t t = 0; t < net.transition_count(); ++t) {
    for (const auto p : net.preset(t)) {
      fwd[p].push_back(places + t);
      bwd[places + t].push_back(p);
    }
    for (const auto p : net.postset(t)) {
      fwd[places + t].push_back(p);
      bwd[p].push_back(places + t);
    }
  }
  auto reach = [&](std::size_t from, const std::vector<std::vector<std::size_t>>& adj) {
    std::vector<bool> seen(nodes, false);
    std::deque<std::size_t> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      for (const auto w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    return seen;
  };
  const auto from_source = reach(source, fwd);
  const auto to_sink = reach(sink, bwd);
  for (std::size_t v = 0; v < nodes; ++v) {
    if (from_source[v] && to_sink[v]) continue;
    report.off_path.push_back(v < places ? net.place(v) : net.transition(v - places).id);
  }
  if (!report.off_path.empty()) fail("nodes not on a path from source to sink");
  return report;
}

namespace {

std::map<std::size_t, std::optional<Trace>> witnesses(const WorkflowNet& wf,
                                                      const std::vector<std::pair<Trace, Trace>>& traces) {
  std::map<std::size_t, std::optional<Trace>> out;
  for (std::size_t t = 0; t < wf.net.transition_count(); ++t) out[t] = std::nullopt;
  for (const auto& [shown, replayed] : traces) {
    ReplayResult r;
    try {
      r = replay(wf, replayed);
    } catch (const Error&) {
      continue;
    }
    if (!r.ok()) continue;
    for (const auto t : r.fired) {
      if (!out[t]) out[t] = shown;
    }
  }
  return out;
}

}  // namespace

std::map<std::size_t, std::optional<Trace>> relaxed_soundness_witnesses(const WorkflowNet& wf,
                                                                        const EventLog& log) {
  std::vector<std::pair<Trace, Trace>> traces;
  for (const auto& [t, count] : log.traces()) traces.emplace_back(t, t);
  return witnesses(wf, traces);
}

std::map<std::size_t, std::optional<Trace>> relaxed_soundness_witnesses(const WorkflowNet& wf,
                                                                        const UseLog& log) {
  std::vector<std::pair<Trace, Trace>> traces;
  for (const auto& [t, count] : log.log.traces()) {
    Trace inner = t;
    if (!inner.empty() && inner.front() == log.start) inner.erase(inner.begin());
    if (!inner.empty() && inner.back() == log.end) inner.pop_back();
    traces.emplace_back(t, std::move(inner));
  }
  return witnesses(wf, traces);
}

bool full_witness_coverage(const std::map<std::size_t, std::optional<Trace>>& witnesses) {
  return std::all_of(witnesses.begin(), witnesses.end(), [](const auto& w) { return w.second.has_value(); });
}

StateSpace explore_state_space(const PetriNet& net, const Marking& start, std::size_t bound) {
  if (bound == 0) throw Error("state-space bound must be at least 1");
  if (start.size() != net.place_count()) throw Error("marking dimension mismatch");
  StateSpace space;
  std::map<Marking, std::size_t> index{{start, 0}};
  space.markings.push_back(start);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
      if (!enabled(net, space.markings[v], t)) continue;
      auto next = fire(net, space.markings[v], t);
      auto it = index.find(next);
      if (it == index.end()) {
        if (space.markings.size() >= bound) return space;
        it = index.emplace(next, space.markings.size()).first;
        space.markings.push_back(std::move(next));
        queue.push_back(it->second);
      }
      space.edges.push_back({v, t, it->second});
    }
  }
  space.complete = true;
  return space;
}

SoundnessVerdict relaxed_soundness_by_state_space(const WorkflowNet& wf, std::size_t bound) {
  const auto space = explore_state_space(wf.net, wf.initial_marking(), bound);
  if (!space.complete) return SoundnessVerdict::undecided;

  const auto goal = wf.final_marking();
  std::vector<std::vector<std::size_t>> back(space.markings.size());
  for (const auto& e : space.edges) back[e.to].push_back(e.from);
  std::vector<bool> good(space.markings.size(), false);
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < space.markings.size(); ++v) {
    if (space.markings[v] == goal) {
      good[v] = true;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (const auto u : back[v]) {
      if (!good[u]) {
        good[u] = true;
        queue.push_back(u);
      }
    }
  }
  std::vector<bool> covered(wf.net.transition_count(), false);
  for (const auto& e : space.edges) {
    if (good[e.to]) covered[e.transition] = true;
  }
  const bool all = std::all_of(covered.begin(), covered.end(), [](bool c) { return c; });
  return all ? SoundnessVerdict::relaxed_sound : SoundnessVerdict::not_relaxed_sound;
}

void write_dot(std::ostream& out, const WorkflowNet& wf) {
  const auto& net = wf.net;
  const auto initial = wf.initial_marking();
  out << "digraph workflow_net {\n  rankdir=LR;\n";
  for (std::size_t p = 0; p < net.place_count(); ++p) {
    std::string tokens;
    if (initial[p] > 3) tokens = std::to_string(initial[p]);
    else for (std::uint32_t k = 0; k < initial[p]; ++k) tokens += "•";
    out << "  p" << p << " [shape=circle, label=" << dot_quote(tokens) << ", xlabel=" << dot_quote(net.place(p))
        << "];\n";
  }
  for (std::size_t t = 0; t < net.transition_count(); ++t) {
    const auto& tr = net.transition(t);
    out << "  t" << t << " [shape=box, label=" << dot_quote(tr.label ? *tr.label : std::string("τ"));
    if (tr.silent()) out << ", style=filled, fillcolor=black, fontcolor=white";
    out << "];\n";
  }
  for (std::size_t t = 0; t < net.transition_count(); ++t) {
    for (const auto p : net.preset(t)) out << "  p" << p << " -> t" << t << ";\n";
    for (const auto p : net.postset(t)) out << "  t" << t << " -> p" << p << ";\n";
  }
  out << "}\n";
}

}  // namespace ilpminer
