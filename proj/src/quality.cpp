#include "ilpminer/quality.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ilpminer/error.hpp"

namespace ilpminer {

namespace {

std::map<Activity, std::size_t> resolve_labels(const PetriNet& net, const std::set<Activity>& activities) {
  std::map<Activity, std::size_t> out;
  std::string missing;
  for (const auto& a : activities) {
    const auto ts = net.transitions_labeled(a);
    if (ts.size() == 1) {
      out.emplace(a, ts.front());
      continue;
    }
    if (!missing.empty()) missing += ", ";
    missing += a;
    if (ts.size() > 1) missing += " (ambiguous)";
  }
  if (!missing.empty()) throw Error("log activities without a unique transition in the net: " + missing);
  return out;
}

struct TokenGame {
  const PetriNet& net;
  Marking marking;
  std::uint64_t produced = 0;
  std::uint64_t consumed = 0;
  std::uint64_t missing = 0;

  void account(std::size_t t) {
    consumed += net.preset(t).size();
    produced += net.postset(t).size();
  }
  void account(const std::vector<std::size_t>& fired) {
    for (const auto t : fired) account(t);
  }
};

}  // namespace

double token_fitness(const WorkflowNet& wf, const EventLog& log, FitnessCounts* counts) {
  const auto transition_of = resolve_labels(wf.net, log.activities());
  const auto goal = wf.final_marking();
  FitnessCounts total;
  std::vector<std::size_t> fired;
  for (const auto& [trace, count] : log.traces()) {
    TokenGame game{wf.net, wf.initial_marking()};
    game.produced = 1;
    for (const auto& a : trace) {
      const auto t = transition_of.at(a);
      fired.clear();
      fire_silent_towards(wf.net, game.marking, t, goal, fired);
      game.account(fired);
      for (const auto p : wf.net.preset(t)) {
        if (game.marking[p] == 0) {
          game.marking[p] = 1;
          ++game.missing;
        }
      }
      game.marking = fire(wf.net, game.marking, t);
      game.account(t);
    }
    fired.clear();
    fire_silent_towards(wf.net, game.marking, std::nullopt, goal, fired);
    game.account(fired);
    ++game.consumed;
    if (game.marking[wf.sink] == 0) ++game.missing;
    else --game.marking[wf.sink];
    std::uint64_t remaining = 0;
    for (const auto tokens : game.marking) remaining += tokens;

    total.produced += count * game.produced;
    total.consumed += count * game.consumed;
    total.missing += count * game.missing;
    total.remaining += count * remaining;
    total.traces += count;
    if (game.missing == 0 && remaining == 0) total.fitting_traces += count;
  }
  if (counts) *counts = total;
  const double consume_term =
      total.consumed == 0 ? 0.0 : 1.0 - static_cast<double>(total.missing) / static_cast<double>(total.consumed);
  const double produce_term =
      total.produced == 0 ? 0.0 : 1.0 - static_cast<double>(total.remaining) / static_cast<double>(total.produced);
  return 0.5 * consume_term + 0.5 * produce_term;
}

namespace {

// Visible labels enabled in `m` or in a marking reachable from it by silent steps.
std::set<Activity> allowed_labels(const PetriNet& net, const Marking& m) {
  std::set<Activity> out;
  std::set<Marking> seen{m};
  std::deque<Marking> queue{m};
  while (!queue.empty() && seen.size() <= 256) {
    const auto cur = queue.front();
    queue.pop_front();
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
      if (!enabled(net, cur, t)) continue;
      const auto& tr = net.transition(t);
      if (tr.label) {
        out.insert(*tr.label);
      } else {
        auto next = fire(net, cur, t);
        if (seen.insert(next).second) queue.push_back(std::move(next));
      }
    }
  }
  return out;
}

}  // namespace

double escaping_edges_precision(const WorkflowNet& wf, const EventLog& log, PrecisionCounts* counts) {
  PrecisionCounts total;
  if (log.empty()) {
    if (counts) *counts = total;
    return 1.0;
  }
  const auto transition_of = resolve_labels(wf.net, log.activities());
  const auto closure = prefix_closure(log);
  const auto& alphabet = closure.alphabet();
  const auto goal = wf.final_marking();

  std::vector<std::pair<std::size_t, Marking>> stack{{PrefixClosure::root, wf.initial_marking()}};
  std::vector<std::size_t> fired;
  while (!stack.empty()) {
    auto [id, marking] = std::move(stack.back());
    stack.pop_back();
    const auto& node = closure.node(id);
    const auto allowed = allowed_labels(wf.net, marking);
    std::uint64_t escaping = 0;
    for (const auto& label : allowed) {
      const auto sym = alphabet.find(label);
      if (!sym || !node.children.count(static_cast<std::uint32_t>(*sym))) ++escaping;
    }
    total.states += 1;
    total.allowed += node.frequency * allowed.size();
    total.escaping += node.frequency * escaping;

    for (const auto& [sym, child] : node.children) {
      const auto t = transition_of.at(alphabet[sym]);
      Marking next = marking;
      fired.clear();
      fire_silent_towards(wf.net, next, t, goal, fired);
      if (!enabled(wf.net, next, t)) continue;
      stack.emplace_back(child, fire(wf.net, next, t));
    }
  }
  if (counts) *counts = total;
  if (total.allowed == 0) return 1.0;
  return 1.0 - static_cast<double>(total.escaping) / static_cast<double>(total.allowed);
}

QualityReport evaluate(const WorkflowNet& wf, const EventLog& log) {
  QualityReport r;
  r.fitness = token_fitness(wf, log, &r.fitness_counts);
  r.precision = escaping_edges_precision(wf, log, &r.precision_counts);
  return r;
}

std::string to_key_value(const QualityReport& report) {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed;
  out << "fitness=" << report.fitness << '\n';
  out << "precision=" << report.precision << '\n';
  out << "traces=" << report.fitness_counts.traces << '\n';
  out << "fitting_traces=" << report.fitness_counts.fitting_traces << '\n';
  out << "produced=" << report.fitness_counts.produced << '\n';
  out << "consumed=" << report.fitness_counts.consumed << '\n';
  out << "missing=" << report.fitness_counts.missing << '\n';
  out << "remaining=" << report.fitness_counts.remaining << '\n';
  out << "replayed_prefixes=" << report.precision_counts.states << '\n';
  out << "allowed=" << report.precision_counts.allowed << '\n';
  out << "escaping=" << report.precision_counts.escaping << '\n';
  return out.str();
}

namespace {

// Uniform draw from [0, n) that does not depend on the standard library's
// distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw Error("empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::uint64_t uniform_between(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + uniform_below(rng, hi - lo + 1);
}

void manipulate(Trace& trace, std::mt19937_64& rng) {
  const std::size_t len = trace.size();
  if (len < 2) return;
  const std::size_t max_cut = std::max<std::size_t>(1, len / 3);
  switch (uniform_below(rng, 4)) {
    case 0: {
      const auto cut = uniform_between(rng, 1, max_cut);
      trace.erase(trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(cut));
      break;
    }
    case 1: {
      const auto cut = uniform_between(rng, 1, max_cut);
      trace.erase(trace.end() - static_cast<std::ptrdiff_t>(cut), trace.end());
      break;
    }
    case 2: {
      const auto cut = uniform_between(rng, 1, max_cut);
      // Keep the first and last event when the trace is long enough.
      const std::size_t first = len >= cut + 2 ? uniform_between(rng, 1, len - cut - 1) : uniform_between(rng, 0, len - cut);
      trace.erase(trace.begin() + static_cast<std::ptrdiff_t>(first),
                  trace.begin() + static_cast<std::ptrdiff_t>(first + cut));
      break;
    }
    default: {
      const auto i = uniform_below(rng, len);
      std::vector<std::size_t> others;
      for (std::size_t j = 0; j < len; ++j) {
        if (trace[j] != trace[i]) others.push_back(j);
      }
      if (others.empty()) break;
      const auto j = others[uniform_below(rng, others.size())];
      std::swap(trace[i], trace[j]);
      break;
    }
  }
}

}  // namespace

EventLog inject_noise(const EventLog& log, double level, std::uint64_t seed) {
  if (!(level >= 0.0 && level <= 1.0)) throw Error("noise level must lie in [0,1]");
  std::vector<Trace> instances;
  instances.reserve(log.total());
  for (const auto& [trace, count] : log.traces()) {
    for (std::uint64_t k = 0; k < count; ++k) instances.push_back(trace);
  }
  // The small slack keeps products such as 0.1 * 30 from rounding up past an integer.
  const auto picks = static_cast<std::size_t>(std::ceil(level * static_cast<double>(instances.size()) - 1e-9));

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = 0; i < picks; ++i) {
    const auto j = i + uniform_below(rng, order.size() - i);
    std::swap(order[i], order[j]);
    manipulate(instances[order[i]], rng);
  }

  EventLog out;
  for (auto& t : instances) out.add(std::move(t));
  return out;
}

EventLog simulate(const WorkflowNet& wf, std::uint64_t traces, std::uint64_t seed, std::size_t max_steps) {
  std::mt19937_64 rng(seed);
  const auto goal = wf.final_marking();
  EventLog out;
  for (std::uint64_t k = 0; k < traces; ++k) {
    Marking m = wf.initial_marking();
    Trace trace;
    for (std::size_t step = 0; m != goal; ++step) {
      if (step >= max_steps) throw Error("simulation exceeded the step limit");
      std::vector<std::size_t> choices;
      for (std::size_t t = 0; t < wf.net.transition_count(); ++t) {
        if (enabled(wf.net, m, t)) choices.push_back(t);
      }
      if (choices.empty()) throw Error("simulation reached a dead marking");
      const auto t = choices[uniform_below(rng, choices.size())];
      m = fire(wf.net, m, t);
      if (const auto& label = wf.net.transition(t).label) trace.push_back(*label);
    }
    out.add(std::move(trace));
  }
  return out;
}

}  // namespace ilpminer
