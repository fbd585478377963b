#pragma once

#include <string>
#include <vector>

#include "ilpminer/workflow_net.hpp"

namespace ilpminer::testing {

inline void connect(PetriNet& net, std::size_t t, std::initializer_list<std::size_t> in,
                    std::initializer_list<std::size_t> out) {
  for (auto p : in) net.add_input_arc(p, t);
  for (auto p : out) net.add_output_arc(t, p);
}

/// The running-example workflow net: a forks into two branches, b or c on the
/// first, d on the second, e joins, then f loops back or g/h finish.
inline WorkflowNet running_example_net() {
  WorkflowNet wf;
  auto& n = wf.net;
  const auto start = n.add_place("start");
  const auto c1 = n.add_place("c1");
  const auto c2 = n.add_place("c2");
  const auto c3 = n.add_place("c3");
  const auto c4 = n.add_place("c4");
  const auto c5 = n.add_place("c5");
  const auto end = n.add_place("end");
  connect(n, n.add_transition("a", "a"), {start}, {c1, c2});
  connect(n, n.add_transition("b", "b"), {c1}, {c3});
  connect(n, n.add_transition("c", "c"), {c1}, {c3});
  connect(n, n.add_transition("d", "d"), {c2}, {c4});
  connect(n, n.add_transition("e", "e"), {c3, c4}, {c5});
  connect(n, n.add_transition("f", "f"), {c5}, {c1, c2});
  connect(n, n.add_transition("g", "g"), {c5}, {end});
  connect(n, n.add_transition("h", "h"), {c5}, {end});
  wf.source = start;
  wf.sink = end;
  return wf;
}

/// Sequence i -> [silent] -> p -> x -> q -> [silent] -> o.
inline WorkflowNet silent_wrapped_net(const std::string& label = "x") {
  WorkflowNet wf;
  auto& n = wf.net;
  const auto i = n.add_place("i");
  const auto p = n.add_place("p");
  const auto q = n.add_place("q");
  const auto o = n.add_place("o");
  connect(n, n.add_transition("t_start"), {i}, {p});
  connect(n, n.add_transition("t_" + label, label), {p}, {q});
  connect(n, n.add_transition("t_end"), {q}, {o});
  wf.source = i;
  wf.sink = o;
  return wf;
}

}  // namespace ilpminer::testing
