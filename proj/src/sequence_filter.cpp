#include "ilpminer/sequence_filter.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

#include "ilpminer/error.hpp"
#include "text_util.hpp"

namespace ilpminer {

SequenceEncodingGraph::SequenceEncodingGraph(const PrefixClosure& closure) : alphabet_(closure.alphabet()) {
  std::vector<Vertex> vertex_of_node(closure.size());
  for (const auto id : closure.canonical_order()) {
    auto enc = sequence_encoding(closure, id);
    auto [it, fresh] = index_.emplace(enc, vertices_.size());
    if (fresh) {
      vertices_.push_back(std::move(enc));
      children_.emplace_back();
      parents_.emplace_back();
      frequency_.push_back(0);
    }
    const Vertex v = it->second;
    vertex_of_node[id] = v;
    const auto f = closure.node(id).frequency;
    frequency_[v] += f;
    if (id == PrefixClosure::root) continue;
    const Vertex parent = vertex_of_node[closure.node(id).parent];
    children_[parent][v] += f;
    parents_[v].insert(parent);
  }
  topological_order();
}

std::optional<SequenceEncodingGraph::Vertex> SequenceEncodingGraph::find(const EncodingVector& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SequenceEncodingGraph::Vertex SequenceEncodingGraph::vertex_of(const Trace& sequence) const {
  const auto v = find(sequence_encoding(sequence, alphabet_));
  if (!v) throw Error("no encoding vertex for " + to_string(sequence));
  return *v;
}

std::uint64_t SequenceEncodingGraph::psi(Vertex from, Vertex to) const {
  const auto& c = children_.at(from);
  auto it = c.find(to);
  return it == c.end() ? 0 : it->second;
}

std::size_t SequenceEncodingGraph::arc_count() const {
  std::size_t n = 0;
  for (const auto& c : children_) n += c.size();
  return n;
}

std::vector<SequenceEncodingGraph::Vertex> SequenceEncodingGraph::topological_order() const {
  std::vector<std::size_t> indegree(vertices_.size(), 0);
  for (const auto& c : children_) {
    for (const auto& [to, w] : c) ++indegree[to];
  }
  std::deque<Vertex> ready;
  for (Vertex v = 0; v < vertices_.size(); ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::vector<Vertex> order;
  order.reserve(vertices_.size());
  while (!ready.empty()) {
    const auto v = ready.front();
    ready.pop_front();
    order.push_back(v);
    for (const auto& [to, w] : children_[v]) {
      if (--indegree[to] == 0) ready.push_back(to);
    }
  }
  if (order.size() != vertices_.size()) throw Error("sequence encoding graph contains a cycle");
  return order;
}

bool SequenceEncodingGraph::is_acyclic() const {
  try {
    topological_order();
    return true;
  } catch (const Error&) {
    return false;
  }
}

SequenceEncodingGraph build_graph(const PrefixClosure& closure) { return SequenceEncodingGraph(closure); }

std::set<SequenceEncodingGraph::Vertex> kappa_max(const SequenceEncodingGraph& g,
                                                  SequenceEncodingGraph::Vertex v, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("alpha must lie in [0,1]");
  std::set<SequenceEncodingGraph::Vertex> out;
  const auto& children = g.children(v);
  if (children.empty()) return out;
  std::uint64_t heaviest = 0;
  for (const auto& [to, w] : children) heaviest = std::max(heaviest, w);
  const double bound = (1.0 - alpha) * static_cast<double>(heaviest);
  for (const auto& [to, w] : children) {
    if (static_cast<double>(w) >= bound) out.insert(to);
  }
  return out;
}

ChildFilter make_kappa_max(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("alpha must lie in [0,1]");
  return [alpha](const SequenceEncodingGraph& g, SequenceEncodingGraph::Vertex v) {
    return kappa_max(g, v, alpha);
  };
}

std::set<SequenceEncodingGraph::Vertex> sef_bfs(const SequenceEncodingGraph& g, const ChildFilter& kappa) {
  using Vertex = SequenceEncodingGraph::Vertex;
  std::set<Vertex> kept;
  std::vector<bool> queued(g.size(), false);
  std::deque<Vertex> queue{SequenceEncodingGraph::root};
  queued[SequenceEncodingGraph::root] = true;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (const auto child : kappa(g, v)) {
      if (!g.children(v).count(child)) throw Error("filter selected a vertex that is not a child");
      kept.insert(child);
      if (!queued[child]) {
        queued[child] = true;
        queue.push_back(child);
      }
    }
  }
  return kept;
}

RetainedSet retained_encodings(const SequenceEncodingGraph& g,
                               const std::set<SequenceEncodingGraph::Vertex>& kept) {
  RetainedSet out;
  for (const auto v : kept) out.insert(g.encoding(v));
  return out;
}

void write_dot(std::ostream& out, const SequenceEncodingGraph& g,
               const std::optional<std::set<SequenceEncodingGraph::Vertex>>& kept) {
  out << "digraph sequence_encoding {\n";
  for (SequenceEncodingGraph::Vertex v = 0; v < g.size(); ++v) {
    out << "  n" << v << " [label=" << dot_quote(g.encoding(v).shorthand(g.alphabet()));
    if (kept && v != SequenceEncodingGraph::root && !kept->count(v)) out << ", style=dashed";
    out << "];\n";
  }
  for (SequenceEncodingGraph::Vertex v = 0; v < g.size(); ++v) {
    for (const auto& [to, w] : g.children(v)) {
      out << "  n" << v << " -> n" << to << " [label=\"" << w << "\"";
      if (kept && !kept->count(to)) out << ", style=dashed";
      out << "];\n";
    }
  }
  out << "}\n";
}

std::string encoding_table(const PrefixClosure& closure) {
  std::string out;
  for (const auto id : closure.canonical_order()) {
    const auto enc = sequence_encoding(closure, id);
    out += to_string(closure.sequence(id));
    out += '\t';
    out += enc.to_string();
    out += '\t';
    out += enc.shorthand(closure.alphabet());
    out += '\t';
    out += std::to_string(closure.node(id).frequency);
    out += '\n';
  }
  return out;
}

}  // namespace ilpminer
