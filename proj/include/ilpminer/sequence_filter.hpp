#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ilpminer/event_log.hpp"
#include "ilpminer/region_constraints.hpp"

namespace ilpminer {

/// DAG over distinct sequence encodings of a prefix-closure. Vertex 0 is the
/// root encoding of the empty sequence. Arc weights count how much closure
/// frequency of the target flowed in through that arc.
class SequenceEncodingGraph {
 public:
  using Vertex = std::size_t;
  static constexpr Vertex root = 0;

  explicit SequenceEncodingGraph(const PrefixClosure& closure);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  const EncodingVector& encoding(Vertex v) const { return vertices_.at(v); }
  std::optional<Vertex> find(const EncodingVector& e) const;
  /// Throws Error when no such vertex exists.
  Vertex vertex_of(const Trace& sequence) const;

  /// Children with arc weight, ordered by vertex id.
  const std::map<Vertex, std::uint64_t>& children(Vertex v) const { return children_.at(v); }
  const std::set<Vertex>& parents(Vertex v) const { return parents_.at(v); }
  std::uint64_t psi(Vertex from, Vertex to) const;
  /// Summed closure frequency of all sequences mapped onto `v`.
  std::uint64_t frequency(Vertex v) const { return frequency_.at(v); }
  std::size_t arc_count() const;

  bool is_acyclic() const;
  /// Vertices in a topological order; throws Error if the graph has a cycle.
  std::vector<Vertex> topological_order() const;

 private:
  Alphabet alphabet_;
  std::vector<EncodingVector> vertices_;
  std::map<EncodingVector, Vertex> index_;
  std::vector<std::map<Vertex, std::uint64_t>> children_;
  std::vector<std::set<Vertex>> parents_;
  std::vector<std::uint64_t> frequency_;
};

SequenceEncodingGraph build_graph(const PrefixClosure& closure);

/// Selects a subset of the children of a vertex.
using ChildFilter = std::function<std::set<SequenceEncodingGraph::Vertex>(
    const SequenceEncodingGraph&, SequenceEncodingGraph::Vertex)>;

/// Children whose arc weight is at least (1 - alpha) times the heaviest sibling arc.
std::set<SequenceEncodingGraph::Vertex> kappa_max(const SequenceEncodingGraph& g,
                                                  SequenceEncodingGraph::Vertex v, double alpha);
ChildFilter make_kappa_max(double alpha);

/// Breadth-first collection of filter-selected children starting at the root.
/// The root itself is never part of the result.
std::set<SequenceEncodingGraph::Vertex> sef_bfs(const SequenceEncodingGraph& g, const ChildFilter& kappa);

RetainedSet retained_encodings(const SequenceEncodingGraph& g,
                               const std::set<SequenceEncodingGraph::Vertex>& kept);

/// Graphviz dump: arcs labeled with weights, vertices outside `kept` dashed.
void write_dot(std::ostream& out, const SequenceEncodingGraph& g,
               const std::optional<std::set<SequenceEncodingGraph::Vertex>>& kept = std::nullopt);

/// One line per closure member in canonical order:
/// `<sequence>\t<vector>\t<shorthand>\t<frequency>`.
std::string encoding_table(const PrefixClosure& closure);

}  // namespace ilpminer
