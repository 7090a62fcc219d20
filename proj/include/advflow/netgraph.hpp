#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace advflow {

using NodeId = std::size_t;
using EdgeId = std::size_t;

struct Edge {
  NodeId tail;
  NodeId head;
};

/// A set of nodes kept sorted and duplicate-free.
using NodeSet = std::vector<NodeId>;

/// Directed acyclic unit-capacity network with a designated source and
/// terminal. Edge identity is the position in the edge list, so parallel
/// edges are distinct. Immutable once constructed.
class Network {
 public:
  /// Validates the graph: source != terminal, acyclic, and every node on
  /// some source-to-terminal path. Throws InvalidNetwork otherwise.
  Network(std::vector<std::string> names, std::vector<Edge> edges, NodeId source,
          NodeId terminal);

  std::size_t num_nodes() const { return names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }

  NodeId source() const { return source_; }
  NodeId terminal() const { return terminal_; }
  const std::string& name(NodeId v) const { return names_.at(v); }
  std::optional<NodeId> find(std::string_view name) const;

  std::span<const EdgeId> in_edges(NodeId v) const { return in_.at(v); }
  std::span<const EdgeId> out_edges(NodeId v) const { return out_.at(v); }

  /// Nodes other than source and terminal, ascending.
  const NodeSet& internal_nodes() const { return internal_; }
  bool is_internal(NodeId v) const { return v != source_ && v != terminal_; }

  const std::vector<NodeId>& topological_order() const { return topo_; }

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  NodeId source_;
  NodeId terminal_;
  std::vector<std::vector<EdgeId>> in_;
  std::vector<std::vector<EdgeId>> out_;
  NodeSet internal_;
  std::vector<NodeId> topo_;
};

/// A source-to-terminal path, stored as its edge sequence.
struct Path {
  std::vector<EdgeId> edges;
  std::vector<NodeId> internal_nodes;  // in traversal order

  bool visits(NodeId v) const;
  bool intersects(const NodeSet& nodes) const;
  bool uses(EdgeId e) const;

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path& a, const Path& b) { return a.edges <=> b.edges; }
};

struct NodeCut {
  NodeSet nodes;
  bool minimal = false;
};

/// Parses the line-oriented graph format. The header is either
/// "SOURCE <s> TERMINAL <t>" or the short form "<s> <t>"; every following
/// line "<tail> <head>" adds one unit-capacity edge. '#' starts a comment.
Network parse_network(std::string_view text);
Network load_network(const std::string& path);
std::string serialize_network(const Network& net);

std::string path_to_string(const Network& net, const Path& p);

/// Value of a maximum source-terminal flow with unit edge capacities.
std::size_t min_cut(const Network& net);

/// Integral maximum flow for the given per-edge capacities; returns the flow
/// on every edge.
std::vector<std::int64_t> max_flow(const Network& net, std::span<const std::int64_t> capacity);

/// Splits an integral flow into path counts. Paths are peeled off in
/// lexicographic edge order so the result is deterministic.
std::vector<std::pair<Path, std::int64_t>> decompose_flow(const Network& net,
                                                          std::span<const std::int64_t> flow);

/// All source-terminal paths in lexicographic order of edge indices.
/// Throws GuardExceeded past `cap` paths (ADVFLOW_GUARD overrides the default).
std::vector<Path> enumerate_paths(const Network& net, std::size_t cap = 1'000'000);

bool is_node_cut(const Network& net, const NodeSet& nodes);

/// Every inclusion-minimal set of internal nodes whose removal disconnects
/// source from terminal, by increasing size then lexicographically.
std::vector<NodeCut> minimal_node_cuts(const Network& net);

/// All internal-node subsets of exactly `size` elements, lexicographic.
/// When size exceeds the internal node count, the full set is returned once.
std::vector<NodeSet> internal_subsets(const Network& net, std::size_t size,
                                      std::size_t cap = 1'000'000);

}  // namespace advflow
