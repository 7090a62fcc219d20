#include "advflow/netgraph.hpp"

#include "advflow/error.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace advflow {

namespace {

std::vector<bool> reachable(const Network& net, NodeId start, bool forward,
                            const std::vector<bool>* removed = nullptr) {
  std::vector<bool> seen(net.num_nodes(), false);
  if (removed && (*removed)[start]) return seen;
  std::vector<NodeId> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    auto adj = forward ? net.out_edges(v) : net.in_edges(v);
    for (EdgeId e : adj) {
      NodeId w = forward ? net.edge(e).head : net.edge(e).tail;
      if (seen[w] || (removed && (*removed)[w])) continue;
      seen[w] = true;
      stack.push_back(w);
    }
  }
  return seen;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Network::Network(std::vector<std::string> names, std::vector<Edge> edges, NodeId source,
                 NodeId terminal)
    : names_(std::move(names)),
      edges_(std::move(edges)),
      source_(source),
      terminal_(terminal),
      in_(names_.size()),
      out_(names_.size()) {
  const std::size_t n = names_.size();
  if (source_ >= n || terminal_ >= n) throw InvalidNetwork("source or terminal is not a node");
  if (source_ == terminal_) throw InvalidNetwork("source and terminal must differ");
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.tail >= n || ed.head >= n) throw InvalidNetwork("edge references unknown node");
    if (ed.tail == ed.head) throw InvalidNetwork("cycle detected (self-loop at " + names_[ed.tail] + ")");
    out_[ed.tail].push_back(e);
    in_[ed.head].push_back(e);
  }

  // Kahn's algorithm, smallest ready node first for a stable order.
  std::vector<std::size_t> indeg(n);
  for (NodeId v = 0; v < n; ++v) indeg[v] = in_[v].size();
  std::vector<NodeId> ready;
  for (NodeId v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    auto it = std::min_element(ready.begin(), ready.end());
    NodeId v = *it;
    ready.erase(it);
    topo_.push_back(v);
    for (EdgeId e : out_[v])
      if (--indeg[edges_[e].head] == 0) ready.push_back(edges_[e].head);
  }
  if (topo_.size() != n) throw InvalidNetwork("cycle detected");

  auto from_source = reachable(*this, source_, true);
  auto to_terminal = reachable(*this, terminal_, false);
  for (NodeId v = 0; v < n; ++v) {
    if (!from_source[v] || !to_terminal[v])
      throw InvalidNetwork("node not on any source-terminal path: " + names_[v]);
    if (v != source_ && v != terminal_) internal_.push_back(v);
  }
}

std::optional<NodeId> Network::find(std::string_view name) const {
  for (NodeId v = 0; v < names_.size(); ++v)
    if (names_[v] == name) return v;
  return std::nullopt;
}

bool Path::visits(NodeId v) const {
  return std::find(internal_nodes.begin(), internal_nodes.end(), v) != internal_nodes.end();
}

bool Path::intersects(const NodeSet& nodes) const {
  return std::any_of(internal_nodes.begin(), internal_nodes.end(), [&](NodeId v) {
    return std::binary_search(nodes.begin(), nodes.end(), v);
  });
}

bool Path::uses(EdgeId e) const { return std::find(edges.begin(), edges.end(), e) != edges.end(); }

Network parse_network(std::string_view text) {
  std::vector<std::string> names;
  std::map<std::string, NodeId, std::less<>> index;
  auto intern = [&](std::string_view s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    NodeId id = names.size();
    names.emplace_back(s);
    index.emplace(std::string(s), id);
    return id;
  };

  std::optional<NodeId> source, terminal;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (!source) {
      if (tok.size() == 4 && tok[0] == "SOURCE" && tok[2] == "TERMINAL") {
        source = intern(tok[1]);
        terminal = intern(tok[3]);
      } else if (tok.size() == 2 && tok[0] != "SOURCE") {
        source = intern(tok[0]);
        terminal = intern(tok[1]);
      } else {
        throw ParseError(line_no, "expected header 'SOURCE <id> TERMINAL <id>'");
      }
    } else {
      if (tok.size() != 2) throw ParseError(line_no, "expected '<tail> <head>'");
      edges.push_back({intern(tok[0]), intern(tok[1])});
    }
    if (end == text.size()) break;
  }
  if (!source) throw ParseError(line_no, "missing SOURCE/TERMINAL declaration");
  return Network(std::move(names), std::move(edges), *source, *terminal);
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidNetwork("cannot open graph file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

std::string serialize_network(const Network& net) {
  std::string out = "SOURCE " + net.name(net.source()) + " TERMINAL " + net.name(net.terminal()) + "\n";
  for (const Edge& e : net.edges()) out += net.name(e.tail) + " " + net.name(e.head) + "\n";
  return out;
}

std::string path_to_string(const Network& net, const Path& p) {
  std::string out = net.name(net.source());
  for (EdgeId e : p.edges) out += "->" + net.name(net.edge(e).head);
  return out;
}

std::vector<std::int64_t> max_flow(const Network& net, std::span<const std::int64_t> capacity) {
  // Edmonds-Karp on the residual graph; edges are traversed forward with
  // spare capacity or backward with positive flow.
  const std::size_t m = net.num_edges();
  if (capacity.size() != m) throw std::invalid_argument("capacity vector size mismatch");
  std::vector<std::int64_t> flow(m, 0);
  const NodeId s = net.source(), t = net.terminal();
  while (true) {
    std::vector<std::ptrdiff_t> via(net.num_nodes(), -1);  // encoded edge, +1 forward / -(e+1) backward
    std::vector<bool> seen(net.num_nodes(), false);
    std::deque<NodeId> queue{s};
    seen[s] = true;
    while (!queue.empty() && !seen[t]) {
      NodeId v = queue.front();
      queue.pop_front();
      for (EdgeId e : net.out_edges(v)) {
        NodeId w = net.edge(e).head;
        if (!seen[w] && flow[e] < capacity[e]) {
          seen[w] = true;
          via[w] = static_cast<std::ptrdiff_t>(e) + 1;
          queue.push_back(w);
        }
      }
      for (EdgeId e : net.in_edges(v)) {
        NodeId w = net.edge(e).tail;
        if (!seen[w] && flow[e] > 0) {
          seen[w] = true;
          via[w] = -(static_cast<std::ptrdiff_t>(e) + 1);
          queue.push_back(w);
        }
      }
    }
    if (!seen[t]) break;
    std::int64_t push = std::numeric_limits<std::int64_t>::max();
    for (NodeId v = t; v != s;) {
      std::ptrdiff_t code = via[v];
      if (code > 0) {
        EdgeId e = static_cast<EdgeId>(code - 1);
        push = std::min(push, capacity[e] - flow[e]);
        v = net.edge(e).tail;
      } else {
        EdgeId e = static_cast<EdgeId>(-code - 1);
        push = std::min(push, flow[e]);
        v = net.edge(e).head;
      }
    }
    for (NodeId v = t; v != s;) {
      std::ptrdiff_t code = via[v];
      if (code > 0) {
        EdgeId e = static_cast<EdgeId>(code - 1);
        flow[e] += push;
        v = net.edge(e).tail;
      } else {
        EdgeId e = static_cast<EdgeId>(-code - 1);
        flow[e] -= push;
        v = net.edge(e).head;
      }
    }
  }
  return flow;
}

std::size_t min_cut(const Network& net) {
  std::vector<std::int64_t> cap(net.num_edges(), 1);
  auto flow = max_flow(net, cap);
  std::int64_t total = 0;
  for (EdgeId e : net.out_edges(net.source())) total += flow[e];
  return static_cast<std::size_t>(total);
}

std::vector<std::pair<Path, std::int64_t>> decompose_flow(const Network& net,
                                                          std::span<const std::int64_t> flow) {
  std::vector<std::int64_t> rest(flow.begin(), flow.end());
  std::vector<std::pair<Path, std::int64_t>> out;
  while (true) {
    Path p;
    NodeId v = net.source();
    std::int64_t amount = std::numeric_limits<std::int64_t>::max();
    while (v != net.terminal()) {
      std::optional<EdgeId> next;
      for (EdgeId e : net.out_edges(v))
        if (rest[e] > 0) {
          next = e;
          break;
        }
      if (!next) break;
      p.edges.push_back(*next);
      amount = std::min(amount, rest[*next]);
      v = net.edge(*next).head;
      if (v != net.terminal()) p.internal_nodes.push_back(v);
    }
    if (v != net.terminal() || p.edges.empty()) break;  // acyclic + conserved: no flow left
    for (EdgeId e : p.edges) rest[e] -= amount;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& pc) { return pc.first == p; });
    if (it != out.end())
      it->second += amount;
    else
      out.emplace_back(std::move(p), amount);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<Path> enumerate_paths(const Network& net, std::size_t cap) {
  cap = guard_limit(cap);
  std::vector<Path> out;
  Path cur;
  // Iterative DFS; out-edge lists are ascending so output is lexicographic.
  struct Frame {
    NodeId node;
    std::size_t next = 0;
  };
  std::vector<Frame> stack{{net.source()}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    auto outs = net.out_edges(f.node);
    if (f.node == net.terminal() || f.next == outs.size()) {
      if (f.node == net.terminal()) {
        if (out.size() >= cap) throw GuardExceeded("path count exceeds " + std::to_string(cap));
        out.push_back(cur);
      }
      stack.pop_back();
      if (!cur.edges.empty()) {  // the edge that led into the popped frame
        NodeId head = net.edge(cur.edges.back()).head;
        cur.edges.pop_back();
        if (head != net.terminal()) cur.internal_nodes.pop_back();
      }
      continue;
    }
    EdgeId e = outs[f.next++];
    NodeId w = net.edge(e).head;
    cur.edges.push_back(e);
    if (w != net.terminal()) cur.internal_nodes.push_back(w);
    stack.push_back({w});
  }
  return out;
}

bool is_node_cut(const Network& net, const NodeSet& nodes) {
  std::vector<bool> removed(net.num_nodes(), false);
  for (NodeId v : nodes) removed.at(v) = true;
  if (removed[net.source()] || removed[net.terminal()]) return true;
  return !reachable(net, net.source(), true, &removed)[net.terminal()];
}

std::vector<NodeSet> internal_subsets(const Network& net, std::size_t size, std::size_t cap) {
  cap = guard_limit(cap);
  const NodeSet& pool = net.internal_nodes();
  std::vector<NodeSet> out;
  if (size >= pool.size()) {
    out.push_back(pool);
    return out;
  }
  std::vector<std::size_t> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = i;
  while (true) {
    if (out.size() >= cap) throw GuardExceeded("subset count exceeds " + std::to_string(cap));
    NodeSet s;
    for (std::size_t i : idx) s.push_back(pool[i]);
    out.push_back(std::move(s));
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(size) - 1;
    while (i >= 0 && idx[i] == pool.size() - size + static_cast<std::size_t>(i)) --i;
    if (i < 0) break;
    ++idx[i];
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<NodeCut> minimal_node_cuts(const Network& net) {
  const NodeSet& pool = net.internal_nodes();
  if (pool.size() > 24) throw GuardExceeded("too many internal nodes for node-cut enumeration");
  std::vector<NodeCut> out;
  for (std::size_t k = 1; k <= pool.size(); ++k) {
    for (const NodeSet& s : internal_subsets(net, k)) {
      if (!is_node_cut(net, s)) continue;
      // Node cuts are upward closed, so minimality only needs single deletions.
      bool minimal = true;
      for (std::size_t i = 0; i < s.size() && minimal; ++i) {
        NodeSet smaller = s;
        smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
        if (is_node_cut(net, smaller)) minimal = false;
      }
      if (minimal) out.push_back({s, true});
    }
  }
  return out;
}

}  // namespace advflow
