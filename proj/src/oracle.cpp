#include "advflow/oracle.hpp"

#include "advflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>

namespace advflow {

// ------------------------------------------------------------ mutual information

namespace {

std::uint64_t checked_power(std::uint64_t base, std::int64_t exp, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    if (v > cap / base) throw GuardExceeded("joint state count exceeds " + std::to_string(cap));
    v *= base;
  }
  return v;
}

std::string key_of(const gf::Vector& v) {
  std::string s(static_cast<std::size_t>(v.size()) * sizeof(std::int32_t), '\0');
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    auto x = static_cast<std::int32_t>(v(i));
    std::memcpy(s.data() + i * sizeof(x), &x, sizeof(x));
  }
  return s;
}

// Advances a base-q counter; adds the columns of every incremented digit to
// `obs`. A full wrap of digit j adds q copies of column j, which vanish mod q.
bool advance(std::vector<gf::Elem>& digits, gf::Vector& obs, const gf::Matrix& cols,
             const gf::PrimeField& f) {
  for (std::size_t j = 0; j < digits.size(); ++j) {
    obs = f.reduce(obs + cols.col(static_cast<Eigen::Index>(j)));
    if (++digits[j] < f.q()) return true;
    digits[j] = 0;
  }
  return false;
}

// log_q of a positive rational when it is an integral power of q.
std::optional<long> exact_log(Rational r, gf::Elem q) {
  long e = 0;
  const Rational qr(q);
  while (r > 1) {
    r /= qr;
    ++e;
  }
  while (r < 1) {
    r *= qr;
    --e;
  }
  if (r != 1) return std::nullopt;
  return e;
}

}  // namespace

MiResult mi_enumerate(const gf::PrimeField& f, const gf::Matrix& observation, Eigen::Index message_cols,
                      bool constant_key, std::uint64_t guard) {
  guard = guard_limit(guard);
  const Eigen::Index key_cols = observation.cols() - message_cols;
  if (message_cols < 0 || key_cols < 0) throw std::invalid_argument("bad message column count");
  const auto q = static_cast<std::uint64_t>(f.q());
  const std::uint64_t key_states = constant_key ? 1 : checked_power(q, key_cols, guard);
  const std::uint64_t msg_states = checked_power(q, message_cols, guard);
  if (msg_states > guard / key_states) throw GuardExceeded("joint state count exceeds " + std::to_string(guard));

  MiResult res;
  res.states = msg_states * key_states;
  if (observation.rows() == 0 || message_cols == 0) {
    res.mi = 0;
    return res;
  }
  const gf::Matrix a = f.reduce(observation);
  const gf::Matrix a_msg = a.leftCols(message_cols);
  const gf::Matrix a_key = a.rightCols(key_cols);

  auto for_each_message = [&](auto&& body) {
    std::vector<gf::Elem> m(static_cast<std::size_t>(message_cols), 0);
    gf::Vector base = gf::Vector::Zero(a.rows());
    do body(base);
    while (advance(m, base, a_msg, f));
  };
  auto for_each_key = [&](const gf::Vector& base, auto&& body) {
    gf::Vector obs = base;
    if (constant_key || key_cols == 0) {
      body(obs);
      return;
    }
    std::vector<gf::Elem> k(static_cast<std::size_t>(key_cols), 0);
    do body(obs);
    while (advance(k, obs, a_key, f));
  };

  std::unordered_map<std::string, std::uint64_t> obs_count;
  for_each_message([&](const gf::Vector& base) {
    for_each_key(base, [&](const gf::Vector& obs) { ++obs_count[key_of(obs)]; });
  });

  const Rational total(static_cast<long long>(res.states));
  Rational exact_sum = 0;
  double sum = 0;
  bool exact = true;
  for_each_message([&](const gf::Vector& base) {
    std::unordered_map<std::string, std::uint64_t> local;
    for_each_key(base, [&](const gf::Vector& obs) { ++local[key_of(obs)]; });
    for (const auto& [o, c] : local) {
      Rational ratio = Rational(static_cast<long long>(c)) * total /
                       (Rational(static_cast<long long>(key_states)) *
                        Rational(static_cast<long long>(obs_count.at(o))));
      const Rational weight = Rational(static_cast<long long>(c)) / total;
      sum += weight.convert_to<double>() * std::log(ratio.convert_to<double>()) /
             std::log(static_cast<double>(q));
      if (auto e = exact_log(ratio, f.q())) exact_sum += weight * Rational(*e);
      else exact = false;
    }
  });
  res.exact = exact;
  res.value = exact ? exact_sum.convert_to<double>() : sum;
  res.mi = exact ? exact_sum : Rational(0);
  return res;
}

MiResult mi_enumerate(const Codec& codec, const std::vector<std::size_t>& observed, gf::Elem rho,
                      bool constant_key) {
  gf::Matrix a = observation_matrix(codec, observed, rho);
  if (a.rows() == 0) a = gf::Matrix(0, codec.encoder().cols());
  const CodecParams& p = codec.params();
  const Eigen::Index message_cols = p.kind == CodecKind::Eaves ? p.rate_packets : p.message_symbols;
  MiResult r = mi_enumerate(codec.field(), a, message_cols, constant_key);
  r.instances = p.instances();
  return r;
}

// ------------------------------------------------------------ routing converse

namespace {

struct SearchSpace {
  std::size_t edges = 0;
  std::vector<std::vector<EdgeId>> route_edges;       // edges a route occupies
  std::vector<std::vector<std::size_t>> subset_routes; // routes meeting each subset
};

struct Best {
  std::int64_t numer = 0;  // rate = numer / tau
  std::int64_t tau = 1;
  bool any = false;
  std::vector<ConverseCandidate> ties;
};

class Enumerator {
 public:
  Enumerator(const SearchSpace& space, std::int64_t tau, std::uint64_t& visited, std::uint64_t guard,
             Best& best, std::size_t keep)
      : s_(space), tau_(tau), visited_(visited), guard_(guard), best_(best), keep_(keep),
        load_(space.edges, 0), counts_(space.route_edges.size(), 0) {}

  void run() { dfs(0); }

 private:
  void dfs(std::size_t i) {
    if (i == counts_.size()) {
      leaf();
      return;
    }
    std::int64_t room = tau_;
    for (EdgeId e : s_.route_edges[i]) room = std::min(room, tau_ - load_[e]);
    for (std::int64_t c = 0; c <= room; ++c) {
      counts_[i] = c;
      for (EdgeId e : s_.route_edges[i]) load_[e] += c;
      dfs(i + 1);
      for (EdgeId e : s_.route_edges[i]) load_[e] -= c;
    }
    counts_[i] = 0;
  }

  void leaf() {
    if (++visited_ > guard_) throw GuardExceeded("routing search exceeds " + std::to_string(guard_) + " candidates");
    std::int64_t packets = std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
    std::int64_t observed = 0;
    for (const auto& routes : s_.subset_routes) {
      std::int64_t through = 0;
      for (std::size_t r : routes) through += counts_[r];
      observed = std::max(observed, through);
    }
    const std::int64_t numer = packets - observed;
    // Compare numer / tau_ against best.numer / best.tau.
    const std::int64_t lhs = numer * best_.tau, rhs = best_.numer * tau_;
    if (!best_.any || lhs > rhs) {
      best_.any = true;
      best_.numer = numer;
      best_.tau = tau_;
      best_.ties.clear();
    } else if (lhs < rhs) {
      return;
    }
    if (best_.ties.size() < keep_)
      best_.ties.push_back({tau_, counts_, packets, observed, Rational(numer, tau_)});
  }

  const SearchSpace& s_;
  std::int64_t tau_;
  std::uint64_t& visited_;
  std::uint64_t guard_;
  Best& best_;
  std::size_t keep_;
  std::vector<std::int64_t> load_;
  std::vector<std::int64_t> counts_;
};

bool verify_candidate(const Network& net, const std::vector<Path>& paths,
                      const std::vector<NodeSet>& subsets, const ConverseCandidate& cand, std::size_t z) {
  if (cand.packets == 0) return true;
  RoutingPlan plan;
  plan.capacity = min_cut(net);
  plan.z = z;
  plan.tau = cand.tau;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (cand.counts[i] == 0) continue;
    plan.paths.push_back(paths[i]);
    plan.counts.push_back(cand.counts[i]);
    plan.path_flows.emplace_back(cand.counts[i], cand.tau);
  }
  plan.packets = cand.packets;
  plan.lambda_scaled = cand.observed_max;
  plan.lambda = Rational(cand.observed_max, cand.tau);
  plan.key_rate = plan.lambda;
  plan.rate = cand.rate;
  RoutingSchedule schedule;
  try {
    schedule = make_schedule(plan, net);
  } catch (const ScheduleError&) {
    return false;
  }
  Codec codec(eaves_params(plan, 1));
  for (const NodeSet& s : subsets)
    if (leakage_symbols(codec, schedule.packets_through(s)) != 0) return false;
  return true;
}

}  // namespace

ConverseResult exhaustive_routing_converse(const Network& net, std::size_t z, std::int64_t tau_max) {
  if (net.internal_nodes().size() > 5)
    throw PreconditionViolated("routing converse search is limited to networks with at most 5 internal nodes");
  const std::uint64_t guard = guard_limit(50'000'000);
  const auto paths = enumerate_paths(net);
  const auto subsets = internal_subsets(net, z);

  LpSolution lp = solve_exact(build_lp1_prime(net, z, paths));
  RoutingPlan lp_plan = make_plan(lp, net);

  ConverseResult res;
  res.z = z;
  res.lp_rate = lp.objective;
  res.tau_max = tau_max > 0 ? tau_max : std::max<std::int64_t>(lp_plan.tau, 3);

  SearchSpace plain;
  plain.edges = net.num_edges();
  for (const Path& p : paths) plain.route_edges.push_back(p.edges);
  for (const NodeSet& s : subsets) {
    std::vector<std::size_t> routes;
    for (std::size_t i = 0; i < paths.size(); ++i)
      if (paths[i].intersects(s)) routes.push_back(i);
    plain.subset_routes.push_back(routes);
  }

  Best best, best_short;
  for (std::int64_t tau = 1; tau <= res.tau_max; ++tau) {
    Enumerator(plain, tau, res.visited, guard, best, 256).run();
    if (tau == 2 || (tau == 1 && res.tau_max == 1)) best_short = best;
  }
  res.best_rate = Rational(best.numer, best.tau);
  res.plain_rate_short = Rational(best_short.numer, best_short.tau);

  // The LP's own routing is a candidate whenever its tau was searched.
  std::vector<ConverseCandidate> ordered = best.ties;
  if (lp_plan.tau <= res.tau_max && Rational(lp_plan.message_packets(), lp_plan.tau) == res.best_rate) {
    ConverseCandidate c{lp_plan.tau, std::vector<std::int64_t>(paths.size(), 0), lp_plan.packets,
                        lp_plan.lambda_scaled, lp_plan.rate};
    for (std::size_t i = 0; i < lp_plan.paths.size(); ++i) {
      auto it = std::find(paths.begin(), paths.end(), lp_plan.paths[i]);
      c.counts[static_cast<std::size_t>(it - paths.begin())] = lp_plan.counts[i];
    }
    c.observed_max = max_packets_through_subset(net, paths, c.counts, z);
    ordered.push_back(c);
  }
  res.achieved_rate = -1;
  for (const auto& cand : ordered) {
    if (verify_candidate(net, paths, subsets, cand, z)) {
      res.achieved_rate = cand.rate;
      res.witness = cand;
      break;
    }
  }

  // Replication class: every single path plus every pair sharing one packet.
  const std::size_t pairs = paths.size() * (paths.size() - 1) / 2;
  if (pairs <= 28) {
    SearchSpace rep;
    rep.edges = net.num_edges();
    std::vector<std::pair<std::size_t, std::size_t>> routes;
    for (std::size_t i = 0; i < paths.size(); ++i) routes.emplace_back(i, i);
    for (std::size_t i = 0; i < paths.size(); ++i)
      for (std::size_t j = i + 1; j < paths.size(); ++j) routes.emplace_back(i, j);
    for (auto [i, j] : routes) {
      std::vector<EdgeId> edges = paths[i].edges;
      edges.insert(edges.end(), paths[j].edges.begin(), paths[j].edges.end());
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      rep.route_edges.push_back(edges);
    }
    for (const NodeSet& s : subsets) {
      std::vector<std::size_t> hit;
      for (std::size_t r = 0; r < routes.size(); ++r)
        if (paths[routes[r].first].intersects(s) || paths[routes[r].second].intersects(s)) hit.push_back(r);
      rep.subset_routes.push_back(hit);
    }
    Best rbest;
    try {
      for (std::int64_t tau = 1; tau <= std::min<std::int64_t>(2, res.tau_max); ++tau)
        Enumerator(rep, tau, res.replication_visited, guard, rbest, 0).run();
      res.replication_checked = true;
      res.replication_rate = Rational(rbest.numer, rbest.tau);
    } catch (const GuardExceeded&) {
      res.replication_checked = false;
    }
  }
  return res;
}

// ------------------------------------------------------------ node cuts

NodeCutWitness nodecut_structure_check(const Network& net, const LpSolution& sol) {
  if (sol.z != 1) throw PreconditionViolated("node-cut structure is defined for z = 1 solutions");
  if (sol.edge_flows.size() != net.num_edges()) throw std::invalid_argument("solution has no edge flows");
  NodeCutWitness w;
  w.lambda = sol.lambda;
  for (const NodeCut& cut : minimal_node_cuts(net)) {
    ++w.cuts_examined;
    auto inside = [&](NodeId v) { return std::binary_search(cut.nodes.begin(), cut.nodes.end(), v); };
    std::vector<CutNodeRole> roles;
    bool all = true;
    for (NodeId v : cut.nodes) {
      CutNodeRole r;
      r.node = v;
      for (EdgeId e : net.in_edges(v)) r.flow += sol.edge_flows[e];
      std::int64_t in = 0, out = 0;
      for (EdgeId e : net.in_edges(v)) in += !inside(net.edge(e).tail);
      for (EdgeId e : net.out_edges(v)) out += !inside(net.edge(e).head);
      r.capacity_limit = std::min(in, out);
      r.secrecy_constrained = r.flow == sol.lambda;
      r.capacity_constrained = r.flow == Rational(r.capacity_limit);
      all = all && (r.secrecy_constrained || r.capacity_constrained);
      roles.push_back(r);
    }
    if (all) {
      w.found = true;
      w.cut = cut;
      w.roles = std::move(roles);
      return w;
    }
  }
  return w;
}

// ------------------------------------------------------------ LP cross-check

LpCrosscheck lp_crosscheck(const Network& net, std::size_t z) {
  const auto paths = enumerate_paths(net);
  LpCrosscheck r;
  r.z = z;
  r.lp1 = solve_exact(build_lp1(net, z, paths)).objective;
  LpSolution prime = solve_exact(build_lp1_prime(net, z, paths));
  r.lp1_prime = prime.objective;
  r.lambda = prime.lambda;
  r.lp2 = solve_exact(build_lp2(net, z)).objective;
  r.lp1_equal = r.lp1 == r.lp1_prime;
  r.lp2_equal = r.lp2 == r.lp1_prime;
  r.lp2_required = z == 1;
  return r;
}

}  // namespace advflow
