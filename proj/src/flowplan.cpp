#include "advflow/flowplan.hpp"

#include "advflow/error.hpp"

#include <algorithm>
#include <numeric>

namespace advflow {

std::vector<std::size_t> RoutingSchedule::packets_in_slot(std::size_t slot) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < packet_slot.size(); ++j)
    if (packet_slot[j] == slot) out.push_back(j);
  return out;
}

std::vector<std::size_t> RoutingSchedule::packets_through(const NodeSet& nodes) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < packet_paths.size(); ++j)
    if (packet_paths[j].intersects(nodes)) out.push_back(j);
  return out;
}

std::int64_t max_packets_through_subset(const Network& net, const std::vector<Path>& paths,
                                        const std::vector<std::int64_t>& counts, std::size_t z) {
  if (net.internal_nodes().empty()) return 0;
  std::int64_t best = 0;
  for (const NodeSet& subset : internal_subsets(net, z)) {
    std::int64_t through = 0;
    for (std::size_t i = 0; i < paths.size(); ++i)
      if (paths[i].intersects(subset)) through += counts[i];
    best = std::max(best, through);
  }
  return best;
}

RoutingPlan make_plan(const LpSolution& sol, const Network& net) {
  if (sol.path_flows.empty() && !sol.paths.empty())
    throw std::invalid_argument("make_plan needs a path-form solution");
  if (sol.kind != LpKind::Lp1Prime && sol.kind != LpKind::Lp1)
    throw std::invalid_argument("make_plan needs a path-form solution");

  RoutingPlan plan;
  plan.capacity = sol.capacity;
  plan.z = sol.z;
  BigInt tau = 1;
  Rational total = 0;
  for (std::size_t i = 0; i < sol.paths.size(); ++i) {
    if (sol.path_flows[i] == 0) continue;
    plan.paths.push_back(sol.paths[i]);
    plan.path_flows.push_back(sol.path_flows[i]);
    tau = lcm(tau, den(sol.path_flows[i]));
    total += sol.path_flows[i];
  }
  if (total != Rational(static_cast<long long>(sol.capacity)))
    throw std::invalid_argument("make_plan needs total path flow equal to the min-cut");

  plan.tau = to_int64(Rational(tau));
  for (const Rational& f : plan.path_flows) plan.counts.push_back(to_int64(f * plan.tau));
  plan.packets = std::accumulate(plan.counts.begin(), plan.counts.end(), std::int64_t{0});
  plan.lambda = sol.lambda;
  Rational scaled = sol.lambda * plan.tau;
  if (!is_integer(scaled)) throw LpError("tau * lambda is not integral; solution is not optimal");
  plan.lambda_scaled = to_int64(scaled);
  plan.key_rate = sol.lambda;
  plan.rate = Rational(static_cast<long long>(sol.capacity)) - sol.lambda;
  (void)net;
  return plan;
}

namespace {

bool fits(const std::vector<std::vector<std::optional<std::size_t>>>& slots, std::size_t slot,
          const Path& p) {
  return std::all_of(p.edges.begin(), p.edges.end(), [&](EdgeId e) { return !slots[slot][e]; });
}

void place(std::vector<std::vector<std::optional<std::size_t>>>& slots, std::size_t slot,
           const Path& p, std::optional<std::size_t> packet) {
  for (EdgeId e : p.edges) slots[slot][e] = packet;
}

bool backtrack(RoutingSchedule& s, std::size_t packet, std::size_t& budget) {
  if (packet == s.packet_paths.size()) return true;
  if (budget-- == 0) return false;
  const Path& p = s.packet_paths[packet];
  // Copies of the same path are interchangeable; keep their slots non-decreasing.
  std::size_t first = 0;
  if (packet > 0 && s.packet_paths[packet - 1] == p) first = s.packet_slot[packet - 1];
  for (std::size_t slot = first; slot < s.slots.size(); ++slot) {
    if (!fits(s.slots, slot, p)) continue;
    place(s.slots, slot, p, packet);
    s.packet_slot[packet] = slot;
    if (backtrack(s, packet + 1, budget)) return true;
    place(s.slots, slot, p, std::nullopt);
  }
  return false;
}

}  // namespace

RoutingSchedule make_schedule(const RoutingPlan& plan, const Network& net) {
  RoutingSchedule s;
  s.tau = plan.tau;
  for (std::size_t i = 0; i < plan.paths.size(); ++i)
    for (std::int64_t c = 0; c < plan.counts[i]; ++c) s.packet_paths.push_back(plan.paths[i]);
  const auto slots = static_cast<std::size_t>(plan.tau);
  auto empty = std::vector<std::vector<std::optional<std::size_t>>>(
      slots, std::vector<std::optional<std::size_t>>(net.num_edges()));
  s.slots = empty;
  s.packet_slot.assign(s.packet_paths.size(), 0);

  bool greedy_ok = true;
  for (std::size_t j = 0; j < s.packet_paths.size() && greedy_ok; ++j) {
    greedy_ok = false;
    for (std::size_t slot = 0; slot < slots; ++slot) {
      if (!fits(s.slots, slot, s.packet_paths[j])) continue;
      place(s.slots, slot, s.packet_paths[j], j);
      s.packet_slot[j] = slot;
      greedy_ok = true;
      break;
    }
  }
  if (greedy_ok) return s;

  s.slots = empty;
  std::size_t budget = guard_limit(10'000'000);
  if (!backtrack(s, 0, budget))
    throw ScheduleError("cannot fit " + std::to_string(s.packet_paths.size()) + " packets into " +
                        std::to_string(slots) + " slots");
  return s;
}

QuantizedPlan quantize(const LpSolution& sol, const Network& net, std::int64_t tau_fixed) {
  if (tau_fixed < 1) throw std::invalid_argument("tau_fixed must be >= 1");
  if (sol.edge_flows.size() != net.num_edges())
    throw std::invalid_argument("solution carries no edge flows for this network");

  std::vector<std::int64_t> cap(net.num_edges());
  for (EdgeId e = 0; e < net.num_edges(); ++e)
    cap[e] = floor(sol.edge_flows[e] * tau_fixed).convert_to<std::int64_t>();
  auto flow = max_flow(net, cap);
  auto decomposition = decompose_flow(net, flow);

  QuantizedPlan out;
  RoutingPlan& plan = out.plan;
  plan.capacity = sol.capacity;
  plan.z = sol.z;
  plan.tau = tau_fixed;
  for (auto& [path, count] : decomposition) {
    plan.paths.push_back(path);
    plan.counts.push_back(count);
    plan.path_flows.emplace_back(count, tau_fixed);
  }
  plan.packets = std::accumulate(plan.counts.begin(), plan.counts.end(), std::int64_t{0});
  plan.lambda_scaled = max_packets_through_subset(net, plan.paths, plan.counts, sol.z);
  plan.lambda = Rational(plan.lambda_scaled, tau_fixed);
  plan.key_rate = plan.lambda;
  plan.rate = Rational(plan.packets - plan.lambda_scaled, tau_fixed);

  RateLossCertificate& cert = out.certificate;
  cert.tau_fixed = tau_fixed;
  cert.optimal_rate = Rational(static_cast<long long>(sol.capacity)) - sol.lambda;
  cert.quantized_rate = plan.rate;
  cert.loss = cert.optimal_rate - cert.quantized_rate;
  cert.bound = Rational(static_cast<long long>(net.num_edges()), tau_fixed);
  cert.holds = cert.loss < cert.bound;
  return out;
}

}  // namespace advflow
