#pragma once

#include "advflow/exactlp.hpp"
#include "advflow/netgraph.hpp"
#include "advflow/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace advflow {

/// Integral routing derived from an optimal path flow. A generation spans
/// `tau` slots and carries `packets` (N) packets; `counts[i]` of them ride
/// `paths[i]`.
struct RoutingPlan {
  std::size_t capacity = 0;  // C
  std::size_t z = 0;
  std::vector<Path> paths;           // support of the flow, lexicographic
  std::vector<Rational> path_flows;  // F(p)
  std::int64_t tau = 1;
  std::vector<std::int64_t> counts;  // tau * F(p)
  std::int64_t packets = 0;          // N
  Rational lambda;
  std::int64_t lambda_scaled = 0;    // tau * lambda, the key packet budget
  Rational rate;                     // message packets per slot
  Rational key_rate;

  std::int64_t message_packets() const { return packets - lambda_scaled; }
};

/// Per-slot packet placement. Within a slot a packet occupies every edge of
/// its path; no edge carries two packets in the same slot.
struct RoutingSchedule {
  std::int64_t tau = 1;
  std::vector<Path> packet_paths;          // packet index -> path
  std::vector<std::size_t> packet_slot;    // packet index -> slot (0-based)
  std::vector<std::vector<std::optional<std::size_t>>> slots;  // [slot][edge] -> packet

  std::size_t packets() const { return packet_paths.size(); }
  std::vector<std::size_t> packets_in_slot(std::size_t slot) const;
  /// Packets whose path enters any node of `nodes`.
  std::vector<std::size_t> packets_through(const NodeSet& nodes) const;
};

struct RateLossCertificate {
  std::int64_t tau_fixed = 1;
  Rational optimal_rate;    // R
  Rational quantized_rate;  // R'
  Rational loss;            // R - R'
  Rational bound;           // |E| / tau'
  bool holds = false;       // loss < bound
};

struct QuantizedPlan {
  RoutingPlan plan;
  RateLossCertificate certificate;
};

/// Requires a path-form solution with total flow C.
RoutingPlan make_plan(const LpSolution& sol, const Network& net);

/// Greedy earliest-slot placement with paths taken in lexicographic order;
/// falls back to an exact backtracking search if greedy placement fails.
RoutingSchedule make_schedule(const RoutingPlan& plan, const Network& net);

/// Fixes the generation length to `tau_fixed`: floors tau' F(e) per edge,
/// takes an integral maximum flow inside those capacities, decomposes it
/// into paths, and certifies the rate loss against |E| / tau'.
QuantizedPlan quantize(const LpSolution& sol, const Network& net, std::int64_t tau_fixed);

/// Largest number of the plan's packets whose path meets a single subset of
/// `z` internal nodes.
std::int64_t max_packets_through_subset(const Network& net, const std::vector<Path>& paths,
                                        const std::vector<std::int64_t>& counts, std::size_t z);

}  // namespace advflow
