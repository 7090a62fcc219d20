#pragma once

#include "advflow/codec.hpp"
#include "advflow/exactlp.hpp"
#include "advflow/flowplan.hpp"
#include "advflow/gf.hpp"
#include "advflow/netgraph.hpp"
#include "advflow/rational.hpp"

#include <cstdint>
#include <vector>

namespace advflow {

// ------------------------------------------------------------ mutual information

struct MiResult {
  Rational mi;              // log_q units per instance; valid when `exact`
  double value = 0;         // same quantity as a double
  bool exact = true;
  std::uint64_t states = 0; // (message, key) pairs enumerated
  std::int64_t instances = 1;

  Rational total() const { return mi * instances; }
};

/// I(M; A x) for x = (m, k) uniform over F_q^cols, where the first
/// `message_cols` coordinates are the message. Tabulates the full joint
/// distribution. With `constant_key` the key is pinned to zero instead of
/// being uniform. Throws GuardExceeded past `guard` states (ADVFLOW_GUARD).
MiResult mi_enumerate(const gf::PrimeField& f, const gf::Matrix& observation,
                      Eigen::Index message_cols, bool constant_key = false,
                      std::uint64_t guard = 10'000'000);

/// The codec's observation map for the given packets, enumerated.
MiResult mi_enumerate(const Codec& codec, const std::vector<std::size_t>& observed,
                      gf::Elem rho = 0, bool constant_key = false);

// ------------------------------------------------------------ routing converse

struct ConverseCandidate {
  std::int64_t tau = 0;
  std::vector<std::int64_t> counts;  // per enumerated path
  std::int64_t packets = 0;
  std::int64_t observed_max = 0;     // most packets meeting one size-z subset
  Rational rate;                     // (packets - observed_max) / tau
};

struct ConverseResult {
  std::size_t z = 1;
  std::int64_t tau_max = 0;
  Rational lp_rate;           // C - lambda(z)
  Rational best_rate;         // best over every non-replicating routing searched
  Rational achieved_rate;     // best that was scheduled and passed the rank test
  ConverseCandidate witness;
  std::uint64_t visited = 0;
  bool replication_checked = false;
  Rational replication_rate;  // best with packets copied onto two paths
  Rational plain_rate_short; // best without copies over the same short lengths
  std::uint64_t replication_visited = 0;

  bool matches() const {
    return best_rate <= lp_rate && achieved_rate == lp_rate &&
           (!replication_checked || replication_rate <= plain_rate_short);
  }
};

/// Exhaustive search over integral path multiplicities at every generation
/// length up to `tau_max` (0: max(LP tau, 3)). Each candidate with linear
/// coset precoding carries packets - observed_max message packets. The best
/// candidates are then scheduled and rank-checked for perfect secrecy. A
/// replication class (one packet copied onto two paths) is searched for
/// tau <= 2 when the pair count is small. Requires at most 5 internal nodes.
ConverseResult exhaustive_routing_converse(const Network& net, std::size_t z,
                                           std::int64_t tau_max = 0);

// ------------------------------------------------------------ node cuts

struct CutNodeRole {
  NodeId node = 0;
  Rational flow;                 // total flow entering the node
  std::int64_t capacity_limit = 0;  // min(|In \ E(cut)|, |Out \ E(cut)|)
  bool secrecy_constrained = false;
  bool capacity_constrained = false;
};

struct NodeCutWitness {
  bool found = false;
  NodeCut cut;
  std::vector<CutNodeRole> roles;
  Rational lambda;
  std::size_t cuts_examined = 0;
};

/// Looks for a minimal node cut of internal nodes whose every member carries
/// exactly lambda or saturates its in/out degree outside the cut's own
/// edges. Needs a z = 1 solution with edge flows.
NodeCutWitness nodecut_structure_check(const Network& net, const LpSolution& sol);

// ------------------------------------------------------------ LP cross-check

struct LpCrosscheck {
  std::size_t z = 1;
  Rational lp1, lp1_prime, lp2;
  Rational lambda;
  bool lp1_equal = false;  // LP1 == LP1'
  bool lp2_equal = false;    // LP2 == LP1'
  bool lp2_required = false; // equality is only claimed for z = 1

  bool ok() const { return lp1_equal && (!lp2_required || lp2_equal); }
};

LpCrosscheck lp_crosscheck(const Network& net, std::size_t z);

}  // namespace advflow
