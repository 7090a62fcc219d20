#pragma once

#include "advflow/codec.hpp"
#include "advflow/flowplan.hpp"
#include "advflow/gf.hpp"
#include "advflow/netgraph.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace advflow {

enum class AdversaryModel {
  None,
  LocalizedEavesdrop,
  LocalizedJam,
  LocalizedEavesJam,
  OmniscientJam,
};

enum class StrategyKind { PassThrough, UniformRandom, AdditiveRandomError, TargetedHashForgery };

std::string model_name(AdversaryModel m);
AdversaryModel parse_model(const std::string& name);
std::string strategy_name(StrategyKind s);
StrategyKind parse_strategy(const std::string& name);

bool eavesdrops(AdversaryModel m);
bool jams(AdversaryModel m);
bool omniscient(AdversaryModel m);

struct AdversarySpec {
  AdversaryModel model = AdversaryModel::None;
  std::size_t z = 1;
  std::optional<NodeSet> subset;  // nullopt: sweep every size-z subset
  StrategyKind strategy = StrategyKind::PassThrough;
  std::uint64_t seed = 0;
  double error_density = 1.0;  // additive strategy: chance a payload symbol is hit
};

/// Per-slot, per-edge packet contents of one generation.
using Traffic = std::vector<std::vector<std::optional<gf::RowVector>>>;

/// What an adversary has seen so far. Localized views hold only In(Z)
/// traffic with the hash seed symbol blanked; omniscient views hold every
/// edge. Reads past the current slot throw CausalityViolation.
class CausalView {
 public:
  CausalView(const Network& net, const NodeSet& subset, bool global, std::size_t slots,
             std::optional<Eigen::Index> redacted_symbol);

  std::size_t current_slot() const { return current_; }
  bool global() const { return global_; }
  bool covers(EdgeId e) const;
  const std::optional<gf::RowVector>& at(std::size_t slot, EdgeId e) const;
  std::vector<std::pair<EdgeId, gf::RowVector>> slot_packets(std::size_t slot) const;

  /// Harness side: advance to `slot` and record traffic as it appears.
  void begin_slot(std::size_t slot);
  void record(EdgeId e, const gf::RowVector& packet);

 private:
  const Network* net_;
  bool global_;
  std::vector<bool> covered_;
  std::optional<Eigen::Index> redacted_;
  std::vector<std::vector<std::optional<gf::RowVector>>> seen_;
  std::size_t current_ = 0;
};

/// Everything the code designer publishes: parameters, encoder and schedule.
struct PublicKnowledge {
  const Codec* codec = nullptr;
  const RoutingSchedule* schedule = nullptr;
  const Network* net = nullptr;
};

/// Request for one replacement on an outgoing edge of a controlled node.
struct CorruptionRequest {
  std::size_t slot = 0;
  NodeId node = 0;
  EdgeId out_edge = 0;
  std::size_t packet = 0;
  EdgeId in_edge = 0;  // the edge the packet arrived on; always in the view
};

/// Corruption policy. Returns an additive error on the packet leaving
/// `out_edge`; the all-zero vector forwards unchanged. Expressing every
/// replacement as an error lets localized strategies act on symbols they
/// cannot see.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual gf::RowVector corrupt(const CausalView& view, const CorruptionRequest& req) = 0;
};

std::unique_ptr<Strategy> make_strategy(const AdversarySpec& spec, const PublicKnowledge& pub,
                                        std::uint64_t seed);

struct CorruptionRecord {
  std::size_t slot = 0;
  NodeId node = 0;
  EdgeId edge = 0;
  std::size_t packet = 0;
  gf::RowVector error;
};

struct Interposition {
  Traffic traffic;                           // contents as they crossed each edge
  gf::Matrix received;                       // N x n, as delivered to the terminal
  std::vector<CorruptionRecord> corruptions; // nonzero errors only
  std::vector<std::size_t> observed;         // packet indices seen on In(Z)
};

/// Runs one generation through the schedule, slot by slot and node by node
/// in topological order, applying `strategy` at every controlled node.
/// `strategy` may be null for passive models.
Interposition interpose(const Network& net, const RoutingSchedule& schedule, const Codec& codec,
                        const Generation& gen, AdversaryModel model, const NodeSet& subset,
                        Strategy* strategy);

/// Packets crossing In(Z) within the first `slots` slots.
std::vector<std::size_t> observe(const RoutingSchedule& schedule, const NodeSet& subset,
                                 std::size_t slots);

struct SubsetMetric {
  NodeSet subset;
  double value = 0;
};

struct WorstCase {
  NodeSet subset;
  double value = 0;
  std::vector<SubsetMetric> per_subset;
};

/// Exhaustive sweep over all size-z internal subsets; ties go to the first
/// subset in lexicographic order.
WorstCase worst_case_subset(const Network& net, std::size_t z,
                            const std::function<double(const NodeSet&)>& metric);

}  // namespace advflow
