#pragma once

#include "advflow/adversary.hpp"
#include "advflow/codec.hpp"
#include "advflow/exactlp.hpp"
#include "advflow/flowplan.hpp"
#include "advflow/netgraph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace advflow {

struct SimConfig {
  std::string network;        // graph file path
  std::size_t z = 1;
  CodecKind codec = CodecKind::Eaves;
  gf::Elem q = 0;             // 0: smallest admissible prime
  std::int64_t n = 0;         // 0: 1 for the eavesdropping codec, 4(N+1) otherwise
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  AdversarySpec adversary;
  std::vector<std::string> subset_names;  // empty: sweep every size-z subset
  bool report_timing = false;
  std::string traffic_log;    // JSON-lines output path; empty disables

  void validate() const;
};

/// Reads a TOML config. Relative network and log paths resolve against the
/// directory holding the config file.
SimConfig load_config(const std::string& path);
SimConfig parse_config(std::string_view text, const std::string& base_dir = ".");

/// Everything fixed before the first trial: routing, schedule, codec and the
/// adversarial subsets to sweep.
struct Scenario {
  Scenario(Network network, const SimConfig& config);

  Network net;
  LpSolution solution;
  RoutingPlan plan;
  RoutingSchedule schedule;
  Codec codec;
  std::vector<NodeSet> subsets;
};

struct TrialRecord {
  std::size_t trial = 0;
  std::size_t subset_index = 0;
  NodeSet subset;
  bool decoded = false;    // decoder reported success
  bool correct = false;    // and returned the transmitted message
  std::int64_t leakage = 0;  // log_q units, exact
  std::size_t corrupted_packets = 0;
  std::size_t accepted_packets = 0;
  std::string diagnostic;
  std::vector<std::string> traffic;  // JSON lines, only when logging
};

struct SimReport {
  SimConfig config;
  CodecParams params;
  RoutingPlan plan;
  std::vector<TrialRecord> records;
  std::size_t generations = 0;
  std::size_t decode_failures = 0;     // decoder gave up
  std::size_t undetected_errors = 0;   // decoder returned a wrong message
  Rational decode_error_rate;
  std::int64_t max_leakage = 0;
  Rational codec_rate;                 // message symbols per slot per symbol position
  std::optional<double> wall_seconds;
};

/// Deterministic 64-bit seed for one (trial, subset, stream) cell.
std::uint64_t derive_seed(std::uint64_t base, std::size_t trial, std::size_t subset, std::size_t stream);

TrialRecord run_generation(const Scenario& sc, const SimConfig& config, std::size_t trial,
                           std::size_t subset_index);

/// Runs every (trial, subset) cell on `config.jobs` threads and aggregates by
/// cell index, so the report does not depend on scheduling.
SimReport run_campaign(const Scenario& sc, const SimConfig& config);

}  // namespace advflow
