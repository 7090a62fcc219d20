#pragma once

#include "advflow/codec.hpp"
#include "advflow/exactlp.hpp"
#include "advflow/flowplan.hpp"
#include "advflow/netgraph.hpp"
#include "advflow/rational.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace advflow {

using Json = nlohmann::ordered_json;

struct SimConfig;
struct SimReport;
struct MiResult;
struct ConverseResult;
struct NodeCutWitness;
struct LpCrosscheck;

Json rational_json(const Rational& r);  // "num/den"
Json nodes_json(const Network& net, const NodeSet& nodes);
Json path_json(const Network& net, const Path& p);

Json lp_json(const LpProblem& lp);
Json solution_json(const LpSolution& sol, const Network& net);
Json plan_json(const RoutingPlan& plan, const Network& net);
Json schedule_json(const RoutingSchedule& s, const Network& net);
Json certificate_json(const RateLossCertificate& c);
Json params_json(const CodecParams& p);
Json generation_json(const Generation& g, const CodecParams& p);
Json config_json(const SimConfig& c);
Json report_json(const SimReport& r, const Network& net);

Json mi_json(const MiResult& r);
Json converse_json(const ConverseResult& r, const Network& net);
Json nodecut_json(const NodeCutWitness& w, const Network& net);
Json crosscheck_json(const LpCrosscheck& c);

/// One traffic-log record: which packet crossed which edge, with its symbols.
Json traffic_line(const Network& net, std::size_t trial, const NodeSet& subset, std::size_t slot,
                  EdgeId edge, std::size_t packet, const gf::RowVector& symbols);

Json error_json(const std::string& kind, const std::string& message);

}  // namespace advflow
