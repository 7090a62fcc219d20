#include "advflow/json_io.hpp"

#include "advflow/adversary.hpp"
#include "advflow/oracle.hpp"
#include "advflow/simeng.hpp"

namespace advflow {

namespace {

Json vector_json(const Eigen::Ref<const gf::RowVector>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEqual: return ">=";
  }
  return "?";
}

}  // namespace

Json rational_json(const Rational& r) { return to_string(r); }

Json nodes_json(const Network& net, const NodeSet& nodes) {
  Json out = Json::array();
  for (NodeId v : nodes) out.push_back(net.name(v));
  return out;
}

Json path_json(const Network& net, const Path& p) {
  return {{"nodes", path_to_string(net, p)}, {"edges", p.edges}};
}

Json lp_json(const LpProblem& lp) {
  Json j;
  j["lp"] = lp_kind_tag(lp.kind);
  j["z"] = lp.z;
  j["capacity"] = lp.capacity;
  j["subset_size"] = lp.subset_size;
  j["adversary_covers_all"] = lp.adversary_covers_all;
  j["variables"] = lp.variables;
  Json obj = Json::object();
  for (std::size_t i = 0; i < lp.objective.size(); ++i)
    if (lp.objective[i] != 0) obj[lp.variables[i]] = rational_json(lp.objective[i]);
  j["objective"] = {{"sense", "max"}, {"constant", rational_json(lp.objective_constant)}, {"terms", obj}};
  Json rows = Json::array();
  for (const Constraint& c : lp.constraints) {
    Json terms = Json::object();
    for (const auto& [var, coef] : c.terms) terms[lp.variables[var]] = rational_json(coef);
    rows.push_back({{"label", c.label}, {"terms", terms}, {"relation", relation_symbol(c.relation)},
                    {"rhs", rational_json(c.rhs)}});
  }
  j["constraints"] = rows;
  return j;
}

Json solution_json(const LpSolution& sol, const Network& net) {
  Json j;
  j["lp"] = lp_kind_tag(sol.kind);
  j["z"] = sol.z;
  j["capacity"] = sol.capacity;
  j["objective"] = rational_json(sol.objective);
  j["lambda"] = rational_json(sol.lambda);
  j["pivots"] = sol.pivots;
  if (!sol.path_flows.empty()) {
    Json flows = Json::array();
    for (std::size_t i = 0; i < sol.paths.size(); ++i)
      if (sol.path_flows[i] != 0)
        flows.push_back({{"path", path_to_string(net, sol.paths[i])},
                         {"edges", sol.paths[i].edges},
                         {"flow", rational_json(sol.path_flows[i])}});
    j["path_flows"] = flows;
  }
  Json edges = Json::array();
  for (EdgeId e = 0; e < sol.edge_flows.size(); ++e)
    edges.push_back({{"edge", e},
                     {"tail", net.name(net.edge(e).tail)},
                     {"head", net.name(net.edge(e).head)},
                     {"flow", rational_json(sol.edge_flows[e])}});
  j["edge_flows"] = edges;
  return j;
}

Json plan_json(const RoutingPlan& plan, const Network& net) {
  Json j;
  j["capacity"] = plan.capacity;
  j["z"] = plan.z;
  j["tau"] = plan.tau;
  j["packets"] = plan.packets;
  j["lambda"] = rational_json(plan.lambda);
  j["key_packets"] = plan.lambda_scaled;
  j["message_packets"] = plan.message_packets();
  j["rate"] = rational_json(plan.rate);
  j["key_rate"] = rational_json(plan.key_rate);
  Json paths = Json::array();
  for (std::size_t i = 0; i < plan.paths.size(); ++i)
    paths.push_back({{"path", path_to_string(net, plan.paths[i])},
                     {"edges", plan.paths[i].edges},
                     {"flow", rational_json(plan.path_flows[i])},
                     {"count", plan.counts[i]}});
  j["paths"] = paths;
  return j;
}

Json schedule_json(const RoutingSchedule& s, const Network& net) {
  Json j;
  j["tau"] = s.tau;
  Json packets = Json::array();
  for (std::size_t p = 0; p < s.packets(); ++p)
    packets.push_back({{"packet", p},
                       {"slot", s.packet_slot[p] + 1},
                       {"path", path_to_string(net, s.packet_paths[p])}});
  j["packets"] = packets;
  Json slots = Json::array();
  for (std::size_t slot = 0; slot < s.slots.size(); ++slot) {
    Json edges = Json::object();
    for (EdgeId e = 0; e < s.slots[slot].size(); ++e)
      if (s.slots[slot][e]) edges[std::to_string(e)] = *s.slots[slot][e];
    slots.push_back({{"slot", slot + 1}, {"edges", edges}});
  }
  j["slots"] = slots;
  return j;
}

Json certificate_json(const RateLossCertificate& c) {
  return {{"tau_fixed", c.tau_fixed},
          {"optimal_rate", rational_json(c.optimal_rate)},
          {"quantized_rate", rational_json(c.quantized_rate)},
          {"loss", rational_json(c.loss)},
          {"bound", rational_json(c.bound)},
          {"holds", c.holds}};
}

Json params_json(const CodecParams& p) {
  return {{"kind", codec_kind_name(p.kind)},
          {"q", p.q},
          {"bits_per_symbol", p.bits_per_symbol()},
          {"n", p.n},
          {"packets", p.packets},
          {"tau", p.tau},
          {"key_budget", p.lambda_scaled},
          {"rate_packets", p.rate_packets},
          {"key_packets", p.key_packets},
          {"message_symbols", p.message_symbols},
          {"key_symbols", p.key_symbols},
          {"redundancy", rational_json(p.delta)},
          {"leakage_budget", rational_json(p.leakage_budget)}};
}

Json generation_json(const Generation& g, const CodecParams& p) {
  Json packets = Json::array();
  for (Eigen::Index i = 0; i < g.packets.rows(); ++i) packets.push_back(vector_json(g.packets.row(i)));
  Json j{{"params", params_json(p)},
         {"kind", codec_kind_name(g.kind)},
         {"seed", g.seed},
         {"message", vector_json(g.message.transpose())},
         {"key", vector_json(g.key.transpose())},
         {"packets", packets}};
  if (g.kind != CodecKind::Eaves) j["rho"] = g.rho;
  return j;
}

Json config_json(const SimConfig& c) {
  Json adv{{"model", model_name(c.adversary.model)},
           {"strategy", strategy_name(c.adversary.strategy)},
           {"seed", c.adversary.seed},
           {"error_density", c.adversary.error_density}};
  if (c.subset_names.empty()) adv["subset"] = "optimize";
  else adv["subset"] = c.subset_names;
  return {{"network", c.network},
          {"z", c.z},
          {"codec", {{"kind", codec_kind_name(c.codec)}, {"q", c.q}, {"n", c.n}}},
          {"trials", c.trials},
          {"seed", c.seed},
          {"adversary", adv}};
}

Json report_json(const SimReport& r, const Network& net) {
  Json j;
  j["config"] = config_json(r.config);
  j["plan"] = {{"tau", r.plan.tau},
               {"packets", r.plan.packets},
               {"rate", rational_json(r.plan.rate)},
               {"key_rate", rational_json(r.plan.key_rate)}};
  j["codec"] = params_json(r.params);
  j["aggregate"] = {{"generations", r.generations},
                    {"decode_failures", r.decode_failures},
                    {"undetected_errors", r.undetected_errors},
                    {"decode_error_rate", rational_json(r.decode_error_rate)},
                    {"max_leakage", rational_json(Rational(r.max_leakage))},
                    {"codec_rate", rational_json(r.codec_rate)}};
  if (r.wall_seconds) j["aggregate"]["wall_seconds"] = *r.wall_seconds;
  Json trials = Json::array();
  for (const TrialRecord& t : r.records) {
    Json rec{{"trial", t.trial},
             {"subset", nodes_json(net, t.subset)},
             {"decoded", t.decoded},
             {"correct", t.correct},
             {"leakage", t.leakage},
             {"corrupted_packets", t.corrupted_packets},
             {"accepted_packets", t.accepted_packets}};
    if (!t.diagnostic.empty()) rec["diagnostic"] = t.diagnostic;
    trials.push_back(std::move(rec));
  }
  j["trials"] = trials;
  return j;
}

Json mi_json(const MiResult& r) {
  Json j{{"exact", r.exact}, {"states", r.states}, {"instances", r.instances}, {"value", r.value}};
  if (r.exact) {
    j["mi"] = rational_json(r.mi);
    j["total"] = rational_json(r.total());
  }
  return j;
}

Json converse_json(const ConverseResult& r, const Network& net) {
  (void)net;
  Json j{{"z", r.z},
         {"tau_max", r.tau_max},
         {"lp_rate", rational_json(r.lp_rate)},
         {"best_rate", rational_json(r.best_rate)},
         {"achieved_rate", rational_json(r.achieved_rate)},
         {"visited", r.visited},
         {"matches", r.matches()}};
  j["witness"] = {{"tau", r.witness.tau},
                  {"counts", r.witness.counts},
                  {"packets", r.witness.packets},
                  {"observed_max", r.witness.observed_max}};
  j["replication"] = {{"checked", r.replication_checked}};
  if (r.replication_checked) {
    j["replication"]["rate"] = rational_json(r.replication_rate);
    j["replication"]["plain_rate"] = rational_json(r.plain_rate_short);
    j["replication"]["visited"] = r.replication_visited;
  }
  return j;
}

Json nodecut_json(const NodeCutWitness& w, const Network& net) {
  Json j{{"found", w.found}, {"lambda", rational_json(w.lambda)}, {"cuts_examined", w.cuts_examined}};
  if (w.found) {
    j["cut"] = nodes_json(net, w.cut.nodes);
    Json roles = Json::array();
    for (const auto& r : w.roles) {
      Json kinds = Json::array();
      if (r.secrecy_constrained) kinds.push_back("secrecy");
      if (r.capacity_constrained) kinds.push_back("capacity");
      roles.push_back({{"node", net.name(r.node)},
                       {"flow", rational_json(r.flow)},
                       {"capacity_limit", r.capacity_limit},
                       {"constraints", kinds}});
    }
    j["roles"] = roles;
  }
  return j;
}

Json crosscheck_json(const LpCrosscheck& c) {
  return {{"z", c.z},
          {"lp1", rational_json(c.lp1)},
          {"lp1_prime", rational_json(c.lp1_prime)},
          {"lp2", rational_json(c.lp2)},
          {"lambda", rational_json(c.lambda)},
          {"lp1_equals_lp1_prime", c.lp1_equal},
          {"lp2_equals_lp1_prime", c.lp2_equal},
          {"lp2_equality_required", c.lp2_required},
          {"ok", c.ok()}};
}

Json traffic_line(const Network& net, std::size_t trial, const NodeSet& subset, std::size_t slot,
                  EdgeId edge, std::size_t packet, const gf::RowVector& symbols) {
  return {{"trial", trial},
          {"subset", nodes_json(net, subset)},
          {"slot", slot + 1},
          {"edge", edge},
          {"tail", net.name(net.edge(edge).tail)},
          {"head", net.name(net.edge(edge).head)},
          {"packet", packet},
          {"symbols", vector_json(symbols)}};
}

Json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace advflow
