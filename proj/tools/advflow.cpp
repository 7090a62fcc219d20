// advflow: plan, schedule, simulate and verify secure routing against
// node-based adversaries. Machine output is JSON on stdout; a short human
// summary goes to stderr.

#include "advflow/error.hpp"
#include "advflow/exactlp.hpp"
#include "advflow/flowplan.hpp"
#include "advflow/json_io.hpp"
#include "advflow/netgraph.hpp"
#include "advflow/oracle.hpp"
#include "advflow/simeng.hpp"

#include <CLI11.hpp>

#include <future>
#include <iostream>

using namespace advflow;

namespace {

struct Options {
  std::string graph;
  std::string config;
  std::size_t z = 1;
  std::string lp = "1'";
  std::int64_t tau_fixed = 0;
  std::int64_t q = -1;
  std::int64_t n = -1;
  std::int64_t trials = -1;
  std::int64_t seed = -1;
  std::size_t jobs = 1;
  std::string checks = "all";
  bool emit_lp = false;
};

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_solve(const Options& o) {
  Network net = load_network(o.graph);
  LpProblem lp;
  if (o.lp == "2") {
    lp = build_lp2(net, o.z);
  } else {
    auto paths = enumerate_paths(net);
    lp = o.lp == "1" ? build_lp1(net, o.z, paths) : build_lp1_prime(net, o.z, paths);
  }
  LpSolution sol = solve_exact(lp);
  Json out = solution_json(sol, net);
  out["adversary_covers_all"] = lp.adversary_covers_all;
  if (o.emit_lp) out["problem"] = lp_json(lp);
  emit(out);
  std::cerr << "LP" << lp_kind_tag(sol.kind) << " z=" << o.z << ": objective " << to_string(sol.objective)
            << ", lambda " << to_string(sol.lambda) << "\n";
  return 0;
}

int cmd_schedule(const Options& o) {
  Network net = load_network(o.graph);
  auto paths = enumerate_paths(net);
  LpSolution sol = solve_exact(build_lp1_prime(net, o.z, paths));
  Json out;
  RoutingPlan plan;
  if (o.tau_fixed > 0) {
    QuantizedPlan qp = quantize(sol, net, o.tau_fixed);
    plan = qp.plan;
    out["certificate"] = certificate_json(qp.certificate);
  } else {
    plan = make_plan(sol, net);
  }
  out["plan"] = plan_json(plan, net);
  RoutingSchedule s = make_schedule(plan, net);
  out["schedule"] = schedule_json(s, net);
  emit(out);
  std::cerr << "tau=" << plan.tau << " N=" << plan.packets << " rate " << to_string(plan.rate)
            << " key rate " << to_string(plan.key_rate) << "\n";
  return 0;
}

int cmd_simulate(const Options& o) {
  SimConfig cfg = load_config(o.config);
  if (o.q >= 0) cfg.q = o.q;
  if (o.n >= 0) cfg.n = o.n;
  if (o.trials >= 0) cfg.trials = static_cast<std::size_t>(o.trials);
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  cfg.jobs = o.jobs;
  cfg.validate();
  Scenario sc(load_network(cfg.network), cfg);
  SimReport rep = run_campaign(sc, cfg);
  emit(report_json(rep, sc.net));
  std::cerr << rep.generations << " generations, " << rep.decode_failures + rep.undetected_errors
            << " decode errors, max leakage " << rep.max_leakage << " symbols\n";
  return 0;
}

Json check_mi(const Network& net, std::size_t z, gf::Elem q) {
  auto paths = enumerate_paths(net);
  RoutingPlan plan = make_plan(solve_exact(build_lp1_prime(net, z, paths)), net);
  if (plan.packets < 1) return {{"skipped", "plan carries no packets"}};
  if (q <= plan.packets)
    return {{"skipped", "q=" + std::to_string(q) + " does not exceed N=" + std::to_string(plan.packets)}};
  Codec codec(eaves_params(plan, 1, q));
  RoutingSchedule s = make_schedule(plan, net);
  Json per = Json::array();
  Rational worst = 0;
  bool exact = true;
  for (const NodeSet& subset : internal_subsets(net, z)) {
    MiResult r = mi_enumerate(codec, s.packets_through(subset));
    exact = exact && r.exact;
    if (r.exact) worst = std::max(worst, r.mi);
    Json row = mi_json(r);
    row["subset"] = nodes_json(net, subset);
    per.push_back(row);
  }
  return {{"q", q}, {"max_leakage", rational_json(worst)}, {"exact", exact}, {"subsets", per}};
}

int cmd_verify(const Options& o) {
  Network net = load_network(o.graph);
  const gf::Elem q = o.q > 0 ? o.q : 5;
  std::vector<std::string> wanted;
  if (o.checks == "all") wanted = {"lpcross", "mi", "nodecut", "converse"};
  else wanted = {o.checks};

  auto run = [&](const std::string& check) -> Json {
    if (check == "lpcross") return crosscheck_json(lp_crosscheck(net, o.z));
    if (check == "mi") return check_mi(net, o.z, q);
    if (check == "nodecut") {
      if (o.z != 1) return {{"skipped", "node-cut structure is checked for z = 1"}};
      LpSolution sol = solve_exact(build_lp1_prime(net, 1, enumerate_paths(net)));
      return nodecut_json(nodecut_structure_check(net, sol), net);
    }
    if (check == "converse") {
      if (net.internal_nodes().size() > 5) return {{"skipped", "more than 5 internal nodes"}};
      return converse_json(exhaustive_routing_converse(net, o.z), net);
    }
    throw ConfigError("unknown check: " + check);
  };

  std::vector<Json> results(wanted.size());
  if (o.jobs > 1) {
    std::vector<std::future<Json>> futures;
    for (const auto& c : wanted) futures.push_back(std::async(std::launch::async, run, c));
    for (std::size_t i = 0; i < wanted.size(); ++i) results[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < wanted.size(); ++i) results[i] = run(wanted[i]);
  }
  if (wanted.size() == 1) {
    emit(results[0]);
  } else {
    Json out;
    out["z"] = o.z;
    for (std::size_t i = 0; i < wanted.size(); ++i) out[wanted[i]] = results[i];
    emit(out);
  }
  std::cerr << "verified " << o.checks << " on " << o.graph << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure routing planner and adversarial simulator"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "Solve a flow-balancing LP exactly");
  solve->add_option("graph", o.graph, "Graph file")->required()->check(CLI::ExistingFile);
  solve->add_option("--z", o.z, "Adversary budget (nodes)")->check(CLI::PositiveNumber);
  solve->add_option("--lp", o.lp, "Program: 1, 1' or 2")->check(CLI::IsMember({"1", "1'", "2"}));
  solve->add_flag("--emit-lp", o.emit_lp, "Include the full problem in the output");

  auto* schedule = app.add_subcommand("schedule", "Routing plan and per-slot schedule");
  schedule->add_option("graph", o.graph, "Graph file")->required()->check(CLI::ExistingFile);
  schedule->add_option("--z", o.z, "Adversary budget (nodes)")->check(CLI::PositiveNumber);
  schedule->add_option("--tau-fixed", o.tau_fixed, "Quantize to this generation length")
      ->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Run a seeded simulation campaign");
  simulate->add_option("config", o.config, "TOML config")->required()->check(CLI::ExistingFile);
  simulate->add_option("--q", o.q, "Field size override");
  simulate->add_option("--n", o.n, "Packet length override");
  simulate->add_option("--trials", o.trials, "Trial count override");
  simulate->add_option("--seed", o.seed, "Seed override");
  simulate->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Run brute-force oracles");
  verify->add_option("graph", o.graph, "Graph file")->required()->check(CLI::ExistingFile);
  verify->add_option("--z", o.z, "Adversary budget (nodes)")->check(CLI::PositiveNumber);
  verify->add_option("--checks", o.checks, "mi, converse, nodecut, lpcross or all")
      ->check(CLI::IsMember({"mi", "converse", "nodecut", "lpcross", "all"}));
  verify->add_option("--q", o.q, "Field size for the enumeration (default 5)");
  verify->add_option("--jobs", o.jobs, "Run checks concurrently")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_json("usage_error", e.what()).dump(2) << '\n';
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*solve) return cmd_solve(o);
    if (*schedule) return cmd_schedule(o);
    if (*simulate) return cmd_simulate(o);
    if (*verify) return cmd_verify(o);
  } catch (const Error& e) {
    std::cout << error_json(e.kind(), e.what()).dump(2) << '\n';
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << error_json("internal_error", e.what()).dump(2) << '\n';
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
