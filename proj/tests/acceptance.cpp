// Acceptance driver: one PASS/FAIL line per criterion, details indented below.
// Exit status is the number of failing criteria.

#include "advflow/adversary.hpp"
#include "advflow/codec.hpp"
#include "advflow/error.hpp"
#include "advflow/exactlp.hpp"
#include "advflow/flowplan.hpp"
#include "advflow/netgraph.hpp"
#include "advflow/oracle.hpp"
#include "advflow/simeng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

using namespace advflow;

namespace {

using Clock = std::chrono::steady_clock;

std::string graph_path(const std::string& name) {
  return std::string(ADVFLOW_DATA_DIR) + "/graphs/" + name + ".graph";
}

std::vector<std::string> corpus() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(std::string(ADVFLOW_DATA_DIR) + "/graphs"))
    if (e.path().extension() == ".graph") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;
  void note(const std::string& s) { notes.push_back(s); }
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("violated: " + what);
    }
  }
};

int failures = 0;

void report(const std::string& id, const std::string& title, const std::function<Verdict()>& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.note(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::ostringstream line;
  line << (v.pass ? "PASS" : "FAIL") << " " << id << " " << title << " (" << std::fixed;
  line.precision(2);
  line << secs << " s)";
  std::cout << line.str() << "\n";
  for (const auto& n : v.notes) std::cout << "     " << n << "\n";
  std::cout.flush();
  if (!v.pass) ++failures;
}

LpSolution lp1_prime(const Network& net, std::size_t z) {
  return solve_exact(build_lp1_prime(net, z, enumerate_paths(net)));
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// Runs `count` independent cells on every hardware thread; results in index order.
template <typename T>
std::vector<T> parallel_cells(std::size_t count, const std::function<T(std::size_t)>& cell) {
  std::vector<T> out(count);
  std::atomic<std::size_t> next{0};
  const std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < std::min(threads, count); ++t)
    pool.emplace_back([&] {
      for (std::size_t k; (k = next.fetch_add(1)) < count;) out[k] = cell(k);
    });
  pool.clear();
  return out;
}

// Failure bound N(n-N-2)/q plus three binomial standard deviations.
double jam_threshold(const CodecParams& p, std::size_t trials) {
  const double bound = std::min(1.0, static_cast<double>(p.packets * (p.n - p.packets - 2)) / static_cast<double>(p.q));
  return bound + 3.0 * std::sqrt(bound * (1.0 - bound) / static_cast<double>(trials));
}

struct JamRun {
  std::size_t failures = 0;
  std::size_t trials = 0;
  std::int64_t max_leakage = 0;
  double threshold = 0;
};

// One jammed node per trial, rotating through every internal node.
JamRun rotating_jam(const Scenario& sc, const SimConfig& cfg) {
  JamRun run;
  run.trials = cfg.trials;
  auto records = parallel_cells<TrialRecord>(cfg.trials, [&](std::size_t t) {
    return run_generation(sc, cfg, t, t % sc.subsets.size());
  });
  for (const auto& r : records) {
    run.failures += !r.correct;
    run.max_leakage = std::max(run.max_leakage, r.leakage);
  }
  run.threshold = jam_threshold(sc.codec.params(), cfg.trials);
  return run;
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << x;
  return s.str();
}

// Largest hash-packet length keeping (n-N-1)N below q, capped at 4(N+1).
std::int64_t packet_length_for(std::int64_t packets, gf::Elem q) {
  return std::min<std::int64_t>(4 * (packets + 1), packets + 1 + (q - 1) / packets);
}

bool gate_open = false;

}  // namespace

int main() {
  const auto graphs = corpus();
  std::cout << "corpus: " << graphs.size() << " graphs\n";

  report("1a", "cockroach transcription gate", [] {
    Verdict v;
    Network net = load_network(graph_path("cockroach"));
    v.require(min_cut(net) == 4, "min-cut is 4");
    for (NodeId u : net.internal_nodes())
      v.require(net.in_edges(u).size() == 2, "node " + net.name(u) + " has in-degree 2");
    v.note("min_cut=" + std::to_string(min_cut(net)) + ", internal nodes=" + std::to_string(net.internal_nodes().size()));
    gate_open = v.pass;
    return v;
  });

  report("1", "cockroach reproduction", [] {
    Verdict v;
    if (!gate_open) {
      v.pass = false;
      v.note("blocked: transcription gate failed");
      return v;
    }
    const auto start = Clock::now();
    Network net = load_network(graph_path("cockroach"));
    LpSolution sol = lp1_prime(net, 1);
    RoutingPlan plan = make_plan(sol, net);
    RoutingSchedule s = make_schedule(plan, net);
    const double secs = seconds_since(start);
    v.require(sol.objective == Rational(8, 3), "objective 8/3");
    v.require(sol.lambda == Rational(4, 3), "lambda 4/3");
    v.require(plan.tau == 3 && plan.packets == 12, "tau 3, N 12");
    v.require(plan.key_rate == Rational(4, 3), "key rate 4/3");
    v.require(static_cast<std::int64_t>(s.slots.size()) == plan.tau, "schedule spans tau slots");
    v.require(secs < 1.0, "runtime under 1 s");
    v.note("objective=" + to_string(sol.objective) + " lambda=" + to_string(sol.lambda) + " tau=" +
           std::to_string(plan.tau) + " N=" + std::to_string(plan.packets) + " key_rate=" + to_string(plan.key_rate));
    return v;
  });

  report("2", "LP equivalences on every graph, z in {1,2}", [&] {
    Verdict v;
    const auto start = Clock::now();
    v.require(graphs.size() >= 8, "at least 8 bundled graphs");
    std::size_t checked = 0;
    for (const auto& name : graphs) {
      Network net = load_network(graph_path(name));
      auto paths = enumerate_paths(net);
      for (std::size_t z : {1u, 2u}) {
        Rational a = solve_exact(build_lp1(net, z, paths)).objective;
        Rational b = solve_exact(build_lp1_prime(net, z, paths)).objective;
        v.require(a == b, name + " z=" + std::to_string(z) + ": LP1 " + to_string(a) + " vs LP1' " + to_string(b));
        if (z == 1) {
          Rational c = solve_exact(build_lp2(net, z)).objective;
          v.require(c == b, name + ": LP2 " + to_string(c) + " vs LP1' " + to_string(b));
        }
        ++checked;
      }
    }
    const double secs = seconds_since(start);
    v.require(secs < 10.0, "runtime under 10 s");
    v.note(std::to_string(checked) + " (graph, z) pairs equal");
    return v;
  });

  report("3", "perfect secrecy by rank, every graph and subset", [&] {
    Verdict v;
    std::size_t instances = 0;
    for (const auto& name : graphs) {
      Network net = load_network(graph_path(name));
      for (std::size_t z : {1u, 2u}) {
        RoutingPlan plan = make_plan(lp1_prime(net, z), net);
        RoutingSchedule s = make_schedule(plan, net);
        Codec codec(eaves_params(plan, 1));
        for (const NodeSet& subset : internal_subsets(net, z)) {
          const auto leak = leakage_symbols(codec, s.packets_through(subset));
          v.require(leak == 0, name + " z=" + std::to_string(z) + " leaks " + std::to_string(leak));
          ++instances;
        }
      }
    }
    v.note(std::to_string(instances) + " (graph, z, subset) instances with zero leakage");
    return v;
  });

  report("4", "perfect secrecy by enumeration at q=5", [&] {
    Verdict v;
    std::size_t enumerated = 0, skipped = 0;
    for (const auto& name : graphs) {
      Network net = load_network(graph_path(name));
      for (std::size_t z : {1u, 2u}) {
        RoutingPlan plan = make_plan(lp1_prime(net, z), net);
        if (plan.packets >= 5) {
          ++skipped;
          continue;
        }
        RoutingSchedule s = make_schedule(plan, net);
        Codec codec(eaves_params(plan, 1, 5));
        for (const NodeSet& subset : internal_subsets(net, z)) {
          auto seen = s.packets_through(subset);
          MiResult r = mi_enumerate(codec, seen);
          const auto rank_leak = leakage_symbols(codec, seen);
          v.require(r.exact && r.mi == 0 && rank_leak == 0, name + " z=" + std::to_string(z) + " mi " + to_string(r.mi));
          ++enumerated;
        }
      }
    }
    v.note(std::to_string(enumerated) + " instances enumerated; " + std::to_string(skipped) +
           " (graph, z) plans need q > N >= 5 and are covered by criterion 3");
    return v;
  });

  report("5", "noiseless decoding, 1000 trials per codec per graph", [&] {
    Verdict v;
    std::size_t runs = 0;
    std::vector<std::string> not_applicable;
    for (const auto& name : graphs) {
      for (CodecKind kind : {CodecKind::Eaves, CodecKind::Jam, CodecKind::EavesJam}) {
        SimConfig cfg;
        cfg.network = graph_path(name);
        cfg.codec = kind;
        cfg.trials = 1000;
        cfg.seed = 5;
        cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
        std::optional<Scenario> sc;
        try {
          sc.emplace(load_network(cfg.network), cfg);
        } catch (const Error& e) {
          // Hash-packet codecs need lambda < C/2 and a positive rate.
          if (kind == CodecKind::Eaves) throw;
          not_applicable.push_back(name + "/" + codec_kind_name(kind));
          continue;
        }
        SimReport rep = run_campaign(*sc, cfg);
        v.require(rep.decode_failures + rep.undetected_errors == 0,
                  name + "/" + codec_kind_name(kind) + ": " + std::to_string(rep.decode_failures + rep.undetected_errors) + " errors");
        ++runs;
      }
    }
    v.note(std::to_string(runs) + " (graph, codec) runs at 100% success");
    std::string na;
    for (const auto& s : not_applicable) na += (na.empty() ? "" : ", ") + s;
    v.note("hash codecs not applicable: " + na);
    return v;
  });

  report("6", "jamming resilience at q=251 and hash soundness at q=101", [&] {
    Verdict v;
    const auto start = Clock::now();
    for (const auto& name : graphs) {
      Network net = load_network(graph_path(name));
      LpSolution sol = lp1_prime(net, 1);
      if (sol.lambda * 2 >= static_cast<long>(min_cut(net))) continue;
      RoutingPlan plan = make_plan(sol, net);
      for (StrategyKind strat : {StrategyKind::UniformRandom, StrategyKind::TargetedHashForgery}) {
        SimConfig cfg;
        cfg.network = graph_path(name);
        cfg.codec = CodecKind::Jam;
        cfg.q = 251;
        cfg.n = packet_length_for(plan.packets, 251);
        cfg.trials = 10000;
        cfg.seed = 6;
        cfg.adversary.model = AdversaryModel::LocalizedJam;
        cfg.adversary.strategy = strat;
        cfg.adversary.seed = 66;
        Scenario sc(load_network(cfg.network), cfg);
        JamRun run = rotating_jam(sc, cfg);
        const double rate = static_cast<double>(run.failures) / static_cast<double>(run.trials);
        const std::string tag = name + "/" + strategy_name(strat) + " n=" + std::to_string(cfg.n);
        v.require(rate <= run.threshold, tag + " failure rate " + fmt(rate) + " > " + fmt(run.threshold));
        v.note(tag + ": " + std::to_string(run.failures) + "/" + std::to_string(run.trials) + " failures (rate " +
               fmt(rate) + ", threshold " + fmt(run.threshold) + ")");
      }
    }

    // Exhaustive rho sweep: each forged packet passes for at most n-N-2 seeds.
    std::mt19937_64 rng(101);
    for (const char* name : {"three_parallel", "cockroach"}) {
      Network net = load_network(graph_path(name));
      RoutingPlan plan = make_plan(lp1_prime(net, 1), net);
      const std::int64_t n = packet_length_for(plan.packets, 101);
      Codec codec(jam_params(plan, n, 101));
      const auto L = codec.params().payload_length();
      gf::Vector msg = random_message(codec, rng);
      std::vector<Generation> gens;
      for (gf::Elem rho = 0; rho < 101; ++rho) gens.push_back(jam_encode(codec, msg, rho));
      std::int64_t worst = 0;
      std::size_t forged = 0;
      for (std::int64_t j = 0; j < plan.packets; ++j) {
        for (int round = 0; round < 10; ++round) {
          gf::RowVector err = random_vector(codec.field(), L, rng).transpose();
          if (err.isZero()) continue;
          std::int64_t undetected = 0;
          for (gf::Elem rho = 0; rho < 101; ++rho) {
            gf::Matrix bad = gens[static_cast<std::size_t>(rho)].packets;
            bad.block(j, 0, 1, L) = codec.field().reduce(bad.block(j, 0, 1, L) + err);
            DecodeResult r = decode(codec, bad);
            undetected += std::count(r.accepted_packets.begin(), r.accepted_packets.end(), static_cast<std::size_t>(j));
          }
          worst = std::max(worst, undetected);
          ++forged;
        }
      }
      v.require(worst <= n - plan.packets - 2, std::string(name) + " sweep: " + std::to_string(worst) + " undetected seeds");
      v.note(std::string(name) + " sweep n=" + std::to_string(n) + ": " + std::to_string(forged) +
             " forged packets, at most " + std::to_string(worst) + " undetected seeds each (bound " +
             std::to_string(n - plan.packets - 2) + ")");
    }
    const double secs = seconds_since(start);
    v.require(secs < 120.0, "runtime under 2 min");
    return v;
  });

  report("7", "routing converse on graphs with at most 5 internal nodes", [&] {
    Verdict v;
    const auto start = Clock::now();
    std::size_t checked = 0;
    for (const auto& name : graphs) {
      Network net = load_network(graph_path(name));
      if (net.internal_nodes().size() > 5) continue;
      ConverseResult r = exhaustive_routing_converse(net, 1);
      v.require(r.best_rate == r.lp_rate && r.achieved_rate == r.lp_rate,
                name + ": best " + to_string(r.best_rate) + ", achieved " + to_string(r.achieved_rate) + ", LP " +
                    to_string(r.lp_rate));
      v.require(r.matches(), name + " converse mismatch");
      v.note(name + ": C - lambda = " + to_string(r.lp_rate) + " over " + std::to_string(r.visited) +
             " routings (tau <= " + std::to_string(r.tau_max) + ")");
      ++checked;
    }
    v.require(seconds_since(start) < 300.0, "runtime under 5 min");
    v.note(std::to_string(checked) + " tiny graphs");
    return v;
  });

  report("8", "rate-loss bound for tau' in 1..20", [&] {
    Verdict v;
    std::size_t checked = 0;
    Rational worst_margin = -1;
    for (const auto& name : graphs) {
      Network net = load_network(graph_path(name));
      LpSolution sol = lp1_prime(net, 1);
      for (std::int64_t tf = 1; tf <= 20; ++tf) {
        RateLossCertificate c = quantize(sol, net, tf).certificate;
        v.require(c.loss < c.bound, name + " tau'=" + std::to_string(tf) + ": loss " + to_string(c.loss) +
                                        " >= " + to_string(c.bound));
        Rational margin = c.loss / c.bound;
        if (margin > worst_margin) worst_margin = margin;
        ++checked;
      }
    }
    v.note(std::to_string(checked) + " certificates; largest loss/bound ratio " + to_string(worst_margin));
    return v;
  });

  report("9", "node-cut structure for the z=1 optimum", [&] {
    Verdict v;
    for (const auto& name : graphs) {
      Network net = load_network(graph_path(name));
      NodeCutWitness w = nodecut_structure_check(net, lp1_prime(net, 1));
      v.require(w.found, name + ": no qualifying minimal node cut");
      if (w.found) {
        std::string cut;
        for (NodeId u : w.cut.nodes) cut += (cut.empty() ? "" : ",") + net.name(u);
        v.note(name + ": {" + cut + "}");
      }
    }
    return v;
  });

  report("10", "eavesdropping and jamming combined on cockroach", [&] {
    Verdict v;
    if (!gate_open) {
      v.pass = false;
      v.note("blocked: transcription gate failed");
      return v;
    }
    Rational previous = -1;
    for (std::int64_t n : {25, 50, 100}) {
      SimConfig cfg;
      cfg.network = graph_path("cockroach");
      cfg.codec = CodecKind::EavesJam;
      cfg.n = n;
      cfg.trials = n == 100 ? 200 : 500;
      cfg.seed = 10;
      cfg.adversary.model = AdversaryModel::LocalizedEavesJam;
      cfg.adversary.strategy = StrategyKind::TargetedHashForgery;
      cfg.adversary.seed = 1010;
      Scenario sc(load_network(cfg.network), cfg);
      JamRun run = rotating_jam(sc, cfg);
      const CodecParams& p = sc.codec.params();
      // Every seed at the smallest n; a seeded sample beyond that.
      std::vector<gf::Elem> seeds{0, 1, p.q - 1};
      std::mt19937_64 pick(static_cast<std::uint64_t>(n));
      if (n == 25)
        for (gf::Elem rho = 2; rho < p.q - 1; ++rho) seeds.push_back(rho);
      else
        for (int i = 0; i < 24; ++i) seeds.push_back(random_elem(sc.codec.field(), pick));
      std::int64_t analytic = 0;
      for (const NodeSet& subset : sc.subsets)
        for (gf::Elem rho : seeds)
          analytic = std::max(analytic, leakage_symbols(sc.codec, sc.schedule.packets_through(subset), rho));
      const Rational rate(p.rate_packets, p.tau);
      const double fail = static_cast<double>(run.failures) / static_cast<double>(run.trials);
      const std::string tag = "n=" + std::to_string(n);
      v.require(fail <= run.threshold, tag + " failure rate " + fmt(fail) + " > " + fmt(run.threshold));
      v.require(analytic == 0 && run.max_leakage == 0, tag + " leaks");
      v.require(rate > previous, tag + " rate did not increase");
      v.require(rate < Rational(4, 3), tag + " rate exceeds C - 2 lambda");
      v.note(tag + " q=" + std::to_string(p.q) + ": R''/tau = " + to_string(rate) + ", " + std::to_string(run.failures) +
             "/" + std::to_string(run.trials) + " failures (threshold " + fmt(run.threshold) + "), leakage " +
             std::to_string(std::max(analytic, run.max_leakage)) + " over " + std::to_string(seeds.size()) + " seeds");
      previous = rate;
    }
    return v;
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures;
}
