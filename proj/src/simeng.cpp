#include "advflow/simeng.hpp"

#include "advflow/error.hpp"
#include "advflow/json_io.hpp"

#include <toml.hpp>

#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace advflow {

namespace fs = std::filesystem;

void SimConfig::validate() const {
  if (network.empty()) throw ConfigError("config needs a network file");
  if (z < 1) throw ConfigError("z must be >= 1");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (n < 0) throw ConfigError("n must be >= 0");
  if (codec == CodecKind::Eaves && jams(adversary.model))
    throw ConfigError("the eavesdropping codec has no defence against a jamming adversary (model " +
                      model_name(adversary.model) + ")");
  if (adversary.error_density < 0 || adversary.error_density > 1)
    throw ConfigError("error_density must lie in [0, 1]");
}

namespace {

std::string resolve(const std::string& path, const std::string& base) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).lexically_normal().string();
}

template <typename T>
T integer_field(const toml::node_view<const toml::node>& node, const char* key, T fallback) {
  if (!node) return fallback;
  auto v = node.value<std::int64_t>();
  if (!v) throw ConfigError(std::string("'") + key + "' must be an integer");
  if (*v < 0) throw ConfigError(std::string("'") + key + "' must be non-negative");
  return static_cast<T>(*v);
}

}  // namespace

SimConfig parse_config(std::string_view text, const std::string& base_dir) {
  toml::table tbl;
  try {
    tbl = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ConfigError("line " + std::to_string(e.source().begin.line) + ": " +
                      std::string(e.description()));
  }
  const toml::node_view<const toml::node> root{static_cast<const toml::node&>(tbl)};
  SimConfig c;
  auto net = root["network"].value<std::string>();
  if (!net) throw ConfigError("config needs 'network' (graph file path)");
  c.network = resolve(*net, base_dir);
  c.z = integer_field<std::size_t>(root["z"], "z", 1);
  c.trials = integer_field<std::size_t>(root["trials"], "trials", 1);
  c.seed = integer_field<std::uint64_t>(root["seed"], "seed", 0);
  c.jobs = integer_field<std::size_t>(root["jobs"], "jobs", 1);
  c.report_timing = root["report_timing"].value_or(false);
  c.traffic_log = resolve(root["traffic_log"].value_or(std::string{}), base_dir);

  auto codec = root["codec"];
  c.codec = parse_codec_kind(codec["kind"].value_or(std::string("eaves")));
  c.q = integer_field<gf::Elem>(codec["q"], "codec.q", 0);
  c.n = integer_field<std::int64_t>(codec["n"], "codec.n", 0);

  auto adv = root["adversary"];
  c.adversary.model = parse_model(adv["model"].value_or(std::string("none")));
  c.adversary.z = c.z;
  c.adversary.strategy = parse_strategy(adv["strategy"].value_or(std::string("pass-through")));
  c.adversary.seed = integer_field<std::uint64_t>(adv["seed"], "adversary.seed", c.seed);
  c.adversary.error_density = adv["error_density"].value_or(1.0);
  if (auto names = adv["subset"].as_array()) {
    // Names are resolved against the network once it is loaded.
    std::vector<std::string> list;
    for (const auto& item : *names) {
      auto s = item.value<std::string>();
      if (!s) throw ConfigError("adversary.subset entries must be node names");
      list.push_back(*s);
    }
    if (list.empty()) throw ConfigError("adversary.subset list is empty");
    c.subset_names = std::move(list);
  } else if (auto s = adv["subset"].value<std::string>(); s && *s != "optimize") {
    throw ConfigError("adversary.subset must be \"optimize\" or a list of node names");
  }
  c.validate();
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), fs::path(path).parent_path().string());
}

namespace {

RoutingPlan plan_for(const Network& net, std::size_t z, LpSolution& solution) {
  auto paths = enumerate_paths(net, guard_limit(1'000'000));
  solution = solve_exact(build_lp1_prime(net, z, paths));
  return make_plan(solution, net);
}

CodecParams params_for(const SimConfig& c, const RoutingPlan& plan) {
  std::int64_t n = c.n;
  if (n == 0) n = c.codec == CodecKind::Eaves ? 1 : 4 * (plan.packets + 1);
  switch (c.codec) {
    case CodecKind::Eaves: return eaves_params(plan, n, c.q);
    case CodecKind::Jam: return jam_params(plan, n, c.q);
    case CodecKind::EavesJam: return eavesjam_params(plan, n, c.q);
  }
  throw ConfigError("unknown codec kind");
}

NodeSet resolve_subset(const Network& net, const std::vector<std::string>& names, std::size_t z) {
  NodeSet out;
  for (const auto& name : names) {
    auto v = net.find(name);
    if (!v) throw ConfigError("unknown node in adversary.subset: " + name);
    if (!net.is_internal(*v)) throw ConfigError("source and terminal cannot be adversarial: " + name);
    out.push_back(*v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.size() > z) throw ConfigError("adversary.subset has more than z nodes");
  return out;
}

}  // namespace

Scenario::Scenario(Network network, const SimConfig& config)
    : net(std::move(network)),
      plan(plan_for(net, config.z, solution)),
      schedule(make_schedule(plan, net)),
      codec(params_for(config, plan)) {
  if (config.adversary.model == AdversaryModel::None) {
    subsets.push_back({});
  } else if (!config.subset_names.empty()) {
    subsets.push_back(resolve_subset(net, config.subset_names, config.z));
  } else {
    subsets = internal_subsets(net, config.z, guard_limit(1'000'000));
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::size_t trial, std::size_t subset, std::size_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(subset), static_cast<std::uint32_t>(stream)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

TrialRecord run_generation(const Scenario& sc, const SimConfig& config, std::size_t trial,
                           std::size_t subset_index) {
  TrialRecord rec;
  rec.trial = trial;
  rec.subset_index = subset_index;
  rec.subset = sc.subsets.at(subset_index);

  std::mt19937_64 rng(derive_seed(config.seed, trial, subset_index, 0));
  gf::Vector message = random_message(sc.codec, rng);
  Generation gen = encode(sc.codec, message, rng);
  gen.seed = config.seed;

  const AdversaryModel model = config.adversary.model;
  std::unique_ptr<Strategy> strategy;
  if (jams(model)) {
    PublicKnowledge pub{&sc.codec, &sc.schedule, &sc.net};
    strategy = make_strategy(config.adversary, pub,
                             derive_seed(config.adversary.seed, trial, subset_index, 1));
  }
  Interposition ip = interpose(sc.net, sc.schedule, sc.codec, gen, model, rec.subset, strategy.get());

  DecodeResult res = decode(sc.codec, ip.received);
  rec.decoded = res.ok;
  rec.correct = res.ok && res.message == message;
  rec.accepted_packets = res.accepted_packets.size();
  rec.diagnostic = res.diagnostic;
  if (res.ok && !rec.correct) rec.diagnostic = "decoder returned a wrong message";
  std::set<std::size_t> hit;
  for (const auto& c : ip.corruptions) hit.insert(c.packet);
  rec.corrupted_packets = hit.size();
  if (eavesdrops(model)) rec.leakage = leakage_symbols(sc.codec, ip.observed, gen.rho);

  if (!config.traffic_log.empty()) {
    for (std::size_t slot = 0; slot < ip.traffic.size(); ++slot)
      for (EdgeId e = 0; e < sc.net.num_edges(); ++e)
        if (const auto& pkt = ip.traffic[slot][e])
          rec.traffic.push_back(traffic_line(sc.net, trial, rec.subset, slot, e,
                                             *sc.schedule.slots[slot][e], *pkt).dump());
  }
  return rec;
}

SimReport run_campaign(const Scenario& sc, const SimConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t cells = config.trials * sc.subsets.size();
  std::vector<TrialRecord> records(cells);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < cells;) {
      try {
        records[k] = run_generation(sc, config, k / sc.subsets.size(), k % sc.subsets.size());
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells;
      }
    }
  };
  const std::size_t threads = std::min(config.jobs, cells);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  SimReport rep;
  rep.config = config;
  rep.params = sc.codec.params();
  rep.plan = sc.plan;
  rep.generations = cells;
  for (const auto& r : records) {
    if (!r.decoded) ++rep.decode_failures;
    else if (!r.correct) ++rep.undetected_errors;
    rep.max_leakage = std::max(rep.max_leakage, r.leakage);
  }
  rep.decode_error_rate = Rational(static_cast<long long>(rep.decode_failures + rep.undetected_errors),
                                   static_cast<long long>(cells));
  const CodecParams& p = rep.params;
  rep.codec_rate = Rational(p.message_symbols, p.n * p.tau);

  if (!config.traffic_log.empty()) {
    std::ofstream log(config.traffic_log);
    if (!log) throw ConfigError("cannot write traffic log " + config.traffic_log);
    for (const auto& r : records)
      for (const auto& line : r.traffic) log << line << '\n';
  }
  for (auto& r : records) r.traffic.clear();
  rep.records = std::move(records);
  if (config.report_timing)
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace advflow
