#include "advflow/error.hpp"
#include "advflow/oracle.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace advflow;
using advflow::testing::corpus;
using advflow::testing::graph;
using advflow::testing::nodes;

namespace {

struct Built {
  Network net;
  RoutingPlan plan;
  RoutingSchedule schedule;
};

Built build(const std::string& name, std::size_t z = 1) {
  Network net = graph(name);
  RoutingPlan plan = make_plan(solve_exact(build_lp1_prime(net, z, enumerate_paths(net))), net);
  RoutingSchedule s = make_schedule(plan, net);
  return {std::move(net), std::move(plan), std::move(s)};
}

// Plug-in mutual information from an explicit joint table, in log_q units.
double table_mi(const gf::PrimeField& f, const gf::Matrix& a, Eigen::Index msg_cols) {
  const Eigen::Index cols = a.cols();
  const gf::Elem q = f.q();
  std::uint64_t states = 1;
  for (Eigen::Index i = 0; i < cols; ++i) states *= static_cast<std::uint64_t>(q);
  std::map<std::pair<std::uint64_t, std::vector<gf::Elem>>, double> joint;
  std::map<std::vector<gf::Elem>, double> obs;
  std::map<std::uint64_t, double> msg;
  std::uint64_t msg_states = 1;
  for (Eigen::Index i = 0; i < msg_cols; ++i) msg_states *= static_cast<std::uint64_t>(q);
  for (std::uint64_t code = 0; code < states; ++code) {
    gf::Matrix x(cols, 1);
    std::uint64_t c = code;
    for (Eigen::Index i = 0; i < cols; ++i, c /= static_cast<std::uint64_t>(q)) x(i, 0) = static_cast<gf::Elem>(c % q);
    gf::Matrix y = f.mul(a, x);
    std::vector<gf::Elem> key(y.data(), y.data() + y.size());
    const std::uint64_t m = code % msg_states;
    joint[{m, key}] += 1.0 / states;
    obs[key] += 1.0 / states;
    msg[m] += 1.0 / states;
  }
  double mi = 0;
  for (const auto& [mk, p] : joint) mi += p * std::log(p / (msg[mk.first] * obs[mk.second]));
  return mi / std::log(static_cast<double>(q));
}

}  // namespace

TEST(Oracle, MiMatchesTableOnRandomMaps) {
  std::mt19937_64 rng(8);
  for (gf::Elem q : {2, 3, 5}) {
    gf::PrimeField f(q);
    for (int round = 0; round < 25; ++round) {
      const Eigen::Index cols = 2 + static_cast<Eigen::Index>(rng() % 3);
      const Eigen::Index rows = 1 + static_cast<Eigen::Index>(rng() % 3);
      const Eigen::Index msg = 1 + static_cast<Eigen::Index>(rng() % (cols - 1));
      gf::Matrix a(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = random_elem(f, rng);
      MiResult r = mi_enumerate(f, a, msg);
      EXPECT_NEAR(r.value, table_mi(f, a, msg), 1e-9);
      ASSERT_TRUE(r.exact);
      // Linear maps leak rank(A) - rank(A on key columns) symbols.
      const Eigen::Index key_rank = gf::rank(f, a.rightCols(cols - msg));
      EXPECT_EQ(r.mi, gf::rank(f, a) - key_rank);
    }
  }
}

TEST(Oracle, DiamondHidesTheMessage) {
  Built b = build("diamond");
  Codec codec(eaves_params(b.plan, 1, 5));
  for (NodeId v : b.net.internal_nodes()) {
    MiResult r = mi_enumerate(codec, b.schedule.packets_through({v}));
    ASSERT_TRUE(r.exact);
    EXPECT_EQ(r.mi, 0);
    EXPECT_EQ(r.states, 25u);
  }
  EXPECT_EQ(mi_enumerate(codec, {}).mi, 0);
}

TEST(Oracle, ConstantKeyLeaksEverything) {
  Built b = build("diamond");
  Codec codec(eaves_params(b.plan, 1, 5));
  MiResult r = mi_enumerate(codec, b.schedule.packets_through({b.net.internal_nodes()[0]}), 0, true);
  ASSERT_TRUE(r.exact);
  EXPECT_EQ(r.mi, 1);
}

TEST(Oracle, SecrecyAcrossCorpus) {
  for (const auto& name : corpus()) {
    Built b = build(name);
    if (b.plan.packets < 1 || b.plan.message_packets() < 1 || b.plan.packets > 6) continue;
    Codec codec(eaves_params(b.plan, 1, gf::next_prime(b.plan.packets)));
    for (NodeId v : b.net.internal_nodes()) {
      MiResult r = mi_enumerate(codec, b.schedule.packets_through({v}));
      EXPECT_TRUE(r.exact);
      EXPECT_EQ(r.mi, 0) << name << " " << b.net.name(v);
    }
  }
}

TEST(Oracle, EnumerationGuard) {
  gf::PrimeField f(101);
  gf::Matrix a = gf::Matrix::Ones(1, 5);
  EXPECT_THROW(mi_enumerate(f, a, 2, false, 1000), GuardExceeded);
}

TEST(Oracle, ConverseOnSmallGraphs) {
  const std::map<std::string, Rational> expect{
      {"single_path", 0}, {"diamond", 1}, {"three_parallel", 2}, {"four_parallel", 3},
      {"bridge", 1},      {"unbalanced", 1}};
  for (const auto& [name, rate] : expect) {
    Network net = graph(name);
    ConverseResult r = exhaustive_routing_converse(net, 1);
    EXPECT_EQ(r.lp_rate, rate) << name;
    EXPECT_EQ(r.best_rate, rate) << name;
    EXPECT_TRUE(r.matches()) << name;
    EXPECT_GT(r.visited, 0u);
  }
}

TEST(Oracle, ConverseReplicationDoesNotHelp) {
  ConverseResult r = exhaustive_routing_converse(graph("diamond"), 1);
  ASSERT_TRUE(r.replication_checked);
  EXPECT_LE(r.replication_rate, r.plain_rate_short);
}

TEST(Oracle, ConverseRefusesLargeGraphs) {
  EXPECT_THROW(exhaustive_routing_converse(graph("layered"), 1), PreconditionViolated);
}

TEST(Oracle, NodeCutWitnesses) {
  Network sp = graph("single_path");
  NodeCutWitness w = nodecut_structure_check(sp, solve_exact(build_lp1_prime(sp, 1, enumerate_paths(sp))));
  ASSERT_TRUE(w.found);
  EXPECT_EQ(w.cut.nodes, nodes(sp, {"v"}));
  ASSERT_EQ(w.roles.size(), 1u);
  EXPECT_TRUE(w.roles[0].secrecy_constrained);

  Network tp = graph("three_parallel");
  NodeCutWitness x = nodecut_structure_check(tp, solve_exact(build_lp1_prime(tp, 1, enumerate_paths(tp))));
  ASSERT_TRUE(x.found);
  EXPECT_EQ(x.cut.nodes, nodes(tp, {"v1", "v2", "v3"}));
  EXPECT_EQ(x.lambda, 1);

  for (const auto& name : corpus()) {
    Network net = graph(name);
    NodeCutWitness c = nodecut_structure_check(net, solve_exact(build_lp1_prime(net, 1, enumerate_paths(net))));
    EXPECT_TRUE(c.found) << name;
    for (const auto& role : c.roles) EXPECT_TRUE(role.secrecy_constrained || role.capacity_constrained) << name;
  }
}

TEST(Oracle, LpCrosscheckPassesEverywhere) {
  for (const auto& name : corpus())
    for (std::size_t z : {1u, 2u}) {
      LpCrosscheck c = lp_crosscheck(graph(name), z);
      EXPECT_TRUE(c.ok()) << name << " z=" << z;
      EXPECT_EQ(c.lp2_required, z == 1);
    }
}
