#include "advflow/adversary.hpp"
#include "advflow/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace advflow;
using advflow::testing::graph;
using advflow::testing::nodes;

namespace {

struct Fixture {
  explicit Fixture(const std::string& name, CodecKind kind = CodecKind::Jam, std::int64_t n = 0)
      : net(graph(name)),
        plan(make_plan(solve_exact(build_lp1_prime(net, 1, enumerate_paths(net))), net)),
        schedule(make_schedule(plan, net)),
        codec(kind == CodecKind::Eaves      ? eaves_params(plan, n ? n : 1)
              : kind == CodecKind::Jam      ? jam_params(plan, n ? n : 4 * (plan.packets + 1))
                                            : eavesjam_params(plan, n ? n : 4 * (plan.packets + 1))) {}
  PublicKnowledge pub() const { return {&codec, &schedule, &net}; }
  Network net;
  RoutingPlan plan;
  RoutingSchedule schedule;
  Codec codec;
};

// Error is a deterministic digest of everything the view exposes so far.
class Probe final : public Strategy {
 public:
  explicit Probe(const gf::PrimeField& f, Eigen::Index n) : f_(f), n_(n) {}
  gf::RowVector corrupt(const CausalView& view, const CorruptionRequest& req) override {
    gf::Elem digest = 1;
    for (std::size_t s = 0; s <= req.slot; ++s)
      for (const auto& [e, pkt] : view.slot_packets(s))
        for (Eigen::Index k = 0; k < pkt.size(); ++k) digest = f_.add(f_.mul(digest, 31), f_.add(pkt(k), e));
    gf::RowVector err = gf::RowVector::Zero(n_);
    err(0) = digest == 0 ? 1 : digest;
    return err;
  }

 private:
  gf::PrimeField f_;
  Eigen::Index n_;
};

class FutureReader final : public Strategy {
 public:
  gf::RowVector corrupt(const CausalView& view, const CorruptionRequest& req) override {
    (void)view.at(req.slot + 1, req.in_edge);
    return {};
  }
};

class OffViewReader final : public Strategy {
 public:
  explicit OffViewReader(EdgeId e) : e_(e) {}
  gf::RowVector corrupt(const CausalView& view, const CorruptionRequest& req) override {
    (void)view.at(req.slot, e_);
    return {};
  }

 private:
  EdgeId e_;
};

bool same(const std::vector<CorruptionRecord>& a, const std::vector<CorruptionRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].slot != b[i].slot || a[i].edge != b[i].edge || a[i].packet != b[i].packet || a[i].error != b[i].error)
      return false;
  return true;
}

}  // namespace

TEST(Adversary, NamesRoundTrip) {
  for (auto m : {AdversaryModel::None, AdversaryModel::LocalizedEavesdrop, AdversaryModel::LocalizedJam,
                 AdversaryModel::LocalizedEavesJam, AdversaryModel::OmniscientJam})
    EXPECT_EQ(parse_model(model_name(m)), m);
  for (auto s : {StrategyKind::PassThrough, StrategyKind::UniformRandom, StrategyKind::AdditiveRandomError,
                 StrategyKind::TargetedHashForgery})
    EXPECT_EQ(parse_strategy(strategy_name(s)), s);
  EXPECT_THROW(parse_model("global"), ConfigError);
}

TEST(Adversary, EavesdropperIsPassive) {
  Fixture fx("cockroach", CodecKind::Eaves, 2);
  std::mt19937_64 rng(1);
  Generation g = encode(fx.codec, random_message(fx.codec, rng), rng);
  AdversarySpec spec{AdversaryModel::LocalizedEavesdrop, 1, std::nullopt, StrategyKind::UniformRandom, 5, 1.0};
  auto strat = make_strategy(spec, fx.pub(), 5);
  for (NodeId v : fx.net.internal_nodes()) {
    Interposition ip = interpose(fx.net, fx.schedule, fx.codec, g, spec.model, {v}, strat.get());
    EXPECT_EQ(ip.received, g.packets);
    EXPECT_TRUE(ip.corruptions.empty());
    EXPECT_EQ(ip.observed, fx.schedule.packets_through({v}));
  }
}

TEST(Adversary, PassThroughForwardsUnchanged) {
  Fixture fx("cockroach");
  std::mt19937_64 rng(2);
  Generation g = encode(fx.codec, random_message(fx.codec, rng), rng);
  AdversarySpec spec{AdversaryModel::LocalizedJam, 1, std::nullopt, StrategyKind::PassThrough, 0, 1.0};
  auto strat = make_strategy(spec, fx.pub(), 0);
  Interposition ip = interpose(fx.net, fx.schedule, fx.codec, g, spec.model, nodes(fx.net, {"2"}), strat.get());
  EXPECT_EQ(ip.received, g.packets);
  EXPECT_TRUE(ip.corruptions.empty());
}

TEST(Adversary, CorruptionsOnlyLeaveControlledNodes) {
  Fixture fx("cockroach");
  std::mt19937_64 rng(3);
  Generation g = encode(fx.codec, random_message(fx.codec, rng), rng);
  AdversarySpec spec{AdversaryModel::LocalizedJam, 1, std::nullopt, StrategyKind::UniformRandom, 0, 1.0};
  for (NodeId v : fx.net.internal_nodes()) {
    auto strat = make_strategy(spec, fx.pub(), 7);
    Interposition ip = interpose(fx.net, fx.schedule, fx.codec, g, spec.model, {v}, strat.get());
    EXPECT_FALSE(ip.corruptions.empty());
    for (const auto& c : ip.corruptions) {
      EXPECT_EQ(c.node, v);
      EXPECT_EQ(fx.net.edge(c.edge).tail, v);
    }
    auto through = fx.schedule.packets_through({v});
    for (std::size_t j = 0; j < fx.schedule.packets(); ++j) {
      const bool touched = std::find(through.begin(), through.end(), j) != through.end();
      if (!touched) EXPECT_EQ(ip.received.row(static_cast<Eigen::Index>(j)), g.packets.row(static_cast<Eigen::Index>(j)));
    }
  }
}

TEST(Adversary, LocalizedViewIgnoresOffViewTraffic) {
  Fixture fx("cockroach");
  std::mt19937_64 rng(4);
  Generation g = encode(fx.codec, random_message(fx.codec, rng), rng);
  for (NodeId v : fx.net.internal_nodes()) {
    auto through = fx.schedule.packets_through({v});
    Generation scrambled = g;
    for (std::size_t j = 0; j < fx.schedule.packets(); ++j)
      if (std::find(through.begin(), through.end(), j) == through.end())
        for (Eigen::Index k = 0; k < scrambled.packets.cols(); ++k)
          scrambled.packets(static_cast<Eigen::Index>(j), k) = random_elem(fx.codec.field(), rng);
    Probe a(fx.codec.field(), fx.codec.params().n), b(fx.codec.field(), fx.codec.params().n);
    auto x = interpose(fx.net, fx.schedule, fx.codec, g, AdversaryModel::LocalizedJam, {v}, &a);
    auto y = interpose(fx.net, fx.schedule, fx.codec, scrambled, AdversaryModel::LocalizedJam, {v}, &b);
    EXPECT_FALSE(x.corruptions.empty());
    EXPECT_TRUE(same(x.corruptions, y.corruptions)) << fx.net.name(v);

    // An omniscient probe does notice the change.
    Probe c(fx.codec.field(), fx.codec.params().n), d(fx.codec.field(), fx.codec.params().n);
    auto u = interpose(fx.net, fx.schedule, fx.codec, g, AdversaryModel::OmniscientJam, {v}, &c);
    auto w = interpose(fx.net, fx.schedule, fx.codec, scrambled, AdversaryModel::OmniscientJam, {v}, &d);
    EXPECT_FALSE(same(u.corruptions, w.corruptions)) << fx.net.name(v);
  }
}

TEST(Adversary, FutureTrafficCannotInfluenceThePast) {
  Fixture fx("cockroach");
  ASSERT_EQ(fx.schedule.tau, 3);
  std::mt19937_64 rng(5);
  Generation g = encode(fx.codec, random_message(fx.codec, rng), rng);
  for (std::size_t cutoff = 0; cutoff + 1 < 3; ++cutoff) {
    Generation later = g;
    for (std::size_t j = 0; j < fx.schedule.packets(); ++j)
      if (fx.schedule.packet_slot[j] > cutoff)
        for (Eigen::Index k = 0; k < later.packets.cols(); ++k)
          later.packets(static_cast<Eigen::Index>(j), k) = random_elem(fx.codec.field(), rng);
    for (auto model : {AdversaryModel::LocalizedJam, AdversaryModel::OmniscientJam}) {
      Probe a(fx.codec.field(), fx.codec.params().n), b(fx.codec.field(), fx.codec.params().n);
      auto x = interpose(fx.net, fx.schedule, fx.codec, g, model, nodes(fx.net, {"4"}), &a);
      auto y = interpose(fx.net, fx.schedule, fx.codec, later, model, nodes(fx.net, {"4"}), &b);
      std::vector<CorruptionRecord> xs, ys;
      for (const auto& c : x.corruptions) if (c.slot <= cutoff) xs.push_back(c);
      for (const auto& c : y.corruptions) if (c.slot <= cutoff) ys.push_back(c);
      EXPECT_FALSE(xs.empty());
      EXPECT_TRUE(same(xs, ys));
    }
  }
}

TEST(Adversary, ViewRejectsFutureAndOffViewReads) {
  Fixture fx("cockroach");
  std::mt19937_64 rng(6);
  Generation g = encode(fx.codec, random_message(fx.codec, rng), rng);
  FutureReader future;
  EXPECT_THROW(interpose(fx.net, fx.schedule, fx.codec, g, AdversaryModel::LocalizedJam, nodes(fx.net, {"1"}), &future),
               CausalityViolation);
  EXPECT_THROW(interpose(fx.net, fx.schedule, fx.codec, g, AdversaryModel::OmniscientJam, nodes(fx.net, {"1"}), &future),
               CausalityViolation);
  const NodeSet z = nodes(fx.net, {"1"});
  EdgeId foreign = 0;
  while (fx.net.edge(foreign).head == z[0]) ++foreign;
  OffViewReader peek(foreign);
  EXPECT_THROW(interpose(fx.net, fx.schedule, fx.codec, g, AdversaryModel::LocalizedJam, z, &peek), CausalityViolation);
  OffViewReader global_peek(foreign);
  EXPECT_NO_THROW(interpose(fx.net, fx.schedule, fx.codec, g, AdversaryModel::OmniscientJam, z, &global_peek));
}

TEST(Adversary, LocalizedViewBlanksTheSeed) {
  Fixture fx("three_parallel", CodecKind::Jam, 8);
  CausalView local(fx.net, nodes(fx.net, {"v1"}), false, 1, fx.codec.params().n - 1);
  CausalView global(fx.net, nodes(fx.net, {"v1"}), true, 1, std::nullopt);
  gf::RowVector pkt = gf::RowVector::Constant(8, 5);
  const EdgeId into = fx.net.in_edges(*fx.net.find("v1"))[0];
  local.record(into, pkt);
  global.record(into, pkt);
  EXPECT_EQ((*local.at(0, into))(7), 0);
  EXPECT_EQ((*global.at(0, into))(7), 5);
  EXPECT_TRUE(local.covers(into));
  EXPECT_FALSE(local.covers(fx.net.in_edges(*fx.net.find("v2"))[0]));
}

TEST(Adversary, TargetedForgeryRarelyPassesLocally) {
  Fixture fx("three_parallel", CodecKind::Jam, 8);
  const auto L = fx.codec.params().payload_length();
  gf::PrimeField f = fx.codec.field();
  std::mt19937_64 rng(7);
  gf::Vector msg = random_message(fx.codec, rng);
  AdversarySpec spec{AdversaryModel::LocalizedJam, 1, std::nullopt, StrategyKind::TargetedHashForgery, 0, 1.0};
  int local_fail = 0, omni_fail = 0;
  for (gf::Elem rho = 0; rho < f.q(); ++rho) {
    Generation g = jam_encode(fx.codec, msg, rho);
    auto a = make_strategy(spec, fx.pub(), 99);
    auto x = interpose(fx.net, fx.schedule, fx.codec, g, AdversaryModel::LocalizedJam, nodes(fx.net, {"v1"}), a.get());
    DecodeResult r = decode(fx.codec, x.received);
    local_fail += !(r.ok && r.message == msg);
    auto b = make_strategy(spec, fx.pub(), 99);
    auto y = interpose(fx.net, fx.schedule, fx.codec, g, AdversaryModel::OmniscientJam, nodes(fx.net, {"v1"}), b.get());
    DecodeResult s = decode(fx.codec, y.received);
    omni_fail += !(s.ok && s.message == msg);
  }
  // Same roots for every rho: the forgery passes only when rho is one of them.
  EXPECT_LE(local_fail, L - 1);
  EXPECT_EQ(omni_fail, f.q());
}

TEST(Adversary, WorstCaseSubsetPrefersFirstTie) {
  Network net = graph("four_parallel");
  WorstCase wc = worst_case_subset(net, 2, [](const NodeSet&) { return 1.0; });
  EXPECT_EQ(wc.per_subset.size(), 6u);
  EXPECT_EQ(wc.subset, internal_subsets(net, 2).front());
  WorstCase picky = worst_case_subset(net, 1, [&](const NodeSet& s) { return net.name(s[0]) == "v3" ? 2.0 : 0.0; });
  EXPECT_EQ(picky.subset, nodes(net, {"v3"}));
  EXPECT_EQ(picky.value, 2.0);
}

TEST(Adversary, ObserveRespectsSlotCutoff) {
  Fixture fx("cockroach", CodecKind::Eaves);
  NodeSet z = nodes(fx.net, {"2"});
  EXPECT_TRUE(observe(fx.schedule, z, 0).empty());
  EXPECT_EQ(observe(fx.schedule, z, 3), fx.schedule.packets_through(z));
  EXPECT_LE(observe(fx.schedule, z, 1).size(), observe(fx.schedule, z, 2).size());
}
