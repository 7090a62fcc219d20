#include "advflow/adversary.hpp"

#include "advflow/error.hpp"

#include <algorithm>

namespace advflow {

std::string model_name(AdversaryModel m) {
  switch (m) {
    case AdversaryModel::None: return "none";
    case AdversaryModel::LocalizedEavesdrop: return "localized-eavesdrop";
    case AdversaryModel::LocalizedJam: return "localized-jam";
    case AdversaryModel::LocalizedEavesJam: return "localized-eavesjam";
    case AdversaryModel::OmniscientJam: return "omniscient-causal-jam";
  }
  return "?";
}

AdversaryModel parse_model(const std::string& name) {
  for (auto m : {AdversaryModel::None, AdversaryModel::LocalizedEavesdrop, AdversaryModel::LocalizedJam,
                 AdversaryModel::LocalizedEavesJam, AdversaryModel::OmniscientJam})
    if (model_name(m) == name) return m;
  throw ConfigError("unknown adversary model: " + name);
}

std::string strategy_name(StrategyKind s) {
  switch (s) {
    case StrategyKind::PassThrough: return "pass-through";
    case StrategyKind::UniformRandom: return "uniform-random";
    case StrategyKind::AdditiveRandomError: return "additive-random-error";
    case StrategyKind::TargetedHashForgery: return "targeted-hash-forgery";
  }
  return "?";
}

StrategyKind parse_strategy(const std::string& name) {
  for (auto s : {StrategyKind::PassThrough, StrategyKind::UniformRandom,
                 StrategyKind::AdditiveRandomError, StrategyKind::TargetedHashForgery})
    if (strategy_name(s) == name) return s;
  throw ConfigError("unknown strategy: " + name);
}

bool eavesdrops(AdversaryModel m) {
  return m == AdversaryModel::LocalizedEavesdrop || m == AdversaryModel::LocalizedEavesJam;
}

bool jams(AdversaryModel m) {
  return m == AdversaryModel::LocalizedJam || m == AdversaryModel::LocalizedEavesJam ||
         m == AdversaryModel::OmniscientJam;
}

bool omniscient(AdversaryModel m) { return m == AdversaryModel::OmniscientJam; }

// ---------------------------------------------------------------- CausalView

CausalView::CausalView(const Network& net, const NodeSet& subset, bool global, std::size_t slots,
                       std::optional<Eigen::Index> redacted_symbol)
    : net_(&net), global_(global), covered_(net.num_edges(), global), redacted_(redacted_symbol),
      seen_(slots, std::vector<std::optional<gf::RowVector>>(net.num_edges())) {
  if (!global)
    for (EdgeId e = 0; e < net.num_edges(); ++e)
      covered_[e] = std::binary_search(subset.begin(), subset.end(), net.edge(e).head);
}

bool CausalView::covers(EdgeId e) const { return covered_.at(e); }

const std::optional<gf::RowVector>& CausalView::at(std::size_t slot, EdgeId e) const {
  if (slot > current_)
    throw CausalityViolation("read of slot " + std::to_string(slot) + " during slot " +
                             std::to_string(current_));
  if (!covered_.at(e)) throw CausalityViolation("read of an edge outside the view");
  return seen_.at(slot).at(e);
}

std::vector<std::pair<EdgeId, gf::RowVector>> CausalView::slot_packets(std::size_t slot) const {
  std::vector<std::pair<EdgeId, gf::RowVector>> out;
  for (EdgeId e = 0; e < net_->num_edges(); ++e)
    if (covered_[e] && at(slot, e)) out.emplace_back(e, *at(slot, e));
  return out;
}

void CausalView::begin_slot(std::size_t slot) {
  if (slot < current_) throw CausalityViolation("slots must advance monotonically");
  current_ = slot;
}

void CausalView::record(EdgeId e, const gf::RowVector& packet) {
  if (!covered_.at(e)) return;
  gf::RowVector copy = packet;
  if (redacted_ && *redacted_ < copy.size()) copy(*redacted_) = 0;
  seen_.at(current_).at(e) = std::move(copy);
}

// ---------------------------------------------------------------- strategies

namespace {

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

class PassThrough final : public Strategy {
 public:
  explicit PassThrough(Eigen::Index n) : n_(n) {}
  gf::RowVector corrupt(const CausalView&, const CorruptionRequest&) override {
    return gf::RowVector::Zero(n_);
  }

 private:
  Eigen::Index n_;
};

class UniformRandom final : public Strategy {
 public:
  UniformRandom(const PublicKnowledge& pub, std::uint64_t seed) : pub_(pub), rng_(seed) {}
  gf::RowVector corrupt(const CausalView&, const CorruptionRequest&) override {
    return random_vector(pub_.codec->field(), pub_.codec->params().n, rng_).transpose();
  }

 private:
  PublicKnowledge pub_;
  std::mt19937_64 rng_;
};

class AdditiveRandomError final : public Strategy {
 public:
  AdditiveRandomError(const PublicKnowledge& pub, double density, std::uint64_t seed)
      : pub_(pub), density_(density), rng_(seed) {}
  gf::RowVector corrupt(const CausalView&, const CorruptionRequest&) override {
    const CodecParams& p = pub_.codec->params();
    const gf::PrimeField& f = pub_.codec->field();
    const Eigen::Index span = p.kind == CodecKind::Eaves ? p.n : p.payload_length();
    gf::RowVector e = gf::RowVector::Zero(p.n);
    for (Eigen::Index k = 0; k < span; ++k)
      if (unit_draw(rng_) < density_) {
        gf::Elem v;
        do v = random_elem(f, rng_);
        while (v == 0);
        e(k) = v;
      }
    return e;
  }

 private:
  PublicKnowledge pub_;
  double density_;
  std::mt19937_64 rng_;
};

// Adds the coefficient vector of a monic polynomial with L-1 chosen roots to
// the payload. The forged payload passes the hash check exactly when the
// seed is one of those roots. An adversary that can read the seed puts it
// among the roots.
class TargetedHashForgery final : public Strategy {
 public:
  TargetedHashForgery(const PublicKnowledge& pub, std::uint64_t seed) : pub_(pub), rng_(seed) {}

  gf::RowVector corrupt(const CausalView& view, const CorruptionRequest& req) override {
    const CodecParams& p = pub_.codec->params();
    const gf::PrimeField& f = pub_.codec->field();
    gf::RowVector e = gf::RowVector::Zero(p.n);
    if (p.kind == CodecKind::Eaves) {
      e(0) = 1;
      return e;
    }
    if (!forgery_) {
      std::optional<gf::Elem> seen_seed;
      const auto& arriving = view.at(req.slot, req.in_edge);
      if (arriving && view.global()) seen_seed = (*arriving)(p.n - 1);
      forgery_ = build(f, p.payload_length(), seen_seed);
    }
    e.head(p.payload_length()) = *forgery_;
    return e;
  }

 private:
  gf::RowVector build(const gf::PrimeField& f, Eigen::Index length, std::optional<gf::Elem> seed) {
    std::vector<gf::Elem> roots;
    if (seed && length > 1) roots.push_back(*seed);
    while (static_cast<Eigen::Index>(roots.size()) < length - 1) {
      gf::Elem r = random_elem(f, rng_);
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }
    // Coefficients of prod (x - r), lowest degree first.
    gf::RowVector poly = gf::RowVector::Zero(length);
    poly(0) = 1;
    Eigen::Index degree = 0;
    for (gf::Elem r : roots) {
      for (Eigen::Index k = degree + 1; k > 0; --k) poly(k) = f.sub(poly(k - 1), f.mul(r, poly(k)));
      poly(0) = f.neg(f.mul(r, poly(0)));
      ++degree;
    }
    return poly;
  }

  PublicKnowledge pub_;
  std::mt19937_64 rng_;
  std::optional<gf::RowVector> forgery_;
};

}  // namespace

std::unique_ptr<Strategy> make_strategy(const AdversarySpec& spec, const PublicKnowledge& pub,
                                        std::uint64_t seed) {
  if (!pub.codec) throw std::invalid_argument("strategy needs the codec");
  switch (spec.strategy) {
    case StrategyKind::PassThrough: return std::make_unique<PassThrough>(pub.codec->params().n);
    case StrategyKind::UniformRandom: return std::make_unique<UniformRandom>(pub, seed);
    case StrategyKind::AdditiveRandomError:
      return std::make_unique<AdditiveRandomError>(pub, spec.error_density, seed);
    case StrategyKind::TargetedHashForgery: return std::make_unique<TargetedHashForgery>(pub, seed);
  }
  throw ConfigError("unknown strategy");
}

// ---------------------------------------------------------------- interposition

std::vector<std::size_t> observe(const RoutingSchedule& schedule, const NodeSet& subset,
                                 std::size_t slots) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < schedule.packets(); ++j)
    if (schedule.packet_slot[j] < slots && schedule.packet_paths[j].intersects(subset)) out.push_back(j);
  return out;
}

Interposition interpose(const Network& net, const RoutingSchedule& schedule, const Codec& codec,
                        const Generation& gen, AdversaryModel model, const NodeSet& subset,
                        Strategy* strategy) {
  const CodecParams& p = codec.params();
  const gf::PrimeField& f = codec.field();
  const auto slots = static_cast<std::size_t>(schedule.tau);
  if (static_cast<std::size_t>(gen.packets.rows()) != schedule.packets())
    throw std::invalid_argument("generation and schedule disagree on the packet count");

  std::optional<Eigen::Index> seed_symbol;
  if (p.kind != CodecKind::Eaves && !omniscient(model)) seed_symbol = p.n - 1;
  CausalView view(net, subset, omniscient(model), slots, seed_symbol);
  const bool active = jams(model) && strategy != nullptr;
  auto controlled = [&](NodeId v) {
    return active && std::binary_search(subset.begin(), subset.end(), v);
  };

  // Edge that carries packet j into the tail of `out` (previous hop on its path).
  auto previous_edge = [&](std::size_t j, EdgeId out) {
    const auto& edges = schedule.packet_paths[j].edges;
    auto it = std::find(edges.begin(), edges.end(), out);
    return *(it - 1);
  };

  Interposition out;
  out.traffic.assign(slots, std::vector<std::optional<gf::RowVector>>(net.num_edges()));
  for (std::size_t slot = 0; slot < slots; ++slot) {
    view.begin_slot(slot);
    auto& row = out.traffic[slot];
    for (EdgeId e : net.out_edges(net.source())) {
      if (auto j = schedule.slots[slot][e]) {
        row[e] = gen.packets.row(static_cast<Eigen::Index>(*j));
        view.record(e, *row[e]);
      }
    }
    for (NodeId v : net.topological_order()) {
      if (!net.is_internal(v)) continue;
      for (EdgeId e : net.out_edges(v)) {
        auto j = schedule.slots[slot][e];
        if (!j) continue;
        EdgeId in = previous_edge(*j, e);
        gf::RowVector packet = *row[in];
        if (controlled(v)) {
          CorruptionRequest req{slot, v, e, *j, in};
          gf::RowVector err = f.reduce(strategy->corrupt(view, req));
          if (!err.isZero()) {
            packet = f.reduce(packet + err);
            out.corruptions.push_back({slot, v, e, *j, err});
          }
        }
        row[e] = std::move(packet);
        view.record(e, *row[e]);
      }
    }
  }

  out.received.resize(static_cast<Eigen::Index>(schedule.packets()), p.n);
  for (std::size_t j = 0; j < schedule.packets(); ++j)
    out.received.row(static_cast<Eigen::Index>(j)) =
        *out.traffic[schedule.packet_slot[j]][schedule.packet_paths[j].edges.back()];
  if (eavesdrops(model)) out.observed = observe(schedule, subset, slots);
  return out;
}

WorstCase worst_case_subset(const Network& net, std::size_t z,
                            const std::function<double(const NodeSet&)>& metric) {
  WorstCase wc;
  bool first = true;
  for (const NodeSet& s : internal_subsets(net, z, guard_limit(1'000'000))) {
    double v = metric(s);
    wc.per_subset.push_back({s, v});
    if (first || v > wc.value) {
      wc.subset = s;
      wc.value = v;
      first = false;
    }
  }
  return wc;
}

}  // namespace advflow
