#include "advflow/codec.hpp"

#include "advflow/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace advflow {

namespace {

// Portable uniform draw (std::uniform_int_distribution differs across
// standard libraries, which would break byte-identical reports).
gf::Elem uniform_elem(std::mt19937_64& rng, gf::Elem q) {
  const auto bound = static_cast<std::uint64_t>(q);
  const std::uint64_t limit = std::mt19937_64::max() - (std::mt19937_64::max() % bound);
  std::uint64_t v;
  do v = rng();
  while (v >= limit);
  return static_cast<gf::Elem>(v % bound);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

CodecParams base_params(CodecKind kind, const RoutingPlan& plan, std::int64_t n) {
  if (n < 1) throw CodecError("packet length n must be >= 1");
  CodecParams p;
  p.kind = kind;
  p.n = n;
  p.packets = plan.packets;
  p.tau = plan.tau;
  p.lambda_scaled = plan.lambda_scaled;
  p.leakage_budget = 0;
  return p;
}

void check_hash_packet_length(const CodecParams& p) {
  if (p.n <= p.packets + 1)
    throw CodecError("hash-packet codecs need n > N + 1 (n=" + std::to_string(p.n) +
                     ", N=" + std::to_string(p.packets) + ")");
}

gf::Elem pick_field(gf::Elem requested, std::int64_t points) {
  if (requested == 0) return gf::next_prime(points);
  if (requested <= points)
    throw CodecError("field size " + std::to_string(requested) + " too small: need q > " +
                     std::to_string(points) + " distinct nonzero evaluation points");
  return requested;
}

}  // namespace

std::string codec_kind_name(CodecKind kind) {
  switch (kind) {
    case CodecKind::Eaves: return "eaves";
    case CodecKind::Jam: return "jam";
    case CodecKind::EavesJam: return "eavesjam";
  }
  return "?";
}

CodecKind parse_codec_kind(const std::string& name) {
  if (name == "eaves") return CodecKind::Eaves;
  if (name == "jam") return CodecKind::Jam;
  if (name == "eavesjam") return CodecKind::EavesJam;
  throw ConfigError("unknown codec kind: " + name);
}

double CodecParams::bits_per_symbol() const { return gf::PrimeField(q).bits(); }

std::int64_t jam_rate_packets(std::int64_t packets, std::int64_t lambda_scaled, std::int64_t n) {
  return floor_div((n - packets - 1) * (packets - lambda_scaled), n);
}

std::int64_t eavesjam_rate_packets(std::int64_t packets, std::int64_t lambda_scaled, std::int64_t n) {
  return floor_div((n - packets - 1) * (packets - 2 * lambda_scaled), n);
}

std::int64_t eavesjam_key_packets(std::int64_t packets, std::int64_t lambda_scaled, std::int64_t n) {
  return floor_div((n - packets - 1) * lambda_scaled, n);
}

CodecParams eaves_params(const RoutingPlan& plan, std::int64_t n, gf::Elem q) {
  CodecParams p = base_params(CodecKind::Eaves, plan, n);
  if (p.packets < 1) throw CodecError("plan carries no packets");
  p.q = pick_field(q, p.packets);
  p.rate_packets = p.packets - p.lambda_scaled;
  p.key_packets = p.lambda_scaled;
  p.message_symbols = p.rate_packets * n;
  p.key_symbols = p.key_packets * n;
  p.delta = 0;
  return p;
}

CodecParams jam_params(const RoutingPlan& plan, std::int64_t n, gf::Elem q) {
  CodecParams p = base_params(CodecKind::Jam, plan, n);
  check_hash_packet_length(p);
  if (2 * p.lambda_scaled >= p.packets)
    throw PreconditionViolated("hash-packet codecs need lambda < C/2 (tau*lambda=" +
                               std::to_string(p.lambda_scaled) + ", N=" + std::to_string(p.packets) + ")");
  p.q = pick_field(q, p.payload_length() * p.packets);
  p.rate_packets = jam_rate_packets(p.packets, p.lambda_scaled, n);
  p.key_packets = 0;
  p.message_symbols = n * p.rate_packets;
  p.key_symbols = 0;
  p.delta = Rational(p.packets + 1, n);
  return p;
}

CodecParams eavesjam_params(const RoutingPlan& plan, std::int64_t n, gf::Elem q) {
  CodecParams p = base_params(CodecKind::EavesJam, plan, n);
  check_hash_packet_length(p);
  if (2 * p.lambda_scaled >= p.packets)
    throw PreconditionViolated("eavesdropping+jamming codec needs lambda < C/2 (tau*lambda=" +
                               std::to_string(p.lambda_scaled) + ", N=" + std::to_string(p.packets) + ")");
  const std::int64_t L = p.payload_length();
  p.q = pick_field(q, L * p.packets);
  p.rate_packets = eavesjam_rate_packets(p.packets, p.lambda_scaled, n);
  p.key_packets = eavesjam_key_packets(p.packets, p.lambda_scaled, n);
  if (p.lambda_scaled > 0) p.key_symbols = p.lambda_scaled * L + p.packets;
  // Honest payloads minus their pad rows must determine message and spread key.
  const std::int64_t honest_rows = (L - 1) * (p.packets - p.lambda_scaled);
  while (p.rate_packets > 0 && n * p.rate_packets + p.lambda_scaled * L > honest_rows) --p.rate_packets;
  if (p.rate_packets <= 0) throw CodecError("eavesdropping+jamming rate is not positive at this n");
  p.message_symbols = n * p.rate_packets;
  p.delta = Rational(p.packets + 1, n);
  return p;
}

Codec::Codec(CodecParams params) : params_(std::move(params)), field_(params_.q) {
  const CodecParams& p = params_;
  if (p.kind == CodecKind::Eaves) {
    std::vector<gf::Elem> points(static_cast<std::size_t>(p.packets));
    std::iota(points.begin(), points.end(), 1);
    encoder_ = gf::vandermonde(field_, points, p.packets);
    inverse_ = gf::invert(field_, encoder_);
  } else {
    const std::int64_t L = p.payload_length();
    const std::int64_t rows = L * p.packets;
    const std::int64_t cols = p.message_symbols + p.key_symbols;
    if (cols < 1) throw CodecError("codec carries no source symbols");
    const std::int64_t pads = p.kind == CodecKind::EavesJam && p.key_symbols > 0 ? p.packets : 0;
    std::vector<gf::Elem> points(static_cast<std::size_t>(rows));
    std::iota(points.begin(), points.end(), 1);
    encoder_ = gf::Matrix::Zero(rows, cols);
    encoder_.leftCols(cols - pads) = gf::vandermonde(field_, points, cols - pads);
    for (std::int64_t j = 0; j < pads; ++j) encoder_(j * L, cols - pads + j) = 1;
  }
}

gf::Matrix Codec::packet_rows(std::size_t packet) const {
  const auto j = static_cast<Eigen::Index>(packet);
  if (params_.kind == CodecKind::Eaves) return encoder_.row(j);
  const Eigen::Index L = params_.payload_length();
  return encoder_.middleRows(j * L, L);
}

gf::Elem random_elem(const gf::PrimeField& f, std::mt19937_64& rng) { return uniform_elem(rng, f.q()); }

gf::Vector random_vector(const gf::PrimeField& f, Eigen::Index size, std::mt19937_64& rng) {
  gf::Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = uniform_elem(rng, f.q());
  return v;
}

gf::Vector random_message(const Codec& codec, std::mt19937_64& rng) {
  return random_vector(codec.field(), codec.params().message_symbols, rng);
}

Generation eaves_encode(const Codec& codec, const gf::Vector& message, const gf::Vector& key) {
  const CodecParams& p = codec.params();
  if (codec.params().kind != CodecKind::Eaves) throw CodecError("not an eavesdropping codec");
  if (message.size() != p.message_symbols || key.size() != p.key_symbols)
    throw CodecError("message/key size mismatch");
  const Eigen::Index N = p.packets, n = p.n;
  gf::Matrix x(N, n);
  x.topRows(p.rate_packets) = Eigen::Map<const gf::Matrix>(message.data(), p.rate_packets, n);
  x.bottomRows(p.key_packets) = Eigen::Map<const gf::Matrix>(key.data(), p.key_packets, n);
  Generation g;
  g.kind = CodecKind::Eaves;
  g.packets = codec.field().mul(codec.encoder(), x);
  g.message = message;
  g.key = key;
  return g;
}

Generation eaves_encode(const Codec& codec, const gf::Vector& message, std::mt19937_64& rng) {
  return eaves_encode(codec, message, random_vector(codec.field(), codec.params().key_symbols, rng));
}

DecodeResult eaves_decode(const Codec& codec, const gf::Matrix& received) {
  const CodecParams& p = codec.params();
  DecodeResult r;
  if (received.rows() != p.packets || received.cols() != p.n) {
    r.diagnostic = "wrong number of packets";
    return r;
  }
  gf::Matrix x = codec.field().mul(codec.decoder(), received);
  gf::Matrix m = x.topRows(p.rate_packets);
  r.message = Eigen::Map<const gf::Vector>(m.data(), m.size());
  r.accepted_packets.resize(static_cast<std::size_t>(p.packets));
  std::iota(r.accepted_packets.begin(), r.accepted_packets.end(), 0);
  r.ok = true;
  return r;
}

namespace {

Generation hash_encode(const Codec& codec, CodecKind kind, const gf::Vector& message,
                       const gf::Vector& key, gf::Elem rho) {
  const CodecParams& p = codec.params();
  const gf::PrimeField& f = codec.field();
  if (p.kind != kind) throw CodecError("codec kind mismatch");
  if (message.size() != p.message_symbols || key.size() != p.key_symbols)
    throw CodecError("message/key size mismatch");
  const Eigen::Index N = p.packets, L = p.payload_length();
  gf::Vector x(message.size() + key.size());
  x << message, key;
  gf::Vector t = f.mul(codec.encoder(), x);
  rho = f.reduce(rho);
  gf::RowVector u = gf::hash_row(f, rho, L);

  gf::Matrix packets(N, p.n);
  gf::RowVector d(N);
  for (Eigen::Index j = 0; j < N; ++j) d(j) = f.mul(u, t.segment(j * L, L))(0, 0);
  for (Eigen::Index j = 0; j < N; ++j) {
    packets.block(j, 0, 1, L) = t.segment(j * L, L).transpose();
    packets.block(j, L, 1, N) = d;
    packets(j, p.n - 1) = rho;
  }
  Generation g;
  g.kind = kind;
  g.packets = std::move(packets);
  g.message = message;
  g.key = key;
  g.rho = rho;
  return g;
}

DecodeResult hash_decode(const Codec& codec, CodecKind kind, const gf::Matrix& received) {
  const CodecParams& p = codec.params();
  const gf::PrimeField& f = codec.field();
  DecodeResult r;
  if (p.kind != kind) throw CodecError("codec kind mismatch");
  const Eigen::Index N = p.packets, L = p.payload_length();
  if (received.rows() != N || received.cols() != p.n) {
    r.diagnostic = "wrong number of packets";
    return r;
  }

  // Strict majority over the trailing [D | rho] fields.
  std::map<std::vector<gf::Elem>, Eigen::Index> votes;
  for (Eigen::Index j = 0; j < N; ++j) {
    std::vector<gf::Elem> tail(static_cast<std::size_t>(N + 1));
    for (Eigen::Index k = 0; k <= N; ++k) tail[static_cast<std::size_t>(k)] = f.reduce(received(j, L + k));
    ++votes[tail];
  }
  const std::vector<gf::Elem>* winner = nullptr;
  for (const auto& [tail, count] : votes)
    if (2 * count > N) winner = &tail;
  if (!winner) {
    r.diagnostic = "no strict majority on hash fields";
    return r;
  }
  const gf::Elem rho = winner->back();
  gf::RowVector u = gf::hash_row(f, rho, L);

  for (Eigen::Index j = 0; j < N; ++j) {
    gf::Matrix payload = f.reduce(received.block(j, 0, 1, L).transpose());
    if (f.mul(u, payload)(0, 0) == (*winner)[static_cast<std::size_t>(j)])
      r.accepted_packets.push_back(static_cast<std::size_t>(j));
  }

  // Pads of rejected packets never reach the accepted rows; leave them out.
  std::vector<Eigen::Index> used;
  for (Eigen::Index c = 0; c < codec.encoder().cols(); ++c) {
    bool hit = false;
    for (std::size_t j : r.accepted_packets)
      hit = hit || !codec.encoder().block(static_cast<Eigen::Index>(j) * L, c, L, 1).isZero();
    if (hit || c < p.message_symbols) used.push_back(c);
  }
  const auto cols = static_cast<Eigen::Index>(used.size());
  const auto rows = static_cast<Eigen::Index>(r.accepted_packets.size()) * L;
  gf::Matrix a(rows, cols), b(rows, 1);
  for (std::size_t i = 0; i < r.accepted_packets.size(); ++i) {
    const auto j = static_cast<Eigen::Index>(r.accepted_packets[i]);
    const auto at = static_cast<Eigen::Index>(i) * L;
    for (Eigen::Index c = 0; c < cols; ++c) a.block(at, c, L, 1) = codec.encoder().block(j * L, used[static_cast<std::size_t>(c)], L, 1);
    b.middleRows(at, L) = received.block(j, 0, 1, L).transpose();
  }
  auto sol = gf::solve_system(f, a, b);
  switch (sol.status) {
    case gf::SystemStatus::Inconsistent:
      r.diagnostic = "accepted payloads are inconsistent (a forged packet passed the hash check)";
      return r;
    case gf::SystemStatus::Underdetermined:
      r.diagnostic = "accepted payloads do not determine the source vector";
      return r;
    case gf::SystemStatus::Unique: break;
  }
  r.message = sol.x.col(0).head(p.message_symbols);
  r.ok = true;
  return r;
}

}  // namespace

Generation jam_encode(const Codec& codec, const gf::Vector& message, gf::Elem rho) {
  return hash_encode(codec, CodecKind::Jam, message, gf::Vector(0), rho);
}

DecodeResult jam_decode(const Codec& codec, const gf::Matrix& received) {
  return hash_decode(codec, CodecKind::Jam, received);
}

Generation eavesjam_encode(const Codec& codec, const gf::Vector& message, const gf::Vector& key,
                           gf::Elem rho) {
  return hash_encode(codec, CodecKind::EavesJam, message, key, rho);
}

Generation eavesjam_encode(const Codec& codec, const gf::Vector& message, std::mt19937_64& rng) {
  gf::Vector key = random_vector(codec.field(), codec.params().key_symbols, rng);
  gf::Elem rho = uniform_elem(rng, codec.field().q());
  return eavesjam_encode(codec, message, key, rho);
}

DecodeResult eavesjam_decode(const Codec& codec, const gf::Matrix& received) {
  return hash_decode(codec, CodecKind::EavesJam, received);
}

Generation encode(const Codec& codec, const gf::Vector& message, std::mt19937_64& rng) {
  switch (codec.params().kind) {
    case CodecKind::Eaves: return eaves_encode(codec, message, rng);
    case CodecKind::Jam: return jam_encode(codec, message, uniform_elem(rng, codec.field().q()));
    case CodecKind::EavesJam: return eavesjam_encode(codec, message, rng);
  }
  throw CodecError("unknown codec kind");
}

DecodeResult decode(const Codec& codec, const gf::Matrix& received) {
  switch (codec.params().kind) {
    case CodecKind::Eaves: return eaves_decode(codec, received);
    case CodecKind::Jam: return jam_decode(codec, received);
    case CodecKind::EavesJam: return eavesjam_decode(codec, received);
  }
  throw CodecError("unknown codec kind");
}

gf::Matrix observation_matrix(const Codec& codec, const std::vector<std::size_t>& observed,
                              gf::Elem rho) {
  const CodecParams& p = codec.params();
  const gf::PrimeField& f = codec.field();
  const Eigen::Index cols = codec.encoder().cols();
  std::vector<std::size_t> seen = observed;
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  if (seen.empty()) return gf::Matrix(0, cols);

  if (p.kind == CodecKind::Eaves) {
    gf::Matrix a(static_cast<Eigen::Index>(seen.size()), cols);
    for (std::size_t i = 0; i < seen.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = codec.packet_rows(seen[i]);
    return a;
  }
  const Eigen::Index L = p.payload_length(), N = p.packets;
  const auto observed_rows = static_cast<Eigen::Index>(seen.size()) * L;
  gf::Matrix a(observed_rows + N, cols);
  for (std::size_t i = 0; i < seen.size(); ++i)
    a.middleRows(static_cast<Eigen::Index>(i) * L, L) = codec.packet_rows(seen[i]);
  // Every observed packet also carries the full hash vector D = U [T_1 ... T_N].
  gf::RowVector u = gf::hash_row(f, rho, L);
  for (Eigen::Index j = 0; j < N; ++j)
    a.row(observed_rows + j) = f.mul(u, codec.encoder().middleRows(j * L, L));
  return a;
}

std::int64_t leakage_symbols(const Codec& codec, const std::vector<std::size_t>& observed,
                             gf::Elem rho) {
  const CodecParams& p = codec.params();
  gf::Matrix a = observation_matrix(codec, observed, rho);
  if (a.rows() == 0) return 0;
  const Eigen::Index key_cols = p.kind == CodecKind::Eaves ? p.key_packets : p.key_symbols;
  const Eigen::Index total = gf::rank(codec.field(), a);
  const Eigen::Index key_rank = key_cols > 0 ? gf::rank(codec.field(), a.rightCols(key_cols)) : 0;
  return p.instances() * (total - key_rank);
}

}  // namespace advflow
