#pragma once

#include "advflow/flowplan.hpp"
#include "advflow/gf.hpp"
#include "advflow/rational.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace advflow {

enum class CodecKind { Eaves, Jam, EavesJam };

std::string codec_kind_name(CodecKind kind);
CodecKind parse_codec_kind(const std::string& name);

struct CodecParams {
  CodecKind kind = CodecKind::Eaves;
  gf::Elem q = 0;
  std::int64_t n = 1;              // symbols per packet
  std::int64_t packets = 0;        // N
  std::int64_t tau = 1;
  std::int64_t lambda_scaled = 0;  // tau * lambda
  std::int64_t rate_packets = 0;   // message packets: N - tau*lambda, R' or R''
  std::int64_t key_packets = 0;    // key packets: tau*lambda, 0 or the key-size formula
  std::int64_t message_symbols = 0;
  std::int64_t key_symbols = 0;
  Rational delta;                  // redundancy: 0, or (N+1)/n for hash-packet codecs
  Rational leakage_budget;         // permitted leakage, in log_q units

  /// Length of the message-bearing part T of a hash packet, n - N - 1.
  std::int64_t payload_length() const { return n - packets - 1; }
  double bits_per_symbol() const;
  /// Independent symbol positions per packet that share one encoder: n for
  /// the eavesdropping codec (one instance per symbol), 1 otherwise.
  std::int64_t instances() const { return kind == CodecKind::Eaves ? n : 1; }
};

/// floor((1 - (N+1)/n) * (N - tau*lambda)), computed exactly.
std::int64_t jam_rate_packets(std::int64_t packets, std::int64_t lambda_scaled, std::int64_t n);
/// floor((1 - (N+1)/n) * (N - 2 tau*lambda)).
std::int64_t eavesjam_rate_packets(std::int64_t packets, std::int64_t lambda_scaled, std::int64_t n);
/// floor((1 - (N+1)/n) * tau*lambda).
std::int64_t eavesjam_key_packets(std::int64_t packets, std::int64_t lambda_scaled, std::int64_t n);

/// Vandermonde coset code: N - tau*lambda message packets and tau*lambda key
/// packets. q = 0 selects the smallest prime above N.
CodecParams eaves_params(const RoutingPlan& plan, std::int64_t n, gf::Elem q = 0);
/// Hash-packet code against a jammer. q = 0 selects the smallest prime above
/// (n - N - 1) N.
CodecParams jam_params(const RoutingPlan& plan, std::int64_t n, gf::Elem q = 0);
/// Hash-packet code with a secrecy key of tau*lambda*(n-N-1) + N symbols. The
/// first part spreads over every payload through the encoder; the last N are
/// one pad per packet, added to its first payload symbol. Since every hash row
/// starts with 1, that pad masks the packet's hash value for every seed.
CodecParams eavesjam_params(const RoutingPlan& plan, std::int64_t n, gf::Elem q = 0);

/// One coding generation. Row j of `packets` is the packet riding schedule
/// packet index j.
struct Generation {
  CodecKind kind = CodecKind::Eaves;
  gf::Matrix packets;  // N x n
  gf::Vector message;
  gf::Vector key;
  gf::Elem rho = 0;
  std::uint64_t seed = 0;  // seed of the randomness that drew key and rho
};

struct DecodeResult {
  bool ok = false;
  gf::Vector message;
  std::vector<std::size_t> accepted_packets;
  std::string diagnostic;
};

/// Parameters plus the field and source encoder they determine.
class Codec {
 public:
  explicit Codec(CodecParams params);

  const CodecParams& params() const { return params_; }
  const gf::PrimeField& field() const { return field_; }
  /// Eavesdropping codec: N x N. Hash-packet codecs: (n-N-1)N x (message+key),
  /// Vandermonde on the message and spread key, unit columns for the pads.
  const gf::Matrix& encoder() const { return encoder_; }
  /// Inverse of the square encoder; eavesdropping codec only.
  const gf::Matrix& decoder() const { return inverse_; }
  /// Encoder rows that produce packet j (one row, or the n-N-1 payload rows).
  gf::Matrix packet_rows(std::size_t packet) const;

 private:
  CodecParams params_;
  gf::PrimeField field_;
  gf::Matrix encoder_;
  gf::Matrix inverse_;
};

/// Message is (N - tau*lambda) x n symbols flattened column-major (one column
/// per symbol position); key likewise with tau*lambda rows.
Generation eaves_encode(const Codec& codec, const gf::Vector& message, const gf::Vector& key);
Generation eaves_encode(const Codec& codec, const gf::Vector& message, std::mt19937_64& rng);
DecodeResult eaves_decode(const Codec& codec, const gf::Matrix& received);

Generation jam_encode(const Codec& codec, const gf::Vector& message, gf::Elem rho);
DecodeResult jam_decode(const Codec& codec, const gf::Matrix& received);

Generation eavesjam_encode(const Codec& codec, const gf::Vector& message, const gf::Vector& key,
                           gf::Elem rho);
Generation eavesjam_encode(const Codec& codec, const gf::Vector& message, std::mt19937_64& rng);
DecodeResult eavesjam_decode(const Codec& codec, const gf::Matrix& received);

/// Uniform field element by rejection sampling, identical on every platform.
gf::Elem random_elem(const gf::PrimeField& f, std::mt19937_64& rng);

/// Draws a uniformly random message of the codec's size.
gf::Vector random_message(const Codec& codec, std::mt19937_64& rng);
gf::Vector random_vector(const gf::PrimeField& f, Eigen::Index size, std::mt19937_64& rng);

/// Dispatches on the codec kind. Key and rho are drawn from `rng`.
Generation encode(const Codec& codec, const gf::Vector& message, std::mt19937_64& rng);
DecodeResult decode(const Codec& codec, const gf::Matrix& received);

/// Linear map from the source vector (message, key) of one instance to what a
/// node set observes when it sees `observed` packets: their encoder rows and,
/// for hash-packet codecs, every hash value D (for the given rho).
gf::Matrix observation_matrix(const Codec& codec, const std::vector<std::size_t>& observed,
                              gf::Elem rho);

/// Exact information leaked about the message, in log_q units:
/// instances * (rank(A) - rank(A restricted to key columns)).
std::int64_t leakage_symbols(const Codec& codec, const std::vector<std::size_t>& observed,
                             gf::Elem rho = 0);

}  // namespace advflow
