#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "adkg/serial.hpp"
#include "adkg/types.hpp"

namespace adkg {

/// Signing secret of one party. The simulator hands each node only its own.
struct PartyKey {
  PartyId id = 0;
  Digest secret{};
};

struct PublicKey {
  PartyId id = 0;
  Digest fingerprint{};

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

/// One contribution to a distributed key. The signed tag binds the payload
/// to its contributor.
struct DkgShare {
  PartyId contributor = 0;
  Digest payload{};
  Signature tag{};

  friend bool operator==(const DkgShare&, const DkgShare&) = default;
};

/// Aggregate of verified shares from distinct contributors, sorted by
/// contributor; aggregate_id is the digest of that canonical list.
struct DkgTranscript {
  std::vector<DkgShare> shares;
  Digest aggregate_id{};

  friend bool operator==(const DkgTranscript&, const DkgTranscript&) = default;
};

struct EvalShare {
  PartyId evaluator = 0;
  Digest transcript_id{};
  Bytes message;
  Signature share{};
  Bytes proof;

  friend bool operator==(const EvalShare&, const EvalShare&) = default;
};

/// Threshold VRF output: `value` is lambda bits, big-endian, compared as an
/// unsigned integer.
struct Evaluation {
  Bytes value;
  Bytes proof;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

/// Smallest admissible VRF output width for n parties: ceil(3 * log2(n)).
std::size_t min_lambda_bits(std::size_t n);

/// The cryptographic contract consumed by the protocols: PKI signatures, DKG
/// shares and transcripts, and a threshold VRF keyed by a transcript.
class CryptoProvider {
 public:
  virtual ~CryptoProvider() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t n() const = 0;
  virtual std::size_t f() const = 0;
  virtual std::size_t lambda_bits() const = 0;

  virtual PublicKey public_key(PartyId id) const = 0;
  virtual Signature sign(const PartyKey& key, ByteView message) const = 0;
  virtual bool verify_signature(const PublicKey& pk, ByteView message, const Signature& sig) const = 0;

  /// `nonce` stands in for the sampling randomness of a fresh share.
  virtual DkgShare dkg_sh(const PartyKey& key, ByteView nonce) const = 0;
  virtual bool dkg_sh_verify(const PublicKey& pk, const DkgShare& share) const = 0;
  /// Throws TooFewShares below 2f + 1, DuplicateContributor on repeats and
  /// ShareMismatch when a share does not verify.
  virtual DkgTranscript dkg_aggregate(std::span<const DkgShare> shares) const = 0;
  virtual bool dkg_verify(const DkgTranscript& t) const = 0;

  virtual EvalShare eval_sh(const DkgTranscript& t, const PartyKey& key, ByteView message) const = 0;
  virtual bool eval_sh_verify(const DkgTranscript& t, const PublicKey& pk, ByteView message,
                              const EvalShare& share) const = 0;
  /// Needs f + 1 verifying shares from distinct evaluators (TooFewShares);
  /// shares for another transcript or message raise ShareMismatch.
  virtual Evaluation eval(const DkgTranscript& t, ByteView message,
                          std::span<const EvalShare> shares) const = 0;
  virtual bool eval_verify(const DkgTranscript& t, ByteView message, const Evaluation& e) const = 0;
};

/// Simulation-grade provider ("sim-oracle"). Signatures are keyed MACs
/// checked through the provider's private key registry; VRF values come from
/// a salted hash that is only released once f + 1 valid shares are shown.
class SimOracleProvider final : public CryptoProvider {
 public:
  SimOracleProvider(std::size_t n, std::size_t f, std::uint64_t seed, std::size_t lambda_bits = 128);

  std::string_view name() const override { return "sim-oracle"; }
  std::size_t n() const override { return n_; }
  std::size_t f() const override { return f_; }
  std::size_t lambda_bits() const override { return lambda_bits_; }

  /// Issues the signing key of party `id`; only the simulator calls this.
  PartyKey issue_key(PartyId id) const;

  PublicKey public_key(PartyId id) const override;
  Signature sign(const PartyKey& key, ByteView message) const override;
  bool verify_signature(const PublicKey& pk, ByteView message, const Signature& sig) const override;

  DkgShare dkg_sh(const PartyKey& key, ByteView nonce) const override;
  bool dkg_sh_verify(const PublicKey& pk, const DkgShare& share) const override;
  DkgTranscript dkg_aggregate(std::span<const DkgShare> shares) const override;
  bool dkg_verify(const DkgTranscript& t) const override;

  EvalShare eval_sh(const DkgTranscript& t, const PartyKey& key, ByteView message) const override;
  bool eval_sh_verify(const DkgTranscript& t, const PublicKey& pk, ByteView message,
                      const EvalShare& share) const override;
  Evaluation eval(const DkgTranscript& t, ByteView message,
                  std::span<const EvalShare> shares) const override;
  bool eval_verify(const DkgTranscript& t, ByteView message, const Evaluation& e) const override;

 private:
  Bytes oracle_value(const Digest& transcript_id, ByteView message) const;
  std::size_t count_valid_shares(const DkgTranscript& t, ByteView message,
                                 std::span<const EvalShare> shares, bool strict) const;

  std::size_t n_;
  std::size_t f_;
  std::size_t lambda_bits_;
  std::vector<Digest> secrets_;
  std::vector<Digest> fingerprints_;
  Digest oracle_salt_{};
};

/// Provider lookup by the name used in scenario files.
std::unique_ptr<SimOracleProvider> make_provider(std::string_view name, std::size_t n, std::size_t f,
                                                 std::uint64_t seed, std::size_t lambda_bits);

// Canonical encodings; decoders throw Error(Decode).
void write_share(Writer& w, const DkgShare& s);
DkgShare read_share(Reader& r);
Bytes encode_transcript(const DkgTranscript& t);
DkgTranscript decode_transcript(ByteView bytes);
void write_transcript(Writer& w, const DkgTranscript& t);
DkgTranscript read_transcript(Reader& r);

/// Metered size: contributor index, payload and tag are one word each.
inline std::size_t share_words(const DkgShare&) { return 3; }
inline std::size_t transcript_words(const DkgTranscript& t) { return 1 + 3 * t.shares.size(); }

}  // namespace adkg
