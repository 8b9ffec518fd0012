#include "adkg/crypto.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "adkg/hash.hpp"

namespace adkg {

namespace {

Bytes share_signing_message(PartyId contributor, const Digest& payload) {
  Writer w;
  w.text("adkg/dkg-share").u32(contributor).raw(payload);
  return std::move(w).bytes();
}

Bytes eval_signing_message(const Digest& transcript_id, ByteView message) {
  Writer w;
  w.text("adkg/vrf-share").raw(transcript_id).blob(message);
  return std::move(w).bytes();
}

Digest transcript_digest(std::span<const DkgShare> sorted) {
  Writer w;
  w.text("adkg/dkg-aggregate").u32(static_cast<std::uint32_t>(sorted.size()));
  for (const auto& s : sorted) write_share(w, s);
  return sha256(w.bytes());
}

void write_eval_share(Writer& w, const EvalShare& s) {
  w.u32(s.evaluator).raw(s.transcript_id).blob(s.message).raw(s.share).blob(s.proof);
}

EvalShare read_eval_share(Reader& r) {
  EvalShare s;
  s.evaluator = r.u32();
  s.transcript_id = r.fixed<32>();
  s.message = r.blob();
  s.share = r.fixed<32>();
  s.proof = r.blob();
  return s;
}

}  // namespace

std::size_t min_lambda_bits(std::size_t n) {
  if (n <= 1) return 1;
  return static_cast<std::size_t>(std::ceil(3.0 * std::log2(static_cast<double>(n)) - 1e-9));
}

SimOracleProvider::SimOracleProvider(std::size_t n, std::size_t f, std::uint64_t seed,
                                     std::size_t lambda_bits)
    : n_(n), f_(f), lambda_bits_(lambda_bits) {
  if (n == 0 || n < 3 * f + 1) throw Error(ErrorCode::InvalidScenario, "need n >= 3f + 1");
  if (lambda_bits == 0 || lambda_bits < min_lambda_bits(n))
    throw Error(ErrorCode::InvalidScenario, "lambda below 3*log2(n)");
  Writer seed_bytes;
  seed_bytes.u64(seed);
  oracle_salt_ = sha256({as_bytes("adkg/oracle-salt"), seed_bytes.bytes()});
  for (std::size_t i = 0; i < n; ++i) {
    Writer w;
    w.u64(seed).u32(static_cast<std::uint32_t>(i));
    secrets_.push_back(sha256({as_bytes("adkg/party-secret"), w.bytes()}));
    fingerprints_.push_back(sha256({as_bytes("adkg/party-public"), secrets_.back()}));
  }
}

PartyKey SimOracleProvider::issue_key(PartyId id) const {
  if (id >= n_) throw Error(ErrorCode::IndexOutOfRange, "no such party");
  return {id, secrets_[id]};
}

PublicKey SimOracleProvider::public_key(PartyId id) const {
  if (id >= n_) throw Error(ErrorCode::IndexOutOfRange, "no such party");
  return {id, fingerprints_[id]};
}

Signature SimOracleProvider::sign(const PartyKey& key, ByteView message) const {
  return hmac_sha256(key.secret, message);
}

bool SimOracleProvider::verify_signature(const PublicKey& pk, ByteView message,
                                         const Signature& sig) const {
  if (pk.id >= n_ || pk.fingerprint != fingerprints_[pk.id]) return false;
  return hmac_sha256(secrets_[pk.id], message) == sig;
}

DkgShare SimOracleProvider::dkg_sh(const PartyKey& key, ByteView nonce) const {
  DkgShare s;
  s.contributor = key.id;
  s.payload = sha256({as_bytes("adkg/dkg-payload"), key.secret, nonce});
  s.tag = sign(key, share_signing_message(s.contributor, s.payload));
  return s;
}

bool SimOracleProvider::dkg_sh_verify(const PublicKey& pk, const DkgShare& share) const {
  if (share.contributor != pk.id) return false;
  return verify_signature(pk, share_signing_message(share.contributor, share.payload), share.tag);
}

DkgTranscript SimOracleProvider::dkg_aggregate(std::span<const DkgShare> shares) const {
  std::vector<DkgShare> sorted(shares.begin(), shares.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const DkgShare& a, const DkgShare& b) { return a.contributor < b.contributor; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].contributor == sorted[i - 1].contributor)
      throw Error(ErrorCode::DuplicateContributor, "two shares from one contributor");
  if (sorted.size() < 2 * f_ + 1) throw Error(ErrorCode::TooFewShares, "aggregation needs 2f + 1 shares");
  for (const auto& s : sorted) {
    if (s.contributor >= n_ || !dkg_sh_verify(public_key(s.contributor), s))
      throw Error(ErrorCode::ShareMismatch, "share does not verify");
  }
  DkgTranscript t;
  t.aggregate_id = transcript_digest(sorted);
  t.shares = std::move(sorted);
  return t;
}

bool SimOracleProvider::dkg_verify(const DkgTranscript& t) const {
  if (t.shares.size() < 2 * f_ + 1) return false;
  for (std::size_t i = 0; i < t.shares.size(); ++i) {
    const auto& s = t.shares[i];
    if (i > 0 && s.contributor <= t.shares[i - 1].contributor) return false;
    if (s.contributor >= n_ || !dkg_sh_verify(public_key(s.contributor), s)) return false;
  }
  return transcript_digest(t.shares) == t.aggregate_id;
}

EvalShare SimOracleProvider::eval_sh(const DkgTranscript& t, const PartyKey& key,
                                     ByteView message) const {
  EvalShare s;
  s.evaluator = key.id;
  s.transcript_id = t.aggregate_id;
  s.message.assign(message.begin(), message.end());
  s.share = sign(key, eval_signing_message(t.aggregate_id, message));
  return s;
}

bool SimOracleProvider::eval_sh_verify(const DkgTranscript& t, const PublicKey& pk, ByteView message,
                                       const EvalShare& share) const {
  if (share.evaluator != pk.id || share.transcript_id != t.aggregate_id) return false;
  if (!std::equal(share.message.begin(), share.message.end(), message.begin(), message.end()))
    return false;
  return verify_signature(pk, eval_signing_message(t.aggregate_id, message), share.share);
}

std::size_t SimOracleProvider::count_valid_shares(const DkgTranscript& t, ByteView message,
                                                  std::span<const EvalShare> shares,
                                                  bool strict) const {
  std::set<PartyId> seen;
  for (const auto& s : shares) {
    const bool matches = s.transcript_id == t.aggregate_id &&
                         std::equal(s.message.begin(), s.message.end(), message.begin(), message.end());
    if (!matches) {
      if (strict) throw Error(ErrorCode::ShareMismatch, "share is for another transcript or message");
      continue;
    }
    if (s.evaluator >= n_ || !eval_sh_verify(t, public_key(s.evaluator), message, s)) {
      if (strict) throw Error(ErrorCode::ShareMismatch, "share does not verify");
      continue;
    }
    seen.insert(s.evaluator);
  }
  return seen.size();
}

Evaluation SimOracleProvider::eval(const DkgTranscript& t, ByteView message,
                                   std::span<const EvalShare> shares) const {
  if (count_valid_shares(t, message, shares, true) < f_ + 1)
    throw Error(ErrorCode::TooFewShares, "evaluation needs f + 1 shares");
  if (!dkg_verify(t)) throw Error(ErrorCode::InvalidInput, "transcript does not verify");

  std::vector<EvalShare> used;
  std::set<PartyId> seen;
  for (const auto& s : shares)
    if (seen.insert(s.evaluator).second) used.push_back(s);
  std::sort(used.begin(), used.end(),
            [](const EvalShare& a, const EvalShare& b) { return a.evaluator < b.evaluator; });
  used.resize(f_ + 1);

  Writer proof;
  proof.u32(static_cast<std::uint32_t>(used.size()));
  for (const auto& s : used) write_eval_share(proof, s);
  return {oracle_value(t.aggregate_id, message), std::move(proof).bytes()};
}

bool SimOracleProvider::eval_verify(const DkgTranscript& t, ByteView message, const Evaluation& e) const {
  std::vector<EvalShare> shares;
  try {
    Reader r(e.proof);
    const auto count = r.u32();
    if (count > n_) return false;
    for (std::uint32_t i = 0; i < count; ++i) shares.push_back(read_eval_share(r));
    r.expect_done();
  } catch (const Error&) {
    return false;
  }
  if (count_valid_shares(t, message, shares, false) < f_ + 1) return false;
  if (!dkg_verify(t)) return false;
  return e.value == oracle_value(t.aggregate_id, message);
}

Bytes SimOracleProvider::oracle_value(const Digest& transcript_id, ByteView message) const {
  const std::size_t nbytes = (lambda_bits_ + 7) / 8;
  Bytes out;
  for (std::uint32_t counter = 0; out.size() < nbytes; ++counter) {
    Writer w;
    w.u32(counter);
    auto block = sha256({as_bytes("adkg/vrf"), oracle_salt_, transcript_id, w.bytes(), message});
    out.insert(out.end(), block.begin(), block.end());
  }
  out.resize(nbytes);
  if (const auto spare = nbytes * 8 - lambda_bits_; spare != 0)
    out[0] &= static_cast<std::uint8_t>(0xffu >> spare);
  return out;
}

std::unique_ptr<SimOracleProvider> make_provider(std::string_view name, std::size_t n, std::size_t f,
                                                 std::uint64_t seed, std::size_t lambda_bits) {
  if (name != "sim-oracle")
    throw Error(ErrorCode::InvalidScenario, "unknown crypto provider '" + std::string(name) + "'");
  return std::make_unique<SimOracleProvider>(n, f, seed, lambda_bits);
}

void write_share(Writer& w, const DkgShare& s) { w.u32(s.contributor).raw(s.payload).raw(s.tag); }

DkgShare read_share(Reader& r) {
  DkgShare s;
  s.contributor = r.u32();
  s.payload = r.fixed<32>();
  s.tag = r.fixed<32>();
  return s;
}

void write_transcript(Writer& w, const DkgTranscript& t) {
  w.u32(static_cast<std::uint32_t>(t.shares.size()));
  for (const auto& s : t.shares) write_share(w, s);
  w.raw(t.aggregate_id);
}

DkgTranscript read_transcript(Reader& r) {
  DkgTranscript t;
  const auto count = r.u32();
  if (count > 4096) throw Error(ErrorCode::Decode, "implausible share count");
  t.shares.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) t.shares.push_back(read_share(r));
  t.aggregate_id = r.fixed<32>();
  return t;
}

Bytes encode_transcript(const DkgTranscript& t) {
  Writer w;
  write_transcript(w, t);
  return std::move(w).bytes();
}

DkgTranscript decode_transcript(ByteView bytes) {
  Reader r(bytes);
  auto t = read_transcript(r);
  r.expect_done();
  return t;
}

}  // namespace adkg
