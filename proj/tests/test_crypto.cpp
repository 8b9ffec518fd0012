#include <sodium.h>

#include <algorithm>
#include <set>

#include "adkg/crypto.hpp"
#include "adkg/hash.hpp"
#include "adkg/vector_commitment.hpp"
#include "doctest.h"

using namespace adkg;

namespace {

Digest sodium_sha256(ByteView data) {
  Digest d{};
  crypto_hash_sha256(d.data(), data.data(), data.size());
  return d;
}

std::vector<DkgShare> honest_shares(const SimOracleProvider& c, std::size_t count) {
  std::vector<DkgShare> out;
  for (PartyId i = 0; i < count; ++i) out.push_back(c.dkg_sh(c.issue_key(i), as_bytes("nonce")));
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Config;
}

}  // namespace

TEST_CASE("sha256 matches libsodium and a known vector") {
  CHECK(to_hex(sha256(as_bytes("abc"))) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256({as_bytes("ab"), as_bytes("c")}) == sodium_sha256(as_bytes("abc")));
}

TEST_CASE("signatures") {
  SimOracleProvider c(4, 1, 9);
  const auto k0 = c.issue_key(0);
  const auto msg = to_bytes("hello");
  const auto sig = c.sign(k0, msg);
  CHECK(c.verify_signature(c.public_key(0), msg, sig));
  CHECK_FALSE(c.verify_signature(c.public_key(1), msg, sig));
  for (std::size_t bit = 0; bit < msg.size() * 8; ++bit) {
    auto m = msg;
    m[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    CHECK_FALSE(c.verify_signature(c.public_key(0), m, sig));
  }
  auto bad = sig;
  bad[0] ^= 1;
  CHECK_FALSE(c.verify_signature(c.public_key(0), msg, bad));
  CHECK_FALSE(c.verify_signature(PublicKey{7, {}}, msg, sig));
}

TEST_CASE("dkg shares") {
  SimOracleProvider c(4, 1, 2);
  const auto s = c.dkg_sh(c.issue_key(2), as_bytes("n1"));
  CHECK(c.dkg_sh_verify(c.public_key(2), s));
  CHECK_FALSE(c.dkg_sh_verify(c.public_key(1), s));
  auto moved = s;
  moved.contributor = 1;
  CHECK_FALSE(c.dkg_sh_verify(c.public_key(1), moved));
  for (std::size_t bit = 0; bit < s.payload.size() * 8; ++bit) {
    auto t = s;
    t.payload[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    CHECK_FALSE(c.dkg_sh_verify(c.public_key(2), t));
  }
  CHECK(c.dkg_sh(c.issue_key(2), as_bytes("n2")) != s);
}

TEST_CASE("dkg aggregation") {
  SimOracleProvider c(4, 1, 3);
  auto shares = honest_shares(c, 4);
  const auto t = c.dkg_aggregate(std::span(shares).first(3));
  CHECK(c.dkg_verify(t));
  CHECK(t.shares.size() == 3);

  CHECK(code_of([&] { c.dkg_aggregate(std::span(shares).first(2)); }) == ErrorCode::TooFewShares);
  std::vector<DkgShare> dup{shares[0], shares[0], shares[1]};
  CHECK(code_of([&] { c.dkg_aggregate(dup); }) == ErrorCode::DuplicateContributor);
  auto forged = shares;
  forged[1].payload[0] ^= 1;
  CHECK(code_of([&] { c.dkg_aggregate(forged); }) == ErrorCode::ShareMismatch);

  // every ordering of the same four shares gives one aggregate
  std::sort(shares.begin(), shares.end(), [](auto& a, auto& b) { return a.contributor < b.contributor; });
  const auto ref = c.dkg_aggregate(shares);
  std::vector<int> perm{0, 1, 2, 3};
  std::size_t orders = 0;
  do {
    std::vector<DkgShare> s;
    for (int p : perm) s.push_back(shares[p]);
    CHECK(c.dkg_aggregate(s).aggregate_id == ref.aggregate_id);
    ++orders;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(orders == 24);

  auto tampered = ref;
  tampered.aggregate_id[5] ^= 1;
  CHECK_FALSE(c.dkg_verify(tampered));
  auto shrunk = ref;
  shrunk.shares.pop_back();
  shrunk.shares.pop_back();
  CHECK_FALSE(c.dkg_verify(shrunk));

  CHECK(decode_transcript(encode_transcript(ref)) == ref);
  auto enc = encode_transcript(ref);
  enc.pop_back();
  CHECK(code_of([&] { decode_transcript(enc); }) == ErrorCode::Decode);
}

TEST_CASE("threshold evaluation is independent of the share subset") {
  SimOracleProvider c(4, 1, 4);
  auto shares = honest_shares(c, 4);
  const auto t = c.dkg_aggregate(shares);
  const auto msg = to_bytes("m");
  std::vector<EvalShare> es;
  for (PartyId i = 0; i < 4; ++i) {
    es.push_back(c.eval_sh(t, c.issue_key(i), msg));
    CHECK(c.eval_sh_verify(t, c.public_key(i), msg, es.back()));
    CHECK_FALSE(c.eval_sh_verify(t, c.public_key((i + 1) % 4), msg, es.back()));
    CHECK_FALSE(c.eval_sh_verify(t, c.public_key(i), to_bytes("other"), es.back()));
  }
  std::set<Bytes> values;
  std::size_t subsets = 0;
  for (unsigned mask = 1; mask < 16; ++mask) {
    std::vector<EvalShare> pick;
    for (unsigned b = 0; b < 4; ++b)
      if (mask & (1u << b)) pick.push_back(es[b]);
    if (pick.size() < 2) {
      CHECK(code_of([&] { c.eval(t, msg, pick); }) == ErrorCode::TooFewShares);
      continue;
    }
    const auto e = c.eval(t, msg, pick);
    CHECK(c.eval_verify(t, msg, e));
    CHECK_FALSE(c.eval_verify(t, to_bytes("x"), e));
    values.insert(e.value);
    ++subsets;
  }
  CHECK(subsets == 11);
  CHECK(values.size() == 1);
  CHECK(values.begin()->size() == 16);

  auto e = c.eval(t, msg, std::span(es).first(2));
  e.value[0] ^= 0x80;
  CHECK_FALSE(c.eval_verify(t, msg, e));

  std::vector<EvalShare> mixed{es[0], c.eval_sh(t, c.issue_key(1), to_bytes("z"))};
  CHECK(code_of([&] { c.eval(t, msg, mixed); }) == ErrorCode::ShareMismatch);

  // a different transcript keys a different function
  const auto t2 = c.dkg_aggregate(std::span(shares).first(3));
  std::vector<EvalShare> es2;
  for (PartyId i = 0; i < 2; ++i) es2.push_back(c.eval_sh(t2, c.issue_key(i), msg));
  CHECK(c.eval(t2, msg, es2).value != *values.begin());
}

TEST_CASE("output width and minimum lambda") {
  CHECK(min_lambda_bits(16) == 12);
  CHECK(min_lambda_bits(4) == 6);
  CHECK(min_lambda_bits(13) == 12);
  CHECK_THROWS_AS(SimOracleProvider(16, 5, 1, 11), Error);
  SimOracleProvider c(16, 5, 1, 12);
  std::vector<DkgShare> shares;
  for (PartyId i = 0; i < 11; ++i) shares.push_back(c.dkg_sh(c.issue_key(i), as_bytes("n")));
  const auto t = c.dkg_aggregate(shares);
  for (int m = 0; m < 50; ++m) {
    const auto msg = to_bytes(std::to_string(m));
    std::vector<EvalShare> es;
    for (PartyId i = 0; i < 6; ++i) es.push_back(c.eval_sh(t, c.issue_key(i), msg));
    const auto e = c.eval(t, msg, es);
    REQUIRE(e.value.size() == 2);
    CHECK((e.value[0] & 0xf0) == 0);  // value < 2^12
  }
}

TEST_CASE("vector commitment roundtrip and binding") {
  for (std::size_t len = 1; len <= 9; ++len) {
    std::vector<Bytes> v;
    for (std::size_t i = 0; i < len; ++i) v.push_back(to_bytes("v" + std::to_string(i)));
    const auto com = vc::commit(v);
    CHECK(com.length == len);
    const auto all = vc::open_prove_all(v);
    for (std::size_t i = 0; i < len; ++i) {
      const auto p = vc::open_prove(v, i);
      CHECK(p.siblings == all[i].siblings);
      CHECK(vc::open_verify(com, v[i], i, p));
      for (std::size_t j = 0; j < len; ++j)
        if (j != i) CHECK_FALSE(vc::open_verify(com, v[i], j, p));
      CHECK_FALSE(vc::open_verify(com, to_bytes("other"), i, p));
    }
    CHECK_THROWS_AS(vc::open_prove(v, len), Error);
  }
}

TEST_CASE("length-1 commitment is the leaf digest") {
  const std::vector<Bytes> v{to_bytes("solo")};
  const auto com = vc::commit(v);
  Bytes leaf{0x00, 0, 0, 0, 0};
  leaf.insert(leaf.end(), v[0].begin(), v[0].end());
  CHECK(com.root == sodium_sha256(leaf));
  const auto p = vc::open_prove(v, 0);
  CHECK(p.siblings.empty());
  CHECK(vc::open_verify(com, v[0], 0, p));
}

TEST_CASE("vector commitment rejects every single-bit flip of a proof") {
  std::vector<Bytes> v;
  for (int i = 0; i < 5; ++i) v.push_back(to_bytes("value-" + std::to_string(i)));
  const auto com = vc::commit(v);
  const auto p = vc::open_prove(v, 3);
  for (std::size_t s = 0; s < p.siblings.size(); ++s)
    for (std::size_t bit = 0; bit < 256; ++bit) {
      auto q = p;
      q.siblings[s][bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      CHECK_FALSE(vc::open_verify(com, v[3], 3, q));
    }
  auto shorter = p;
  shorter.siblings.pop_back();
  CHECK_FALSE(vc::open_verify(com, v[3], 3, shorter));
  auto other_len = com;
  other_len.length = 6;
  CHECK_FALSE(vc::open_verify(other_len, v[3], 7, p));
}
