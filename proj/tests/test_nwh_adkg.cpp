#include <set>

#include "adkg/checks.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace adkg;
using namespace testing;

namespace {

bool has_prefix(const Bytes& b) { return b.size() >= 3 && b[0] == 'i' && b[1] == 'n' && b[2] == ':'; }

SigSet sign_all(const Parties& p, std::string_view kind, const Bytes& v, std::uint64_t view,
                std::initializer_list<PartyId> signers) {
  SigSet out;
  for (PartyId s : signers) out.push_back({s, p.crypto.sign(p.ctx[s].key, nwh_signing_message(kind, v, view))});
  return out;
}

std::size_t count_dkg_shares(Outbox& out) {
  std::size_t c = 0;
  for (const auto& m : out.messages()) c += std::holds_alternative<DkgShareMessage>(*m.payload);
  return c;
}

sim::ScenarioConfig config(sim::Protocol p, std::map<PartyId, std::string> corrupt = {}) {
  auto cfg = sim::reference_config(p);
  cfg.adversary.corrupt = std::move(corrupt);
  return cfg;
}

}  // namespace

TEST_CASE("certificate predicates") {
  Parties p(4, 1);
  Nwh nwh(p.ctx[0], has_prefix);
  const auto v = to_bytes("in:v");

  CHECK(nwh.key_correct(0, v, {}));
  CHECK_FALSE(nwh.key_correct(0, to_bytes("bad"), {}));
  CHECK(nwh.lock_correct(0, to_bytes("anything"), {}));
  CHECK(nwh.lock_correct(0, {}, sign_all(p, "key", v, 9, {1})));

  CHECK(nwh.key_correct(2, v, sign_all(p, "echo", v, 2, {0, 1, 2})));
  CHECK_FALSE(nwh.key_correct(2, v, sign_all(p, "echo", v, 2, {0, 1})));
  CHECK_FALSE(nwh.key_correct(2, v, sign_all(p, "echo", v, 3, {0, 1, 2})));
  CHECK_FALSE(nwh.key_correct(2, v, sign_all(p, "key", v, 2, {0, 1, 2})));

  CHECK(nwh.lock_correct(1, v, sign_all(p, "key", v, 1, {1, 2, 3})));
  CHECK_FALSE(nwh.lock_correct(1, v, sign_all(p, "key", v, 1, {1, 2})));

  CHECK(nwh.commit_correct(1, v, sign_all(p, "lock", v, 1, {0, 2, 3})));
  CHECK_FALSE(nwh.commit_correct(1, v, sign_all(p, "lock", v, 1, {0, 2})));
  CHECK_FALSE(nwh.commit_correct(1, to_bytes("in:w"), sign_all(p, "lock", v, 1, {0, 2, 3})));

  auto dup = sign_all(p, "lock", v, 1, {0, 2});
  dup.push_back(dup.front());
  CHECK_FALSE(nwh.commit_correct(1, v, dup));
  auto stray = sign_all(p, "lock", v, 1, {0, 1, 2});
  stray.push_back({7, stray.front().sig});
  CHECK_FALSE(nwh.commit_correct(1, v, stray));
  auto forged = sign_all(p, "lock", v, 1, {0, 1, 2});
  forged[1].sig = forged[0].sig;
  CHECK_FALSE(nwh.commit_correct(1, v, forged));
}

TEST_CASE("n - f valid suggestions start one election") {
  Parties p(4, 1);
  Nwh nwh(p.ctx[0], has_prefix);
  Outbox out(0, 4);
  CHECK_THROWS_AS(nwh.start(to_bytes("bad"), out), Error);
  nwh.start(to_bytes("in:0"), out);
  CHECK(nwh.view() == 1);
  CHECK(nwh.key() == KeyTuple{0, to_bytes("in:0"), {}});

  const auto tag = p.ctx[0].tag(Channel::Nwh, 1);
  Outbox o1(0, 4);
  nwh.handle(1, tag, SuggestMessage{KeyTuple{0, to_bytes("in:1"), {}}}, o1);
  // a key from the current view is not admissible
  const auto v = to_bytes("in:x");
  nwh.handle(2, tag, SuggestMessage{KeyTuple{1, v, sign_all(p, "echo", v, 1, {0, 1, 2})}}, o1);
  nwh.handle(3, tag, SuggestMessage{KeyTuple{0, to_bytes("oops"), {}}}, o1);  // fails validation
  CHECK(count_dkg_shares(o1) == 0);
  CHECK((nwh.election(1) == nullptr || !nwh.election(1)->started()));

  Outbox o2(0, 4);
  nwh.handle(0, tag, SuggestMessage{nwh.key()}, o2);
  CHECK(count_dkg_shares(o2) == 0);
  nwh.handle(1, tag, SuggestMessage{KeyTuple{0, to_bytes("in:1"), {}}}, o2);  // repeat sender
  CHECK(count_dkg_shares(o2) == 0);

  Parties q(4, 1);
  Nwh fresh(q.ctx[0], has_prefix);
  Outbox o3(0, 4);
  fresh.start(to_bytes("in:0"), o3);
  Outbox o4(0, 4);
  for (PartyId j : {1u, 2u, 3u, 0u}) fresh.handle(j, tag, SuggestMessage{KeyTuple{0, to_bytes("in:" + std::to_string(j)), {}}}, o4);
  CHECK(count_dkg_shares(o4) == 4);
  REQUIRE(fresh.election(1));
  CHECK(fresh.election(1)->started());
}

TEST_CASE("messages before start are replayed") {
  Parties p(4, 1);
  Nwh nwh(p.ctx[0], has_prefix);
  const auto tag = p.ctx[0].tag(Channel::Nwh, 1);
  Outbox early(0, 4);
  for (PartyId j : {1u, 2u, 3u}) nwh.handle(j, tag, SuggestMessage{KeyTuple{0, to_bytes("in:" + std::to_string(j)), {}}}, early);
  CHECK(early.messages().empty());
  Outbox out(0, 4);
  nwh.start(to_bytes("in:0"), out);
  CHECK(count_dkg_shares(out) == 4);
}

TEST_CASE("all honest agreement decides in view 1 on an honest input") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    sim::Scenario s(config(sim::Protocol::Nwh), seed);
    s.run();
    auto o = s.evaluate();
    CHECK_MESSAGE(o.ok(), "seed " << seed);
    std::set<Bytes> inputs, decided;
    for (PartyId i = 0; i < 4; ++i) inputs.insert(s.node(i).input());
    for (PartyId i = 0; i < 4; ++i) {
      const auto& a = *s.node(i).agreement();
      REQUIRE(a.decision());
      decided.insert(*a.decision());
      // every gathered proposal of view 1 is a genesis key over its sender's input
      for (const auto& [k, t] : a.election(1)->start_eval()) {
        const auto key = decode_key_tuple(t.prop);
        CHECK(key.view == 0);
        CHECK(key.proof.empty());
        CHECK(key.value == s.node(k).input());
      }
    }
    REQUIRE(decided.size() == 1);
    CHECK(inputs.count(*decided.begin()));
  }
}

TEST_CASE("a party held back until the end decides via forwarding") {
  auto cfg = config(sim::Protocol::Nwh);
  cfg.adversary.scheduler = "delay-target";
  cfg.adversary.target = 3;
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    sim::Scenario s(cfg, seed);
    s.run();
    CHECK(s.evaluate().ok());
    CHECK(s.node(3).agreement()->decision() == s.node(0).agreement()->decision());
  }
}

TEST_CASE("equivocating echoes are exposed and agreement holds") {
  double equivocates = 0, views = 0;
  const std::uint64_t seeds = 60;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    auto o = sim::run_scenario(config(sim::Protocol::Nwh, {{0, "nwh_equivocator"}}), seed);
    CHECK_MESSAGE(o.ok(), "seed " << seed);
    equivocates += o.stats.at("honest_equivocates");
    views += *o.metrics.decided_view;
  }
  CHECK(equivocates > 0);
  CHECK(views / seeds > 1.0);
}

TEST_CASE("agreement under every adversary plugin") {
  for (const auto& b : sim::behavior_names()) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto o = sim::run_scenario(config(sim::Protocol::Nwh, {{1, b}}), seed);
      CHECK_MESSAGE(o.ok(), b << " seed " << seed);
    }
  }
}

TEST_CASE("key generation") {
  SUBCASE("all honest") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      sim::Scenario s(config(sim::Protocol::Adkg), seed);
      s.run();
      CHECK(s.evaluate().ok());
      const auto& ref = *s.node(0).adkg()->output();
      for (PartyId i = 0; i < 4; ++i) {
        const auto* a = s.node(i).adkg();
        REQUIRE(a->output());
        CHECK(*a->output() == ref);
        CHECK(a->proposal()->shares.size() == 3);
      }
      CHECK(s.crypto().dkg_verify(ref));
      CHECK(ref.shares.size() >= 3);
    }
  }
  SUBCASE("silent party") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      sim::Scenario s(config(sim::Protocol::Adkg, {{2, "silent"}}), seed);
      s.run();
      CHECK(s.evaluate().ok());
      for (PartyId i : s.honest_parties()) {
        for (const auto& sh : s.node(i).adkg()->proposal()->shares) CHECK(sh.contributor != 2);
        CHECK(s.node(i).adkg()->output());
      }
    }
  }
  SUBCASE("fifo") {
    auto cfg = config(sim::Protocol::Adkg);
    cfg.adversary.scheduler = "fifo";
    CHECK(sim::run_scenario(cfg, 0).ok());
  }
}

TEST_CASE("start sends one fresh share to each party") {
  Parties p(4, 1);
  Adkg a(p.ctx[1]);
  Outbox out(1, 4);
  a.start(out);
  std::set<PartyId> to;
  std::set<Digest> payloads;
  for (const auto& m : out.messages()) {
    if (!std::holds_alternative<DkgShareMessage>(*m.payload)) continue;
    to.insert(m.to);
    const auto& s = std::get<DkgShareMessage>(*m.payload).share;
    CHECK(s.contributor == 1);
    CHECK(p.crypto.dkg_sh_verify(p.crypto.public_key(1), s));
    payloads.insert(s.payload);
  }
  CHECK(to.size() == 4);
  CHECK(payloads.size() == 4);
}

TEST_CASE("transcript predicate") {
  SimOracleProvider c(4, 1, 5);
  std::vector<DkgShare> shares;
  for (PartyId i = 0; i < 3; ++i) shares.push_back(c.dkg_sh(c.issue_key(i), as_bytes("n")));
  const auto t = c.dkg_aggregate(shares);
  CHECK(transcript_valid(c, encode_transcript(t)));
  auto bad = t;
  bad.shares[0].payload[0] ^= 1;
  CHECK_FALSE(transcript_valid(c, encode_transcript(bad)));
  CHECK_FALSE(transcript_valid(c, to_bytes("garbage")));
}
