#include <cmath>
#include <sstream>

#include "adkg/checks.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace adkg;
using namespace testing;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Config;
}

// Party 0 pings everyone; everyone answers party 0 once.
void ping_pong(LocalNet& net, std::size_t n) {
  net[0].on_start = [n](Outbox& out) {
    for (PartyId j = 0; j < n; ++j) out.send(j, InstanceTag{}, DkgShareMessage{});
  };
  for (PartyId i = 0; i < n; ++i) {
    net[i].on_receive = [](const Envelope& env, Outbox& out) {
      if (env.from == 0 && env.depth == 1) out.send(0, InstanceTag{}, DkgShareMessage{});
    };
  }
}

}  // namespace

TEST_CASE("draw_below is uniform and in range") {
  sim::Rng rng(5);
  std::vector<int> hist(6);
  for (int i = 0; i < 60000; ++i) {
    auto v = sim::draw_below(rng, 6);
    REQUIRE(v < 6);
    ++hist[v];
  }
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  CHECK_THROWS_AS(sim::draw_below(rng, 0), Error);
}

TEST_CASE("fifo delivers in send order with causal depth") {
  LocalNet net(3, sim::make_fifo_scheduler());
  std::vector<std::uint64_t> order;
  ping_pong(net, 3);
  for (PartyId i = 0; i < 3; ++i) {
    auto inner = net[i].on_receive;
    net[i].on_receive = [&order, inner](const Envelope& env, Outbox& out) {
      order.push_back(env.seq);
      inner(env, out);
    };
  }
  auto m = net.run();
  CHECK(order == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5});
  CHECK(m.envelopes == 6);
  CHECK(m.deliveries == 6);
  CHECK(m.causal_round_depth == 2);
  CHECK(m.words_total == 6 * 3);
  CHECK(m.undelivered == 0);
}

TEST_CASE("delay-target holds back the target's traffic") {
  LocalNet net(4, sim::make_delay_target_scheduler(2), 9);
  std::vector<PartyId> recipients;
  ping_pong(net, 4);
  for (PartyId i = 0; i < 4; ++i) {
    auto inner = net[i].on_receive;
    net[i].on_receive = [&recipients, inner](const Envelope& env, Outbox& out) {
      recipients.push_back(env.to * 10 + env.from);
      inner(env, out);
    };
  }
  net.run();
  // the last two deliveries are 0 -> 2 and 2 -> 0
  REQUIRE(recipients.size() == 8);
  CHECK(recipients[6] == 20);
  CHECK(recipients[7] == 2);
}

TEST_CASE("scripted scheduler and budget") {
  LocalNet net(2, sim::make_scripted_scheduler([](const std::vector<Envelope>& pool, sim::Rng&) {
                 return pool.size() - 1;  // newest first
               }),
               0, 500);
  net[0].on_start = [](Outbox& out) { out.send(1, InstanceTag{}, DkgShareMessage{}); };
  for (PartyId i = 0; i < 2; ++i)
    net[i].on_receive = [i](const Envelope&, Outbox& out) { out.send(1 - i, InstanceTag{}, DkgShareMessage{}); };
  auto m = net.run();  // endless ping-pong
  CHECK(m.budget_exhausted);
  CHECK(m.deliveries == 500);
  CHECK(m.undelivered == 1);
}

TEST_CASE("link weights must be positive") {
  CHECK(code_of([] { sim::make_random_scheduler({{{0, 1}, 0.0}}); }) == ErrorCode::InvalidScenario);
}

TEST_CASE("runs are deterministic and traces replay to the metered words") {
  for (auto p : {sim::Protocol::Rb, sim::Protocol::Gather, sim::Protocol::Pe, sim::Protocol::Nwh, sim::Protocol::Adkg}) {
    auto cfg = sim::reference_config(p);
    cfg.adversary.corrupt = {{1, "bad_dealer"}};
    auto a = sim::run_scenario(cfg, 3, true);
    auto b = sim::run_scenario(cfg, 3, true);
    CHECK(a.trace == b.trace);
    CHECK(a.metrics.to_json() == b.metrics.to_json());
    CHECK(a.to_json() == b.to_json());
    std::istringstream in(a.trace);
    auto totals = sim::replay_trace(in);
    CHECK(totals.words_total == a.metrics.words_total);
    CHECK(totals.words_by_protocol == a.metrics.words_by_protocol);
    CHECK(totals.sends == a.metrics.envelopes);
    auto c = sim::run_scenario(cfg, 4, true);
    CHECK(c.trace != a.trace);
  }
}

TEST_CASE("trace records") {
  auto o = sim::run_scenario(sim::reference_config(sim::Protocol::Nwh), 0, true);
  std::istringstream in(o.trace);
  std::string line;
  std::set<std::string> kinds;
  while (std::getline(in, line)) {
    for (const char* k : {"send", "deliver", "output", "view_change", "decide"})
      if (line.find(std::string("\"kind\":\"") + k + "\"") != std::string::npos) kinds.insert(k);
    CHECK(line.find("\"seq\":") != std::string::npos);
    CHECK(line.find("\"instance\":") != std::string::npos);
    CHECK(line.find("\"words\":") != std::string::npos);
  }
  CHECK(kinds.size() == 5);
}

TEST_CASE("scenario config validation") {
  sim::ScenarioConfig c;
  c.n = 4;
  c.f = 2;
  CHECK(code_of([&] { c.check(); }) == ErrorCode::InvalidScenario);
  c.f = 1;
  c.lambda = 5;
  CHECK(code_of([&] { c.check(); }) == ErrorCode::InvalidScenario);
  c.lambda = 128;
  c.adversary.corrupt = {{0, "silent"}, {1, "silent"}};
  CHECK(code_of([&] { c.check(); }) == ErrorCode::InvalidScenario);
  c.adversary.corrupt = {{0, "sneaky"}};
  CHECK(code_of([&] { c.check(); }) == ErrorCode::Config);
  c.adversary.corrupt.clear();
  c.adversary.scheduler = "lifo";
  CHECK(code_of([&] { c.check(); }) == ErrorCode::Config);
  c.adversary.scheduler = "random";
  c.validate = "regex:.*";
  CHECK(code_of([&] { c.check(); }) == ErrorCode::Config);
  c.validate = "max_len:10";
  CHECK_NOTHROW(c.check());
}

TEST_CASE("config json roundtrip and errors") {
  for (auto p : {sim::Protocol::Rb, sim::Protocol::Vrb, sim::Protocol::Gather, sim::Protocol::Pe, sim::Protocol::Nwh,
                 sim::Protocol::Adkg}) {
    auto c = sim::reference_config(p);
    c.adversary.corrupt = {{2, "stale_blamer"}};
    c.adversary.link_weights = {{0, 1, 0.5}};
    auto text = c.to_json();
    CHECK(sim::ScenarioConfig::from_json(text).to_json() == text);
  }
  CHECK(code_of([] { sim::ScenarioConfig::from_json(R"({"n": 4, "colour": 1})"); }) == ErrorCode::Config);
  CHECK(code_of([] { sim::ScenarioConfig::from_json("{not json"); }) == ErrorCode::Config);
  CHECK(code_of([] { sim::ScenarioConfig::from_json(R"({"protocol": "paxos"})"); }) == ErrorCode::Config);
  CHECK(code_of([] { sim::ScenarioConfig::from_json(R"({"n": "four"})"); }) == ErrorCode::Config);
  auto c = sim::ScenarioConfig::from_json(R"({"protocol": "pe", "seeds": "5..9"})");
  CHECK(c.protocol == sim::Protocol::Pe);
  CHECK(c.seed_begin == 5);
  CHECK(c.seed_end == 9);
}

TEST_CASE("seed ranges") {
  CHECK(sim::parse_seed_range("0..99") == std::pair<std::uint64_t, std::uint64_t>{0, 99});
  CHECK(sim::parse_seed_range("7") == std::pair<std::uint64_t, std::uint64_t>{7, 7});
  CHECK(code_of([] { sim::parse_seed_range("9..3"); }) == ErrorCode::Config);
  CHECK(code_of([] { sim::parse_seed_range("a..b"); }) == ErrorCode::Config);
}

TEST_CASE("validity specs") {
  auto v = sim::Validity::parse("max_words:3");
  CHECK(v(to_bytes("12345678901234")));  // 1 + 2 words
  CHECK_FALSE(v(to_bytes("123456789012345")));
  CHECK(sim::Validity::parse("prefix:ab")(to_bytes("abc")));
  CHECK_FALSE(sim::Validity::parse("prefix:ab")(to_bytes("a")));
  CHECK(sim::Validity::parse("max_len:2")(to_bytes("ab")));
  CHECK_FALSE(sim::Validity::parse("max_len:2")(to_bytes("abc")));
  CHECK(sim::Validity::parse("any")(Bytes{}));
  CHECK(sim::Validity::parse("prefix:x").str() == "prefix:x");
}

TEST_CASE("log-log slope") {
  std::vector<sim::ScalingPoint> cube;
  for (std::size_t n : {4u, 7u, 10u, 13u}) cube.push_back({n, 5.0 * std::pow(static_cast<double>(n), 3.0)});
  CHECK(sim::loglog_slope(cube) == doctest::Approx(3.0));
  CHECK(code_of([] { sim::loglog_slope({{4, 10.0}}); }) == ErrorCode::InsufficientPoints);
  CHECK(code_of([] { sim::loglog_slope({{4, 10.0}, {7, 20.0}, {4, 11.0}}); }) == ErrorCode::InsufficientPoints);
  auto base = sim::reference_config(sim::Protocol::Rb);
  CHECK(code_of([&] { sim::scaling(base, {4}); }) == ErrorCode::InsufficientPoints);
  CHECK(code_of([&] { sim::scaling(base, {4, 6, 7}); }) == ErrorCode::InvalidScenario);
}

TEST_CASE("summary aggregation") {
  std::vector<sim::RunOutcome> runs(4);
  for (std::size_t i = 0; i < 4; ++i) {
    runs[i].metrics.words_total = 10 * (i + 1);
    runs[i].metrics.decided_view = static_cast<std::uint32_t>(i + 1);
    runs[i].events["quality"] = i == 0;
  }
  runs[2].violations.push_back("agreement: distinct decisions");
  auto s = sim::summarize("nwh", runs);
  CHECK(s.runs == 4);
  CHECK(s.mean_words == doctest::Approx(25.0));
  CHECK(*s.mean_decided_view == doctest::Approx(2.5));
  CHECK(*s.p50_decided_view == 2.0);
  CHECK(*s.p90_decided_view == 4.0);
  CHECK(*s.max_decided_view == 4u);
  CHECK(*s.quality_frequency == doctest::Approx(0.25));
  CHECK(s.agreement_violations == 1);
  CHECK(s.violation_counts.at("agreement") == 1);
  CHECK_FALSE(s.alpha_frequency.has_value());
}
