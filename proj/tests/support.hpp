#pragma once

#include <deque>
#include <functional>
#include <memory>

#include "adkg/simnet.hpp"

namespace testing {

using namespace adkg;

/// Keys and contexts for n parties sharing one provider.
struct Parties {
  SimOracleProvider crypto;
  std::deque<PartyContext> ctx;  // stable addresses

  Parties(std::size_t n, std::size_t f, std::uint64_t seed = 1, std::size_t lambda = 128)
      : crypto(n, f, seed, lambda) {
    for (PartyId i = 0; i < n; ++i) ctx.push_back({i, n, f, &crypto, crypto.issue_key(i), 0});
  }
};

/// Process assembled from callbacks.
class FnProcess final : public sim::Process {
 public:
  std::function<void(Outbox&)> on_start = [](Outbox&) {};
  std::function<void(const Envelope&, Outbox&)> on_receive = [](const Envelope&, Outbox&) {};
  std::function<bool()> done = [] { return false; };

  void start(Outbox& out) override { on_start(out); }
  void receive(const Envelope& env, Outbox& out) override { on_receive(env, out); }
  bool terminated() const override { return done(); }
};

/// Network of FnProcess slots; set callbacks, then run.
struct LocalNet {
  sim::Network net;
  std::vector<FnProcess*> procs;

  LocalNet(std::size_t n, std::unique_ptr<sim::Scheduler> sched, std::uint64_t seed = 0,
           std::uint64_t budget = 1'000'000)
      : net(n, std::move(sched), sim::Network::Options{seed, budget, false, true}) {
    for (PartyId i = 0; i < n; ++i) {
      auto p = std::make_unique<FnProcess>();
      procs.push_back(p.get());
      net.set_process(i, std::move(p));
    }
  }
  FnProcess& operator[](PartyId i) { return *procs.at(i); }
  sim::RunMetrics run() { return net.run(); }
};

inline std::unique_ptr<sim::Scheduler> random_sched() { return sim::make_random_scheduler(); }

}  // namespace testing
