#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "adkg/message.hpp"

namespace adkg::sim {

using Rng = std::mt19937_64;

/// Uniform draw in [0, bound) that does not depend on the standard
/// library's distribution implementation.
std::uint64_t draw_below(Rng& rng, std::uint64_t bound);

/// One simulated participant.
class Process {
 public:
  virtual ~Process() = default;
  virtual void start(Outbox& out) = 0;
  virtual void receive(const Envelope& env, Outbox& out) = 0;
  /// Finished its protocol (delivered, output or decided).
  virtual bool terminated() const = 0;
  /// Messages the protocol discarded as malformed or non-verifying.
  virtual std::size_t dropped() const { return 0; }
};

/// Owns the in-flight pool and decides what is delivered next. Schedulers
/// may delay but never drop.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual void push(Envelope env) = 0;
  virtual Envelope pop(Rng& rng) = 0;
  virtual std::size_t size() const = 0;
  bool empty() const { return size() == 0; }
};

/// Uniform choice among in-flight envelopes; optional per-link weights
/// (weight w in (0, 1] relative to the default 1) applied by rejection.
std::unique_ptr<Scheduler> make_random_scheduler(std::map<std::pair<PartyId, PartyId>, double> weights = {});
/// Deliveries in send order.
std::unique_ptr<Scheduler> make_fifo_scheduler();
/// Holds back everything to or from `target` until nothing else is in
/// flight; otherwise uniform.
std::unique_ptr<Scheduler> make_delay_target_scheduler(PartyId target);
/// The callback picks an index into the in-flight list.
using ScriptFn = std::function<std::size_t(const std::vector<Envelope>&, Rng&)>;
std::unique_ptr<Scheduler> make_scripted_scheduler(ScriptFn pick);

struct RunMetrics {
  std::uint64_t words_total = 0;
  std::map<std::string, std::uint64_t> words_by_protocol;
  std::uint64_t envelopes = 0;
  std::uint64_t deliveries = 0;
  std::uint32_t causal_round_depth = 0;
  std::optional<std::uint32_t> decided_view;
  std::vector<bool> terminated;
  std::uint64_t dropped = 0;
  bool budget_exhausted = false;
  std::size_t undelivered = 0;

  std::string to_json() const;
};

/// Totals recomputed from a trace (send records only).
struct TraceTotals {
  std::uint64_t words_total = 0;
  std::map<std::string, std::uint64_t> words_by_protocol;
  std::uint64_t sends = 0;
};
TraceTotals replay_trace(std::istream& in);

/// Sequential deterministic event loop.
class Network {
 public:
  struct Options {
    std::uint64_t seed = 0;
    std::uint64_t budget = 1'000'000;
    bool trace = false;
    bool keep_log = false;  // retain every sent envelope for offline checks
  };

  Network(std::size_t n, std::unique_ptr<Scheduler> scheduler, Options opts);

  void set_process(PartyId id, std::unique_ptr<Process> p);
  Process& process(PartyId id) { return *procs_.at(id); }
  const Process& process(PartyId id) const { return *procs_.at(id); }

  /// Starts every process in index order and delivers until the pool is
  /// empty or the delivery budget trips.
  RunMetrics run();

  /// Hook fired for every note (output, view change, decide).
  std::function<void(PartyId, const Note&)> on_note;

  const std::vector<Envelope>& log() const { return log_; }
  const std::string& trace() const { return trace_; }

 private:
  void absorb(PartyId from, Outbox& out, std::uint32_t depth);
  void trace_envelope(std::string_view kind, const Envelope& env);
  void trace_note(PartyId party, const Note& note);

  std::size_t n_;
  std::unique_ptr<Scheduler> scheduler_;
  Options opts_;
  Rng rng_;
  std::vector<std::unique_ptr<Process>> procs_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_event_ = 0;
  RunMetrics metrics_;
  std::vector<Envelope> log_;
  std::string trace_;
};

}  // namespace adkg::sim
