#include "adkg/simnet.hpp"

#include <deque>
#include <istream>

#include "json.hpp"

namespace adkg::sim {

using ojson = nlohmann::ordered_json;

std::uint64_t draw_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidInput, "empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x < threshold);
  return x % bound;
}

namespace {

double draw_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Envelope take(std::vector<Envelope>& pool, std::size_t i) {
  Envelope e = std::move(pool[i]);
  pool[i] = std::move(pool.back());
  pool.pop_back();
  return e;
}

class RandomScheduler final : public Scheduler {
 public:
  explicit RandomScheduler(std::map<std::pair<PartyId, PartyId>, double> w) : weights_(std::move(w)) {}
  void push(Envelope env) override { pool_.push_back(std::move(env)); }
  Envelope pop(Rng& rng) override {
    while (true) {
      const auto i = draw_below(rng, pool_.size());
      if (weights_.empty()) return take(pool_, i);
      auto it = weights_.find({pool_[i].from, pool_[i].to});
      if (it == weights_.end() || it->second >= 1.0 || draw_unit(rng) < it->second) return take(pool_, i);
    }
  }
  std::size_t size() const override { return pool_.size(); }

 private:
  std::map<std::pair<PartyId, PartyId>, double> weights_;
  std::vector<Envelope> pool_;
};

class FifoScheduler final : public Scheduler {
 public:
  void push(Envelope env) override { pool_.push_back(std::move(env)); }
  Envelope pop(Rng&) override {
    Envelope e = std::move(pool_.front());
    pool_.pop_front();
    return e;
  }
  std::size_t size() const override { return pool_.size(); }

 private:
  std::deque<Envelope> pool_;
};

class DelayTargetScheduler final : public Scheduler {
 public:
  explicit DelayTargetScheduler(PartyId target) : target_(target) {}
  void push(Envelope env) override {
    if (env.to == target_ || env.from == target_) held_.push_back(std::move(env));
    else pool_.push_back(std::move(env));
  }
  Envelope pop(Rng& rng) override {
    auto& from = pool_.empty() ? held_ : pool_;
    return take(from, draw_below(rng, from.size()));
  }
  std::size_t size() const override { return pool_.size() + held_.size(); }

 private:
  PartyId target_;
  std::vector<Envelope> pool_;
  std::vector<Envelope> held_;
};

class ScriptedScheduler final : public Scheduler {
 public:
  explicit ScriptedScheduler(ScriptFn pick) : pick_(std::move(pick)) {}
  void push(Envelope env) override { pool_.push_back(std::move(env)); }
  Envelope pop(Rng& rng) override {
    auto i = pick_(pool_, rng);
    if (i >= pool_.size()) i = 0;
    Envelope e = std::move(pool_[i]);
    pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(i));
    return e;
  }
  std::size_t size() const override { return pool_.size(); }

 private:
  ScriptFn pick_;
  std::vector<Envelope> pool_;
};

std::string_view note_kind(NoteKind k) {
  switch (k) {
    case NoteKind::Output: return "output";
    case NoteKind::ViewChange: return "view_change";
    case NoteKind::Decide: return "decide";
  }
  return "note";
}

}  // namespace

std::unique_ptr<Scheduler> make_random_scheduler(std::map<std::pair<PartyId, PartyId>, double> weights) {
  for (const auto& [link, w] : weights)
    if (!(w > 0.0)) throw Error(ErrorCode::InvalidScenario, "link weights must be positive");
  return std::make_unique<RandomScheduler>(std::move(weights));
}
std::unique_ptr<Scheduler> make_fifo_scheduler() { return std::make_unique<FifoScheduler>(); }
std::unique_ptr<Scheduler> make_delay_target_scheduler(PartyId target) {
  return std::make_unique<DelayTargetScheduler>(target);
}
std::unique_ptr<Scheduler> make_scripted_scheduler(ScriptFn pick) {
  return std::make_unique<ScriptedScheduler>(std::move(pick));
}

std::string RunMetrics::to_json() const {
  ojson j;
  j["words_total"] = words_total;
  j["words_by_protocol"] = words_by_protocol;
  j["envelopes"] = envelopes;
  j["deliveries"] = deliveries;
  j["causal_round_depth"] = causal_round_depth;
  j["decided_view"] = decided_view ? ojson(*decided_view) : ojson(nullptr);
  j["terminated"] = terminated;
  j["dropped"] = dropped;
  j["budget_exhausted"] = budget_exhausted;
  j["undelivered"] = undelivered;
  return j.dump();
}

TraceTotals replay_trace(std::istream& in) {
  TraceTotals t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto rec = nlohmann::json::parse(line);
    if (rec.at("kind") != "send") continue;
    const auto w = rec.at("words").get<std::uint64_t>();
    t.words_total += w;
    t.words_by_protocol[rec.at("protocol").get<std::string>()] += w;
    ++t.sends;
  }
  return t;
}

Network::Network(std::size_t n, std::unique_ptr<Scheduler> scheduler, Options opts)
    : n_(n), scheduler_(std::move(scheduler)), opts_(opts), rng_(opts.seed), procs_(n) {}

void Network::set_process(PartyId id, std::unique_ptr<Process> p) { procs_.at(id) = std::move(p); }

void Network::trace_envelope(std::string_view kind, const Envelope& env) {
  ojson j;
  j["seq"] = next_event_++;
  j["kind"] = kind;
  j["from"] = env.from;
  j["to"] = env.to;
  j["instance"] = env.tag.path();
  j["protocol"] = env.tag.protocol();
  j["msg"] = kind_name(*env.payload);
  j["words"] = env.words;
  j["env"] = env.seq;
  j["depth"] = env.depth;
  trace_ += j.dump();
  trace_ += '\n';
}

void Network::trace_note(PartyId party, const Note& note) {
  ojson j;
  j["seq"] = next_event_++;
  j["kind"] = note_kind(note.kind);
  j["from"] = party;
  j["to"] = party;
  j["instance"] = note.tag.path();
  j["words"] = 0;
  j["detail"] = note.detail;
  trace_ += j.dump();
  trace_ += '\n';
}

void Network::absorb(PartyId from, Outbox& out, std::uint32_t depth) {
  for (auto& note : out.notes()) {
    if (opts_.trace) trace_note(from, note);
    if (on_note) on_note(from, note);
  }
  for (auto& m : out.messages()) {
    Envelope env;
    env.seq = next_seq_++;
    env.from = from;
    env.to = m.to;
    env.tag = m.tag;
    env.payload = std::move(m.payload);
    env.words = static_cast<std::uint32_t>(word_cost(*env.payload));
    env.depth = depth;
    metrics_.words_total += env.words;
    metrics_.words_by_protocol[std::string(env.tag.protocol())] += env.words;
    ++metrics_.envelopes;
    metrics_.causal_round_depth = std::max(metrics_.causal_round_depth, depth);
    if (opts_.trace) trace_envelope("send", env);
    if (opts_.keep_log) log_.push_back(env);
    scheduler_->push(std::move(env));
  }
}

RunMetrics Network::run() {
  for (PartyId i = 0; i < n_; ++i)
    if (!procs_[i]) throw Error(ErrorCode::InvalidScenario, "missing process " + std::to_string(i));
  for (PartyId i = 0; i < n_; ++i) {
    Outbox out(i, n_);
    procs_[i]->start(out);
    absorb(i, out, 1);
  }
  while (!scheduler_->empty()) {
    if (metrics_.deliveries >= opts_.budget) {
      metrics_.budget_exhausted = true;
      break;
    }
    Envelope env = scheduler_->pop(rng_);
    ++metrics_.deliveries;
    if (opts_.trace) trace_envelope("deliver", env);
    Outbox out(env.to, n_);
    procs_[env.to]->receive(env, out);
    absorb(env.to, out, env.depth + 1);
  }
  metrics_.undelivered = scheduler_->size();
  metrics_.terminated.clear();
  for (const auto& p : procs_) {
    metrics_.terminated.push_back(p->terminated());
    metrics_.dropped += p->dropped();
  }
  return metrics_;
}

}  // namespace adkg::sim
