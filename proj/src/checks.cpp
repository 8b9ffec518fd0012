#include "adkg/checks.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace adkg::sim {

using ojson = nlohmann::ordered_json;

std::string RunOutcome::to_json() const {
  ojson j;
  j["seed"] = seed;
  j["ok"] = ok();
  j["violations"] = violations;
  j["events"] = events;
  j["stats"] = stats;
  j["metrics"] = ojson::parse(metrics.to_json());
  return j.dump();
}

Scenario::Scenario(const ScenarioConfig& cfg, std::uint64_t seed, Options opts) : cfg_(cfg), seed_(seed) {
  cfg_.check();
  crypto_ = make_provider(cfg_.crypto, cfg_.n, cfg_.f, seed, cfg_.lambda);

  std::unique_ptr<Scheduler> sched;
  if (opts.scheduler) {
    sched = opts.scheduler();
  } else if (cfg_.adversary.scheduler == "fifo") {
    sched = make_fifo_scheduler();
  } else if (cfg_.adversary.scheduler == "delay-target") {
    sched = make_delay_target_scheduler(cfg_.adversary.target);
  } else {
    std::map<std::pair<PartyId, PartyId>, double> weights;
    for (const auto& [a, b, w] : cfg_.adversary.link_weights) weights[{a, b}] = w;
    sched = make_random_scheduler(std::move(weights));
  }

  Network::Options nopts;
  nopts.seed = seed;
  nopts.budget = cfg_.budget;
  nopts.trace = opts.trace;
  nopts.keep_log = opts.keep_log.value_or(cfg_.protocol == Protocol::Nwh || cfg_.protocol == Protocol::Adkg);
  net_ = std::make_unique<Network>(cfg_.n, std::move(sched), nopts);

  nodes_.resize(cfg_.n);
  for (PartyId i = 0; i < cfg_.n; ++i) {
    auto node = std::make_unique<Node>(cfg_, *crypto_, crypto_->issue_key(i), seed);
    nodes_[i] = node.get();
    auto it = cfg_.adversary.corrupt.find(i);
    if (it == cfg_.adversary.corrupt.end()) {
      net_->set_process(i, std::move(node));
    } else {
      net_->set_process(i, std::make_unique<CorruptNode>(std::move(node), make_behavior(it->second, cfg_, i, seed)));
    }
  }
}

std::vector<PartyId> Scenario::honest_parties() const {
  std::vector<PartyId> out;
  for (PartyId i = 0; i < cfg_.n; ++i)
    if (honest(i)) out.push_back(i);
  return out;
}

RunMetrics Scenario::run() {
  metrics_ = net_->run();
  return *metrics_;
}

RunOutcome Scenario::evaluate() const {
  if (!metrics_) throw Error(ErrorCode::InvalidScenario, "evaluate before run");
  RunOutcome o;
  o.seed = seed_;
  o.metrics = *metrics_;
  o.trace = net_->trace();
  switch (cfg_.protocol) {
    case Protocol::Rb:
    case Protocol::Vrb: check_rb(o); break;
    case Protocol::Gather: check_gather(o); break;
    case Protocol::Pe: check_pe(o); break;
    case Protocol::Nwh: check_nwh(o); break;
    case Protocol::Adkg: check_adkg(o); break;
  }
  // Eventual delivery: a finished run leaves nothing in flight.
  if (!o.metrics.budget_exhausted && o.metrics.undelivered != 0)
    o.violations.push_back("delivery: envelopes left in flight");
  return o;
}

namespace {

std::string party(PartyId i) { return "party " + std::to_string(i); }

}  // namespace

void Scenario::check_rb(RunOutcome& o) const {
  const bool finished = !o.metrics.budget_exhausted;
  const auto h = honest_parties();
  const bool validated = cfg_.protocol == Protocol::Vrb;
  const auto& validity = node(h.front()).validity();
  std::set<Words> delivered;
  std::size_t count = 0;
  for (PartyId i : h) {
    const auto& d = node(i).rb()->delivered();
    if (!d) continue;
    ++count;
    delivered.insert(*d);
    if (validated && !validity.accepts_words(*d)) o.violations.push_back("external-validity: " + party(i));
  }
  if (delivered.size() > 1) o.violations.push_back("agreement: distinct deliveries");
  if (honest(cfg_.rb_dealer) && finished) {
    const auto msg = cfg_.rb_message(seed_);
    const bool should = !validated || validity.accepts_words(msg);
    for (PartyId i : h) {
      const auto& d = node(i).rb()->delivered();
      if (should && d != msg) o.violations.push_back("validity: " + party(i) + " missed the dealer's message");
      if (!should && d) o.violations.push_back("external-validity: invalid message delivered");
    }
  }
  if (finished && count > 0 && count < h.size()) o.violations.push_back("totality: partial delivery");
  o.events["delivered_any"] = count > 0;
  o.events["delivered_all"] = count == h.size();
}

void Scenario::check_gather(RunOutcome& o) const {
  const bool finished = !o.metrics.budget_exhausted;
  const auto h = honest_parties();
  const auto q = cfg_.n - cfg_.f;
  std::map<PartyId, Bytes> seen;
  auto record = [&](const GatherSet& x) {
    for (const auto& [k, v] : x) {
      auto [it, fresh] = seen.emplace(k, v);
      if (!fresh && it->second != v) o.violations.push_back("agreement: index " + std::to_string(k));
    }
  };
  std::optional<IndexSet> core;
  auto meet = [&](const IndexSet& s) { core = core ? core->intersected(s) : s; };

  std::vector<IndexSet> outputs;
  for (PartyId i : h) {
    const auto& g = *node(i).gather();
    if (!g.output()) {
      if (finished) o.violations.push_back("termination: " + party(i));
      continue;
    }
    const auto& x = *g.output();
    if (x.size() < q) o.violations.push_back("size: " + party(i));
    for (const auto& [k, v] : x)
      if (!node(i).validity()(v)) o.violations.push_back("external-validity: index " + std::to_string(k));
    record(x);
    outputs.push_back(indices_of(x));
    meet(outputs.back());
  }
  std::size_t verified = 0;
  for (PartyId i : h) {
    for (const auto& set : outputs) {
      auto r = node(i).gather()->verify(set);
      if (!r) {
        if (finished) o.violations.push_back("completeness: " + party(i) + " cannot verify an honest output");
        continue;
      }
      ++verified;
      record(*r);
      meet(indices_of(*r));
    }
  }
  const auto core_size = core ? core->size() : 0;
  if (!outputs.empty() && core_size < q) o.violations.push_back("core: common core below n - f");
  o.stats["core_size"] = static_cast<double>(core_size);
  o.stats["verifications"] = static_cast<double>(verified);
}

void Scenario::check_pe(RunOutcome& o) const {
  const bool finished = !o.metrics.budget_exhausted;
  const auto h = honest_parties();
  const auto q = cfg_.n - cfg_.f;

  std::map<PartyId, Bytes> evals;
  for (PartyId i : h) {
    const auto& pe = *node(i).pe();
    for (const auto& [k, v] : pe.evaluations()) {
      auto [it, fresh] = evals.emplace(k, v);
      if (!fresh && it->second != v) o.violations.push_back("eval-consistency: index " + std::to_string(k));
    }
    if (pe.eval_fanouts() > cfg_.n) o.violations.push_back("fan-out: " + party(i));
  }

  std::vector<const PeOutput*> outs;
  std::optional<IndexSet> core;
  auto meet = [&](const IndexSet& s) { core = core ? core->intersected(s) : s; };
  for (PartyId i : h) {
    const auto& out = node(i).pe()->output();
    if (!out) {
      if (finished) o.violations.push_back("termination: " + party(i));
      continue;
    }
    if (out->proof.size() < q) o.violations.push_back("proof-size: " + party(i));
    if (!node(i).validity()(out->proposal)) o.violations.push_back("external-validity: " + party(i));
    outs.push_back(&*out);
    meet(out->proof);
  }
  if (finished)
    for (const auto* out : outs)
      for (PartyId i : h)
        if (!node(i).pe()->verify(out->proposal, out->proof))
          o.violations.push_back("verification-agreement: " + party(i) + " rejects an honest output");

  // Every index subset some honest party accepts as a proof.
  struct Accepted {
    PartyId at;
    IndexSet set;
    PartyId winner;
  };
  std::vector<Accepted> accepted;
  for (PartyId i : h) {
    const auto& pe = *node(i).pe();
    const auto& ids = pe.gather().s_set().ids();
    if (ids.size() > 12) continue;
    for (std::uint32_t mask = 1; mask < (1u << ids.size()); ++mask) {
      std::vector<PartyId> pick;
      for (std::size_t b = 0; b < ids.size(); ++b)
        if (mask & (1u << b)) pick.push_back(ids[b]);
      if (pick.size() < q) continue;
      IndexSet set(std::move(pick));
      if (!pe.gather().covers(set)) continue;
      auto w = pe.elect(set);
      if (!w) continue;
      meet(set);
      accepted.push_back({i, std::move(set), *w});
    }
  }

  const bool all_out = outs.size() == h.size();
  bool unanimous = all_out && !outs.empty();
  for (const auto* out : outs) unanimous = unanimous && out->proposal == outs.front()->proposal;
  bool honest_input = false;
  if (unanimous)
    for (PartyId i : h) honest_input = honest_input || node(i).input() == outs.front()->proposal;
  o.events["alpha"] = unanimous && honest_input;

  std::optional<PartyId> best;
  for (const auto& [k, v] : evals)
    if (!best || v > evals.at(*best)) best = k;
  const bool strict = best && honest(*best) && core && core->contains(*best);
  o.events["strict"] = strict;
  if (strict) {
    const Bytes& x_star = node(*best).input();
    for (const auto& a : accepted) {
      const auto& prop = node(a.at).pe()->start_eval().at(a.winner).prop;
      if (prop != x_star)
        o.violations.push_back("binding-verification: " + party(a.at) + " accepts another value");
    }
  }
  o.stats["core_size"] = core ? static_cast<double>(core->size()) : 0.0;
  o.stats["accepted_sets"] = static_cast<double>(accepted.size());
}

void Scenario::check_nwh(RunOutcome& o) const {
  const bool finished = !o.metrics.budget_exhausted;
  const auto h = honest_parties();
  const auto q = cfg_.n - cfg_.f;
  const Nwh& ref = *node(h.front()).agreement();

  auto valid = [&](const Bytes& v) {
    return cfg_.protocol == Protocol::Adkg ? transcript_valid(*crypto_, v) : node(h.front()).validity()(v);
  };
  auto honest_input = [&](const Bytes& v) {
    for (PartyId i : h) {
      if (cfg_.protocol == Protocol::Adkg) {
        const auto& p = node(i).adkg()->proposal();
        if (p && encode_transcript(*p) == v) return true;
      } else if (node(i).input() == v) {
        return true;
      }
    }
    return false;
  };

  std::set<Bytes> decisions;
  std::optional<std::uint32_t> max_view;
  bool all = true;
  for (PartyId i : h) {
    const auto& a = *node(i).agreement();
    if (!ref.key_correct(a.key().view, a.key().value, a.key().proof))
      o.violations.push_back("key-lock: " + party(i) + " holds an incorrect key");
    if (!ref.lock_correct(a.lock().view, a.lock().value, a.lock().proof))
      o.violations.push_back("key-lock: " + party(i) + " holds an incorrect lock");
    if (!a.decision()) {
      all = false;
      if (finished) o.violations.push_back("termination: " + party(i));
      continue;
    }
    decisions.insert(*a.decision());
    if (!valid(*a.decision())) o.violations.push_back("validity: " + party(i) + " decided an invalid value");
    max_view = std::max(max_view.value_or(0), *a.decided_view());
  }
  if (decisions.size() > 1) o.violations.push_back("agreement: distinct decisions");
  o.metrics.decided_view = max_view;
  const bool honest_value = decisions.size() == 1 && honest_input(*decisions.begin());
  o.events["decided_all"] = all;
  o.events["honest_value"] = honest_value;
  o.events["quality"] = all && honest_value && max_view == 1u;
  if (max_view) o.stats["decided_view"] = *max_view;

  // Offline log checks: one value per view and per certificate kind, and no
  // honest echo against an existing commit certificate.
  std::set<const Payload*> once;
  std::map<std::uint32_t, std::set<Bytes>> key_vals, lock_vals, commit_vals;
  std::map<std::pair<std::uint32_t, Bytes>, std::set<PartyId>> lock_senders;
  std::set<std::pair<std::uint32_t, Bytes>> certs;
  struct EchoSeen {
    std::uint32_t view;
    Bytes value;
    PartyId from;
  };
  std::vector<EchoSeen> echoes;
  std::size_t equivocations = 0, blames = 0;
  for (const auto& env : net_->log()) {
    if (env.tag.channel != Channel::Nwh || !once.insert(env.payload.get()).second) continue;
    const auto view = env.tag.view;
    const auto& p = *env.payload;
    if (auto* e = std::get_if<EchoMessage>(&p)) {
      if (honest(env.from)) echoes.push_back({view, e->tuple.value, env.from});
    } else if (std::holds_alternative<EquivocateMessage>(p)) {
      equivocations += honest(env.from);
    } else if (std::holds_alternative<BlameMessage>(p)) {
      blames += honest(env.from);
    } else if (auto* k = std::get_if<KeyMessage>(&p)) {
      if (honest(env.from)) key_vals[view].insert(k->value);
    } else if (auto* l = std::get_if<LockMessage>(&p)) {
      if (honest(env.from)) lock_vals[view].insert(l->value);
      const auto msg = nwh_signing_message("lock", l->value, view);
      if (crypto_->verify_signature(crypto_->public_key(env.from), msg, l->sig) &&
          ref.lock_correct(view, l->value, l->proof))
        lock_senders[{view, l->value}].insert(env.from);
    } else if (auto* c = std::get_if<CommitMessage>(&p)) {
      if (ref.commit_correct(view, c->value, c->proof)) {
        commit_vals[view].insert(c->value);
        certs.emplace(view, c->value);
      }
    }
  }
  for (const auto& [key, senders] : lock_senders)
    if (senders.size() >= q) certs.insert(key);
  for (const auto* m : {&key_vals, &lock_vals, &commit_vals})
    for (const auto& [view, vals] : *m)
      if (vals.size() > 1) o.violations.push_back("single-value: view " + std::to_string(view));
  for (const auto& [cview, cval] : certs)
    for (const auto& e : echoes)
      if (e.view >= cview && e.value != cval)
        o.violations.push_back("safety: " + party(e.from) + " echoed another value in view " +
                               std::to_string(e.view));
  o.stats["commit_certificates"] = static_cast<double>(certs.size());
  o.stats["honest_equivocates"] = static_cast<double>(equivocations);
  o.stats["honest_blames"] = static_cast<double>(blames);
}

void Scenario::check_adkg(RunOutcome& o) const {
  const bool finished = !o.metrics.budget_exhausted;
  std::set<Bytes> outputs;
  for (PartyId i : honest_parties()) {
    const auto& out = node(i).adkg()->output();
    if (!out) {
      if (finished) o.violations.push_back("termination: " + party(i) + " has no transcript");
      continue;
    }
    outputs.insert(encode_transcript(*out));
    if (!crypto_->dkg_verify(*out)) o.violations.push_back("transcript: " + party(i) + " output fails verification");
    std::set<PartyId> contributors;
    for (const auto& s : out->shares) contributors.insert(s.contributor);
    if (contributors.size() < 2 * cfg_.f + 1) o.violations.push_back("transcript: too few contributors");
    o.stats["contributors"] = static_cast<double>(contributors.size());
  }
  if (outputs.size() > 1) o.violations.push_back("agreement: distinct transcripts");
  check_nwh(o);
}

RunOutcome run_scenario(const ScenarioConfig& cfg, std::uint64_t seed, bool trace) {
  Scenario::Options opts;
  opts.trace = trace;
  Scenario s(cfg, seed, opts);
  s.run();
  return s.evaluate();
}

// --- aggregation ----------------------------------------------------------------

std::string Summary::to_json() const {
  ojson j;
  auto opt = [](const auto& v) { return v ? ojson(*v) : ojson(nullptr); };
  j["protocol"] = protocol;
  j["runs"] = runs;
  j["violations"] = violations;
  j["runs_with_violations"] = runs_with_violations;
  j["agreement_violations"] = agreement_violations;
  j["budget_exhausted"] = budget_exhausted;
  j["mean_words"] = mean_words;
  j["mean_causal_depth"] = mean_depth;
  j["alpha_frequency"] = opt(alpha_frequency);
  j["strict_frequency"] = opt(strict_frequency);
  j["quality_frequency"] = opt(quality_frequency);
  j["mean_decided_view"] = opt(mean_decided_view);
  j["p50_decided_view"] = opt(p50_decided_view);
  j["p90_decided_view"] = opt(p90_decided_view);
  j["max_decided_view"] = opt(max_decided_view);
  j["violation_counts"] = violation_counts;
  return j.dump(2);
}

Summary summarize(std::string_view protocol, const std::vector<RunOutcome>& runs) {
  Summary s;
  s.protocol = std::string(protocol);
  s.runs = runs.size();
  if (runs.empty()) return s;
  std::size_t alpha = 0, strict = 0, quality = 0;
  bool has_alpha = false, has_quality = false;
  std::vector<std::uint32_t> views;
  for (const auto& r : runs) {
    s.violations += r.violations.size();
    if (!r.ok()) ++s.runs_with_violations;
    for (const auto& v : r.violations) {
      const auto name = v.substr(0, v.find(':'));
      ++s.violation_counts[name];
      if (name == "agreement") ++s.agreement_violations;
    }
    if (r.metrics.budget_exhausted) ++s.budget_exhausted;
    s.mean_words += static_cast<double>(r.metrics.words_total);
    s.mean_depth += r.metrics.causal_round_depth;
    if (auto it = r.events.find("alpha"); it != r.events.end()) {
      has_alpha = true;
      alpha += it->second;
      strict += r.events.at("strict");
    }
    if (auto it = r.events.find("quality"); it != r.events.end()) {
      has_quality = true;
      quality += it->second;
    }
    if (r.metrics.decided_view) views.push_back(*r.metrics.decided_view);
  }
  const auto n = static_cast<double>(runs.size());
  s.mean_words /= n;
  s.mean_depth /= n;
  if (has_alpha) {
    s.alpha_frequency = static_cast<double>(alpha) / n;
    s.strict_frequency = static_cast<double>(strict) / n;
  }
  if (has_quality) s.quality_frequency = static_cast<double>(quality) / n;
  if (!views.empty()) {
    std::sort(views.begin(), views.end());
    double sum = 0;
    for (auto v : views) sum += v;
    s.mean_decided_view = sum / static_cast<double>(views.size());
    auto rank = [&](double p) {
      return static_cast<double>(views[static_cast<std::size_t>(std::ceil(p * static_cast<double>(views.size()))) - 1]);
    };
    s.p50_decided_view = rank(0.5);
    s.p90_decided_view = rank(0.9);
    s.max_decided_view = views.back();
  }
  return s;
}

double loglog_slope(const std::vector<ScalingPoint>& points) {
  std::set<std::size_t> distinct;
  for (const auto& p : points) distinct.insert(p.n);
  if (distinct.size() < 3) throw Error(ErrorCode::InsufficientPoints, "slope fit needs three distinct n");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    if (p.n == 0 || !(p.mean_words > 0)) throw Error(ErrorCode::InvalidInput, "non-positive scaling point");
    const double x = std::log(static_cast<double>(p.n));
    const double y = std::log(p.mean_words);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(points.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::string ScalingResult::to_json() const {
  ojson j;
  j["protocol"] = protocol;
  ojson pts = ojson::array();
  for (const auto& p : points) pts.push_back({{"n", p.n}, {"mean_words", p.mean_words}});
  j["points"] = pts;
  j["slope"] = slope;
  j["violations"] = violations;
  return j.dump(2);
}

ScalingResult scaling(const ScenarioConfig& base, const std::vector<std::size_t>& ns) {
  std::set<std::size_t> distinct(ns.begin(), ns.end());
  if (distinct.size() < 3) throw Error(ErrorCode::InsufficientPoints, "scaling needs three distinct n");
  ScalingResult r;
  r.protocol = std::string(to_string(base.protocol));
  for (auto n : ns) {
    if (n == 0 || (n - 1) % 3 != 0) throw Error(ErrorCode::InvalidScenario, "scaling needs n = 3f + 1");
    auto cfg = base;
    cfg.n = n;
    cfg.f = (n - 1) / 3;
    double total = 0;
    std::size_t count = 0;
    for (auto seed = cfg.seed_begin; seed <= cfg.seed_end; ++seed) {
      auto o = run_scenario(cfg, seed);
      r.violations += o.violations.size();
      total += static_cast<double>(o.metrics.words_total);
      ++count;
    }
    r.points.push_back({n, total / static_cast<double>(count)});
  }
  r.slope = loglog_slope(r.points);
  return r;
}

}  // namespace adkg::sim
