#include "adkg/adversary.hpp"

#include <algorithm>
#include <bit>

namespace adkg::sim {

Node::Node(const ScenarioConfig& cfg, const CryptoProvider& crypto, PartyKey key, std::uint64_t seed)
    : ctx_{key.id, cfg.n, cfg.f, &crypto, key, 0},
      protocol_(cfg.protocol),
      validity_(Validity::parse(cfg.validate)),
      input_(cfg.input_of(key.id, seed)),
      rb_dealer_(cfg.rb_dealer) {
  auto check = [v = validity_](const Bytes& b) { return v(b); };
  switch (protocol_) {
    case Protocol::Rb:
      rb_ = std::make_unique<ReliableBroadcast>(ctx_, ctx_.tag(Channel::Rb, 0, rb_dealer_));
      break;
    case Protocol::Vrb:
      rb_ = std::make_unique<ReliableBroadcast>(
          ctx_, ctx_.tag(Channel::Rb, 0, rb_dealer_),
          [v = validity_](std::span<const field::FieldElem> w) { return v.accepts_words(w); });
      break;
    case Protocol::Gather:
      gather_ = std::make_unique<Gather>(ctx_, 0, check);
      break;
    case Protocol::Pe:
      pe_ = std::make_unique<ProposalElection>(ctx_, 1, check);
      break;
    case Protocol::Nwh:
      nwh_ = std::make_unique<Nwh>(ctx_, check);
      break;
    case Protocol::Adkg:
      adkg_ = std::make_unique<Adkg>(ctx_);
      break;
  }
  if (rb_ && ctx_.self == rb_dealer_) rb_msg_ = cfg.rb_message(seed);
}

const Nwh* Node::agreement() const {
  if (nwh_) return nwh_.get();
  if (adkg_) return &adkg_->agreement();
  return nullptr;
}

void Node::start(Outbox& out) {
  switch (protocol_) {
    case Protocol::Rb:
    case Protocol::Vrb:
      if (ctx_.self == rb_dealer_) rb_->start_dealer(rb_msg_, out);
      break;
    case Protocol::Gather: gather_->start(input_, out); break;
    case Protocol::Pe: pe_->start(input_, out); break;
    case Protocol::Nwh: nwh_->start(input_, out); break;
    case Protocol::Adkg: adkg_->start(out); break;
  }
}

void Node::receive(const Envelope& env, Outbox& out) {
  const auto& p = *env.payload;
  switch (protocol_) {
    case Protocol::Rb:
    case Protocol::Vrb:
      if (env.tag == rb_->tag())
        if (auto* m = std::get_if<RbMessage>(&p)) rb_->handle(env.from, *m, out);
      break;
    case Protocol::Gather:
      if (auto* m = std::get_if<RbMessage>(&p)) gather_->handle(env.from, env.tag, *m, out);
      break;
    case Protocol::Pe: pe_->handle(env.from, env.tag, p, out); break;
    case Protocol::Nwh: nwh_->handle(env.from, env.tag, p, out); break;
    case Protocol::Adkg: adkg_->handle(env.from, env.tag, p, out); break;
  }
}

bool Node::terminated() const {
  switch (protocol_) {
    case Protocol::Rb:
    case Protocol::Vrb: return rb_->delivered().has_value();
    case Protocol::Gather: return gather_->output().has_value();
    case Protocol::Pe: return pe_->output().has_value();
    case Protocol::Nwh: return nwh_->decision().has_value();
    case Protocol::Adkg: return adkg_->output().has_value();
  }
  return false;
}

std::size_t Node::dropped() const { return rb_ ? rb_->dropped() : 0; }

// --- behaviours -------------------------------------------------------------

namespace {

bool is_broadcast(Channel c) {
  return c == Channel::Rb || c == Channel::GatherValue || c == Channel::GatherS || c == Channel::GatherT ||
         c == Channel::PeIndices;
}

bool second_half(PartyId j, std::size_t n) { return j >= n / 2; }

class Silent final : public Behavior {
 public:
  bool silent() const override { return true; }
  void transform(const Node&, std::vector<Outgoing>& msgs) override { msgs.clear(); }
};

class PeWithholder final : public Behavior {
 public:
  void transform(const Node&, std::vector<Outgoing>& msgs) override {
    std::erase_if(msgs, [](const Outgoing& m) { return std::holds_alternative<EvalShareMessage>(*m.payload); });
  }
};

/// Splits every broadcast it deals between two commitments: a second
/// message (even seeds) or a vector that is not a codeword (odd seeds).
class BadDealer final : public Behavior {
 public:
  BadDealer(std::size_t n, std::size_t f, bool garbage, std::uint64_t seed)
      : n_(n), f_(f), garbage_(garbage), rng_(seed) {}

  void transform(const Node& self, std::vector<Outgoing>& msgs) override {
    const PartyId me = self.ctx().self;
    for (auto& m : msgs) {
      if (!is_broadcast(m.tag.channel) || m.tag.dealer != me) continue;
      const auto* rb = std::get_if<RbMessage>(m.payload.get());
      if (!rb) continue;
      if (rb->kind == RbKind::Value) {
        auto& s = split(m.tag, *rb);
        if (m.to == me) s.own = *rb;
        if (second_half(m.to, n_)) m.payload = std::make_shared<const Payload>(s.alt[m.to]);
      } else if (rb->kind == RbKind::Echo) {
        auto it = splits_.find(m.tag);
        if (it == splits_.end()) continue;
        const RbMessage* basis = second_half(m.to, n_) ? &it->second.alt[me]
                                 : it->second.own     ? &*it->second.own
                                                      : nullptr;
        if (!basis) continue;
        m.payload = std::make_shared<const Payload>(
            RbMessage{RbKind::Echo, basis->com, basis->msg_len, basis->chunk, basis->proof});
      }
    }
  }

 private:
  struct Split {
    std::vector<RbMessage> alt;
    std::optional<RbMessage> own;
  };

  field::FieldElem draw() { return field::FieldElem::reduce(rng_()); }

  Split& split(const InstanceTag& tag, const RbMessage& orig) {
    auto [it, fresh] = splits_.try_emplace(tag);
    if (!fresh) return it->second;
    if (garbage_) {
      std::vector<Words> chunks(n_);
      for (auto& c : chunks)
        for (std::size_t k = 0; k < orig.chunk.size(); ++k) c.push_back(draw());
      auto leaves = chunk_leaves(chunks);
      const auto com = vc::commit(leaves);
      auto proofs = vc::open_prove_all(leaves);
      for (std::size_t j = 0; j < n_; ++j)
        it->second.alt.push_back({RbKind::Value, com, orig.msg_len, chunks[j], proofs[j]});
    } else {
      Words other(orig.msg_len);
      for (auto& w : other) w = draw();
      it->second.alt = rb_dealer_messages(other, n_, f_);
    }
    return it->second;
  }

  std::size_t n_;
  std::size_t f_;
  bool garbage_;
  Rng rng_;
  std::map<InstanceTag, Split> splits_;
};

/// Deals an externally invalid value in every validated broadcast it leads.
class InvalidInput final : public Behavior {
 public:
  InvalidInput(const ScenarioConfig& cfg, PartyId self) : n_(cfg.n), f_(cfg.f) {
    const auto v = Validity::parse(cfg.validate);
    bad_ = field::encode_bytes(to_bytes("bad:" + std::to_string(self)));
    if (v.kind == Validity::Kind::MaxWords) bad_.assign(v.limit + 1, field::FieldElem::reduce(1));
  }

  void transform(const Node& self, std::vector<Outgoing>& msgs) override {
    for (auto& m : msgs) {
      if (m.tag.dealer != self.ctx().self) continue;
      if (m.tag.channel != Channel::GatherValue && m.tag.channel != Channel::Rb) continue;
      const auto* rb = std::get_if<RbMessage>(m.payload.get());
      if (!rb || rb->kind != RbKind::Value) continue;
      auto& dealt = cache_[m.tag];
      if (dealt.empty()) dealt = rb_dealer_messages(bad_, n_, f_);
      m.payload = std::make_shared<const Payload>(dealt[m.to]);
    }
  }

 private:
  std::size_t n_;
  std::size_t f_;
  Words bad_;
  std::map<InstanceTag, std::vector<RbMessage>> cache_;
};

/// Replaces its echoes with blames carrying its current lock.
class StaleBlamer final : public Behavior {
 public:
  void transform(const Node& self, std::vector<Outgoing>& msgs) override {
    const auto* nwh = self.agreement();
    if (!nwh) return;
    for (auto& m : msgs) {
      const auto* e = std::get_if<EchoMessage>(m.payload.get());
      if (!e) continue;
      m.payload = std::make_shared<const Payload>(BlameMessage{e->tuple, e->election, nwh->lock()});
    }
  }
};

/// Echoes its real election output to the first half of the parties and,
/// when it can find one, a different verifiable output to the second half.
class NwhEquivocator final : public Behavior {
 public:
  void transform(const Node& self, std::vector<Outgoing>& msgs) override {
    const auto* nwh = self.agreement();
    if (!nwh) return;
    const auto n = self.ctx().n;
    for (auto& m : msgs) {
      const auto* e = std::get_if<EchoMessage>(m.payload.get());
      if (!e || !second_half(m.to, n)) continue;
      auto it = alts_.find(m.tag.view);
      if (it == alts_.end()) it = alts_.emplace(m.tag.view, find_alternative(self, *nwh, m.tag.view, *e)).first;
      if (it->second) m.payload = it->second;
    }
  }

 private:
  static std::shared_ptr<const Payload> find_alternative(const Node& self, const Nwh& nwh, std::uint32_t view,
                                                         const EchoMessage& real) {
    const auto* pe = nwh.election(view);
    if (!pe) return nullptr;
    const auto ids = pe->gather().s_set().ids();
    if (ids.size() > 16) return nullptr;
    const auto real_bytes = encode_key_tuple(real.tuple);
    const auto q = self.ctx().quorum();
    for (std::uint32_t mask = 1; mask < (1u << ids.size()); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) < q) continue;
      std::vector<PartyId> pick;
      for (std::size_t b = 0; b < ids.size(); ++b)
        if (mask & (1u << b)) pick.push_back(ids[b]);
      IndexSet set(std::move(pick));
      if (!pe->gather().covers(set)) continue;
      auto winner = pe->elect(set);
      if (!winner) continue;
      const auto& prop = pe->start_eval().at(*winner).prop;
      if (prop == real_bytes) continue;
      KeyTuple alt;
      try {
        alt = decode_key_tuple(prop);
      } catch (const Error&) {
        continue;
      }
      const auto sig = self.ctx().crypto->sign(self.ctx().key, nwh_signing_message("echo", alt.value, view));
      return std::make_shared<const Payload>(EchoMessage{std::move(alt), std::move(set), sig});
    }
    return nullptr;
  }

  std::map<std::uint32_t, std::shared_ptr<const Payload>> alts_;
};

}  // namespace

std::unique_ptr<Behavior> make_behavior(std::string_view name, const ScenarioConfig& cfg, PartyId self,
                                        std::uint64_t seed) {
  if (name == "silent") return std::make_unique<Silent>();
  if (name == "bad_dealer") return std::make_unique<BadDealer>(cfg.n, cfg.f, seed % 2 == 1, seed ^ (0xbadULL << 20 | self));
  if (name == "pe_withholder") return std::make_unique<PeWithholder>();
  if (name == "nwh_equivocator") return std::make_unique<NwhEquivocator>();
  if (name == "stale_blamer") return std::make_unique<StaleBlamer>();
  if (name == "invalid_input") return std::make_unique<InvalidInput>(cfg, self);
  throw Error(ErrorCode::Config, "unknown behaviour '" + std::string(name) + "'");
}

void CorruptNode::finish(Outbox& out) {
  behavior_->transform(*core_, out.messages());
  out.notes().clear();
}

void CorruptNode::start(Outbox& out) {
  if (behavior_->silent()) return;
  core_->start(out);
  finish(out);
}

void CorruptNode::receive(const Envelope& env, Outbox& out) {
  if (behavior_->silent()) return;
  core_->receive(env, out);
  finish(out);
}

}  // namespace adkg::sim
