#include "adkg/nwh.hpp"

#include <algorithm>

namespace adkg {

Nwh::Nwh(const PartyContext& ctx, Validator validate)
    : ctx_(&ctx), validate_(std::move(validate)), vs_(ctx.n), commit_seen_(ctx.n, false) {}

bool Nwh::threshold_signed(std::string_view kind, std::uint64_t view, const Bytes& v,
                           const SigSet& proof) const {
  std::vector<PartyId> signers;
  signers.reserve(proof.size());
  const auto msg = nwh_signing_message(kind, v, view);
  for (const auto& e : proof) {
    if (e.signer >= ctx_->n) return false;
    if (!ctx_->crypto->verify_signature(ctx_->crypto->public_key(e.signer), msg, e.sig)) return false;
    signers.push_back(e.signer);
  }
  std::sort(signers.begin(), signers.end());
  signers.erase(std::unique(signers.begin(), signers.end()), signers.end());
  return signers.size() >= ctx_->quorum();
}

bool Nwh::key_correct(std::uint64_t view, const Bytes& v, const SigSet& proof) const {
  if (!validate_(v)) return false;
  if (view == 0) return true;
  return threshold_signed("echo", view, v, proof);
}

bool Nwh::lock_correct(std::uint64_t view, const Bytes& v, const SigSet& proof) const {
  if (view == 0) return true;
  return threshold_signed("key", view, v, proof);
}

bool Nwh::commit_correct(std::uint64_t view, const Bytes& v, const SigSet& proof) const {
  return threshold_signed("lock", view, v, proof);
}

Signature Nwh::sign(std::string_view kind, const Bytes& v, std::uint64_t view) const {
  return ctx_->crypto->sign(ctx_->key, nwh_signing_message(kind, v, view));
}

const ProposalElection* Nwh::election(std::uint32_t view) const {
  auto it = elections_.find(view);
  return it == elections_.end() ? nullptr : it->second.get();
}

ProposalElection& Nwh::election_for(std::uint32_t view) {
  auto& slot = elections_[view];
  if (!slot) {
    slot = std::make_unique<ProposalElection>(*ctx_, view, [this](const Bytes& b) {
      try {
        auto t = decode_key_tuple(b);
        return key_correct(t.view, t.value, t.proof);
      } catch (const Error&) {
        return false;
      }
    });
  }
  return *slot;
}

void Nwh::start(const Bytes& x, Outbox& out) {
  if (!validate_(x)) throw Error(ErrorCode::InvalidInput, "agreement input fails validation");
  if (started_) return;
  started_ = true;
  input_ = x;
  // The genesis key carries the own input so that it passes key_correct.
  key_ = KeyTuple{0, x, {}};
  lock_ = KeyTuple{};
  enter_view(1, out);
  auto early = std::move(before_start_);
  before_start_.clear();
  for (const auto& b : early) {
    if (decision_) break;
    dispatch(b.from, b.tag, *b.payload, out);
  }
  settle(out);
}

void Nwh::handle(PartyId from, const InstanceTag& tag, const Payload& p, Outbox& out) {
  if (decision_ || from >= ctx_->n) return;
  if (tag.channel == Channel::Nwh) {
    if (!started_) {
      before_start_.push_back({from, tag, std::make_shared<const Payload>(p)});
      return;
    }
    dispatch(from, tag, p, out);
  } else {
    if (tag.view == 0) return;
    election_for(tag.view).handle(from, tag, p, out);
  }
  if (started_) settle(out);
}

void Nwh::dispatch(PartyId from, const InstanceTag& tag, const Payload& p, Outbox& out) {
  if (decision_) return;
  if (auto* c = std::get_if<CommitMessage>(&p)) {
    if (!commit_seen_[from]) {
      commit_seen_[from] = true;
      on_commit(tag.view, *c, out);
    }
    return;
  }
  if (tag.view < view_) return;
  if (tag.view > view_) {
    delayed_.emplace(tag.view, Buffered{from, tag, std::make_shared<const Payload>(p)});
    return;
  }
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SuggestMessage>) on_suggest(from, m, out);
        else if constexpr (std::is_same_v<T, EchoMessage>) on_echo(from, m);
        else if constexpr (std::is_same_v<T, KeyMessage>) on_key(from, m, out);
        else if constexpr (std::is_same_v<T, LockMessage>) on_lock(from, m, out);
        else if constexpr (std::is_same_v<T, BlameMessage>) on_blame(from, m);
        else if constexpr (std::is_same_v<T, EquivocateMessage>) on_equivocate(from, m);
      },
      p);
}

void Nwh::enter_view(std::uint32_t view, Outbox& out) {
  view_ = view;
  vs_ = ViewState(ctx_->n);
  out.note(NoteKind::ViewChange, ctx_->tag(Channel::Nwh, view_), "view " + std::to_string(view_));
  out.broadcast(ctx_->tag(Channel::Nwh, view_), SuggestMessage{key_});
}

void Nwh::on_suggest(PartyId from, const SuggestMessage& m, Outbox& out) {
  if (vs_.suggest_seen[from]) return;
  vs_.suggest_seen[from] = true;
  if (m.key.view >= view_ || !key_correct(m.key.view, m.key.value, m.key.proof)) return;
  vs_.suggestions.emplace_back(from, m.key);
  if (vs_.suggestions.size() != ctx_->quorum()) return;

  // Most recent key; ties go to the lowest signer index.
  const auto* best = &vs_.suggestions.front();
  for (const auto& s : vs_.suggestions) {
    if (s.second.view > best->second.view ||
        (s.second.view == best->second.view && s.first < best->first))
      best = &s;
  }
  KeyTuple chosen = best->second;
  if (chosen.view == 0) chosen = KeyTuple{0, input_, {}};
  election_for(view_).start(encode_key_tuple(chosen), out);
}

void Nwh::on_echo(PartyId from, const EchoMessage& m) {
  if (vs_.echo_seen[from]) return;
  vs_.echo_seen[from] = true;
  const auto msg = nwh_signing_message("echo", m.tuple.value, view_);
  if (!ctx_->crypto->verify_signature(ctx_->crypto->public_key(from), msg, m.sig)) return;
  vs_.pending_echoes.push_back({from, m});
  vs_.polled_version.reset();
}

void Nwh::accept_echo(const PendingEcho& e, Outbox& out) {
  for (const auto& prior : vs_.echoes) {
    if (prior.msg.tuple != e.msg.tuple) {
      out.broadcast(ctx_->tag(Channel::Nwh, view_),
                    EquivocateMessage{e.msg.tuple, e.msg.election, prior.msg.tuple, prior.msg.election});
      enter_view(view_ + 1, out);
      return;
    }
  }
  vs_.echoes.push_back(e);
  if (vs_.echoes.size() != ctx_->quorum()) return;
  SigSet sigs;
  for (const auto& x : vs_.echoes) sigs.push_back({x.from, x.msg.sig});
  std::sort(sigs.begin(), sigs.end(), [](const SignedBy& a, const SignedBy& b) { return a.signer < b.signer; });
  key_ = KeyTuple{view_, e.msg.tuple.value, sigs};
  out.broadcast(ctx_->tag(Channel::Nwh, view_),
                KeyMessage{key_.value, std::move(sigs), sign("key", key_.value, view_)});
}

void Nwh::on_key(PartyId from, const KeyMessage& m, Outbox& out) {
  if (vs_.key_seen[from]) return;
  vs_.key_seen[from] = true;
  const auto msg = nwh_signing_message("key", m.value, view_);
  if (!ctx_->crypto->verify_signature(ctx_->crypto->public_key(from), msg, m.sig)) return;
  if (!key_correct(view_, m.value, m.proof)) return;
  vs_.keys.push_back({from, m.sig});
  if (vs_.keys.size() != ctx_->quorum()) return;
  SigSet proof = vs_.keys;
  std::sort(proof.begin(), proof.end(), [](const SignedBy& a, const SignedBy& b) { return a.signer < b.signer; });
  lock_ = KeyTuple{view_, m.value, proof};
  out.broadcast(ctx_->tag(Channel::Nwh, view_), LockMessage{m.value, std::move(proof), sign("lock", m.value, view_)});
}

void Nwh::on_lock(PartyId from, const LockMessage& m, Outbox& out) {
  if (vs_.lock_seen[from]) return;
  vs_.lock_seen[from] = true;
  const auto msg = nwh_signing_message("lock", m.value, view_);
  if (!ctx_->crypto->verify_signature(ctx_->crypto->public_key(from), msg, m.sig)) return;
  if (!lock_correct(view_, m.value, m.proof)) return;
  vs_.locks.push_back({from, m.sig});
  if (vs_.locks.size() != ctx_->quorum()) return;
  SigSet proof = vs_.locks;
  std::sort(proof.begin(), proof.end(), [](const SignedBy& a, const SignedBy& b) { return a.signer < b.signer; });
  out.broadcast(ctx_->tag(Channel::Nwh, view_), CommitMessage{m.value, std::move(proof)});
  decide(m.value, view_, out);
}

void Nwh::on_commit(std::uint32_t view, const CommitMessage& m, Outbox& out) {
  if (!commit_correct(view, m.value, m.proof)) return;
  out.broadcast(ctx_->tag(Channel::Nwh, view), m);
  decide(m.value, view, out);
}

void Nwh::on_blame(PartyId from, const BlameMessage& m) {
  if (vs_.blame_seen[from]) return;
  vs_.blame_seen[from] = true;
  if (!lock_correct(m.lock.view, m.lock.value, m.lock.proof)) return;
  if (!(view_ <= m.tuple.view || m.tuple.view < m.lock.view)) return;
  vs_.pending_blames.push_back(m);
  vs_.polled_version.reset();
}

void Nwh::on_equivocate(PartyId from, const EquivocateMessage& m) {
  if (vs_.equiv_seen[from]) return;
  vs_.equiv_seen[from] = true;
  if (m.first == m.second) return;
  vs_.pending_equivs.push_back(m);
  vs_.polled_version.reset();
}

void Nwh::on_pe_output(const PeOutput& o, Outbox& out) {
  KeyTuple t;
  try {
    t = decode_key_tuple(o.proposal);
  } catch (const Error&) {
    return;  // unreachable: outputs pass key_correct on a decoded tuple
  }
  if (view_ > t.view && t.view >= lock_.view) {
    out.broadcast(ctx_->tag(Channel::Nwh, view_), EchoMessage{t, o.proof, sign("echo", t.value, view_)});
  } else {
    out.broadcast(ctx_->tag(Channel::Nwh, view_), BlameMessage{std::move(t), o.proof, lock_});
    enter_view(view_ + 1, out);
  }
}

bool Nwh::poll(Outbox& out) {
  auto it = elections_.find(view_);
  if (it == elections_.end()) return false;
  const auto& pe = *it->second;
  const auto start_view = view_;

  if (pe.output() && !vs_.pe_output_handled) {
    vs_.pe_output_handled = true;
    on_pe_output(*pe.output(), out);
    if (view_ != start_view) return true;
  }
  if (vs_.polled_version == pe.version()) return false;
  vs_.polled_version = pe.version();

  for (std::size_t i = 0; i < vs_.pending_echoes.size();) {
    if (!pe.verify(encode_key_tuple(vs_.pending_echoes[i].msg.tuple), vs_.pending_echoes[i].msg.election)) {
      ++i;
      continue;
    }
    auto e = std::move(vs_.pending_echoes[i]);
    vs_.pending_echoes.erase(vs_.pending_echoes.begin() + static_cast<std::ptrdiff_t>(i));
    accept_echo(e, out);
    if (view_ != start_view || decision_) return true;
  }
  for (const auto& b : vs_.pending_blames) {
    if (pe.verify(encode_key_tuple(b.tuple), b.election)) {
      out.broadcast(ctx_->tag(Channel::Nwh, view_), b);
      enter_view(view_ + 1, out);
      return true;
    }
  }
  for (const auto& q : vs_.pending_equivs) {
    if (pe.verify(encode_key_tuple(q.first), q.first_election) &&
        pe.verify(encode_key_tuple(q.second), q.second_election)) {
      out.broadcast(ctx_->tag(Channel::Nwh, view_), q);
      enter_view(view_ + 1, out);
      return true;
    }
  }
  return false;
}

void Nwh::settle(Outbox& out) {
  while (!decision_) {
    // Drop stale delayed messages, then release the current view's.
    while (!delayed_.empty() && delayed_.begin()->first < view_) delayed_.erase(delayed_.begin());
    if (!delayed_.empty() && delayed_.begin()->first == view_) {
      std::vector<Buffered> batch;
      auto range = delayed_.equal_range(view_);
      for (auto it = range.first; it != range.second; ++it) batch.push_back(std::move(it->second));
      delayed_.erase(range.first, range.second);
      for (const auto& b : batch) dispatch(b.from, b.tag, *b.payload, out);
      continue;
    }
    if (!poll(out)) break;
  }
}

void Nwh::decide(const Bytes& v, std::uint32_t view, Outbox& out) {
  if (decision_) return;
  decision_ = v;
  decided_view_ = view;
  delayed_.clear();
  out.note(NoteKind::Decide, ctx_->tag(Channel::Nwh, view), "view " + std::to_string(view));
}

}  // namespace adkg
