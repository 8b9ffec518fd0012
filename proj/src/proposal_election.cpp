#include "adkg/proposal_election.hpp"

namespace adkg {

Bytes encode_pe_tuple(const PeTuple& t) {
  Writer w;
  w.blob(t.prop);
  write_transcript(w, t.transcript);
  return std::move(w).bytes();
}

std::optional<PeTuple> decode_pe_tuple(ByteView bytes) {
  try {
    Reader r(bytes);
    PeTuple t;
    t.prop = r.blob();
    t.transcript = read_transcript(r);
    r.expect_done();
    return t;
  } catch (const Error&) {
    return std::nullopt;
  }
}

Bytes vrf_input(PartyId k) {
  return {static_cast<std::uint8_t>(k >> 8), static_cast<std::uint8_t>(k & 0xff)};
}

ProposalElection::ProposalElection(const PartyContext& ctx, std::uint32_t view, Validator validate)
    : ctx_(&ctx),
      view_(view),
      validate_(std::move(validate)),
      gather_(ctx, view, [this](const Bytes& b) { return check_validity(b); }),
      dkg_seen_(ctx.n, false) {}

bool ProposalElection::check_validity(const Bytes& tuple_bytes) const {
  auto t = decode_pe_tuple(tuple_bytes);
  return t && validate_(t->prop) && ctx_->crypto->dkg_verify(t->transcript);
}

void ProposalElection::start(const Bytes& prop, Outbox& out) {
  if (!validate_(prop)) throw Error(ErrorCode::InvalidInput, "proposal fails validation");
  if (started_) return;
  started_ = true;
  prop_ = prop;
  ++version_;
  for (PartyId j = 0; j < ctx_->n; ++j) {
    Writer nonce;
    nonce.text("pe-dkg").u32(ctx_->session).u32(view_).u32(j);
    out.send(j, ctx_->tag(Channel::PeDkg, view_),
             DkgShareMessage{ctx_->crypto->dkg_sh(ctx_->key, nonce.bytes())});
  }
  progress(out);
}

void ProposalElection::handle(PartyId from, const InstanceTag& tag, const Payload& p, Outbox& out) {
  if (from >= ctx_->n) return;
  switch (tag.channel) {
    case Channel::PeDkg:
      if (auto* m = std::get_if<DkgShareMessage>(&p)) on_dkg_share(from, *m);
      break;
    case Channel::PeEval:
      if (auto* m = std::get_if<EvalShareMessage>(&p)) on_eval_share(from, *m);
      break;
    case Channel::GatherValue:
    case Channel::GatherS:
    case Channel::GatherT:
      if (auto* m = std::get_if<RbMessage>(&p)) gather_.handle(from, tag, *m, out);
      break;
    case Channel::PeIndices: {
      auto* m = std::get_if<RbMessage>(&p);
      if (!m || tag.dealer >= ctx_->n) break;
      auto& slot = index_broadcasts_[tag.dealer];
      if (!slot) slot = std::make_unique<ReliableBroadcast>(*ctx_, tag);
      if (slot->handle(from, *m, out)) {
        // One index set per dealer: the broadcast delivers at most once.
        if (auto set = field::decode_indices(*slot->delivered(), ctx_->n)) {
          pending_indices_.emplace(tag.dealer, std::move(*set));
          ++version_;
        }
      }
      break;
    }
    default:
      return;
  }
  progress(out);
}

void ProposalElection::on_dkg_share(PartyId from, const DkgShareMessage& m) {
  if (dkg_seen_[from]) return;
  if (!ctx_->crypto->dkg_sh_verify(ctx_->crypto->public_key(from), m.share)) return;
  dkg_seen_[from] = true;
  dkg_shares_.push_back(m.share);
  ++version_;
}

void ProposalElection::on_eval_share(PartyId from, const EvalShareMessage& m) {
  if (m.index >= ctx_->n) return;
  if (!eval_seen_.emplace(from, m.index).second) return;
  if (start_eval_.count(m.index)) {
    accept_eval_share(from, m.index, m.share);
  } else {
    waiting_shares_[m.index].emplace_back(from, m.share);
  }
}

void ProposalElection::accept_eval_share(PartyId from, PartyId k, const EvalShare& share) {
  if (evals_.count(k)) return;
  const auto& tuple = start_eval_.at(k);
  const auto input = vrf_input(k);
  if (!ctx_->crypto->eval_sh_verify(tuple.transcript, ctx_->crypto->public_key(from), input, share))
    return;
  auto& shares = eval_shares_[k];
  shares.push_back(share);
  ++version_;
  if (shares.size() == ctx_->quorum())
    evals_.emplace(k, ctx_->crypto->eval(tuple.transcript, input, shares).value);
}

std::optional<PartyId> ProposalElection::elect(const IndexSet& indices) const {
  std::optional<PartyId> best;
  const Bytes* best_value = nullptr;
  for (PartyId k : indices) {
    auto it = evals_.find(k);
    if (it == evals_.end()) return std::nullopt;
    // Equal-width big-endian strings compare like unsigned integers.
    if (!best_value || it->second > *best_value) {
      best = k;
      best_value = &it->second;
    }
  }
  return best;
}

bool ProposalElection::verify(const Bytes& x, const IndexSet& proof) const {
  if (proof.empty()) return false;
  for (PartyId k : proof)
    if (!evals_.count(k) || !start_eval_.count(k)) return false;
  if (!gather_.covers(proof)) return false;
  auto winner = elect(proof);
  return winner && start_eval_.at(*winner).prop == x;
}

void ProposalElection::progress(Outbox& out) {
  bool changed = true;
  while (changed) {
    changed = false;

    if (started_ && !vrf_dkg_ && dkg_shares_.size() >= ctx_->quorum()) {
      std::vector<DkgShare> first(dkg_shares_.begin(), dkg_shares_.begin() + ctx_->quorum());
      vrf_dkg_ = ctx_->crypto->dkg_aggregate(first);
      gather_.start(encode_pe_tuple({prop_, *vrf_dkg_}), out);
      changed = true;
    }

    const auto& own = gather_.output();
    if (own && !sent_indices_) {
      sent_indices_ = true;
      auto tag = ctx_->tag(Channel::PeIndices, view_, ctx_->self);
      auto& slot = index_broadcasts_[ctx_->self];
      if (!slot) slot = std::make_unique<ReliableBroadcast>(*ctx_, tag);
      slot->start_dealer(field::encode_indices(indices_of(*own)), out);
      changed = true;
    }

    if (own) {
      for (auto it = pending_indices_.begin(); it != pending_indices_.end();) {
        auto verified = gather_.verify(it->second);
        if (!verified) {
          ++it;
          continue;
        }
        std::vector<PartyId> fresh;
        // Send shares for unseen tuples first, then record them.
        for (const auto& [k, bytes] : *verified) {
          if (start_eval_.count(k)) continue;
          out.broadcast(ctx_->tag(Channel::PeEval, view_),
                        EvalShareMessage{k, ctx_->crypto->eval_sh(decode_pe_tuple(bytes)->transcript,
                                                                   ctx_->key, vrf_input(k))});
          ++eval_fanouts_;
          fresh.push_back(k);
        }
        for (PartyId k : fresh) start_eval_.emplace(k, *decode_pe_tuple(verified->at(k)));
        for (PartyId k : fresh) {
          auto w = waiting_shares_.find(k);
          if (w == waiting_shares_.end()) continue;
          auto waiting = std::move(w->second);
          waiting_shares_.erase(w);
          for (const auto& [from, share] : waiting) accept_eval_share(from, k, share);
        }
        it = pending_indices_.erase(it);
        ++version_;
        changed = true;
      }
    }

    if (own && !output_ && !own->empty()) {
      if (auto winner = elect(indices_of(*own))) {
        output_ = PeOutput{decode_pe_tuple(own->at(*winner))->prop, indices_of(*own)};
        ++version_;
        out.note(NoteKind::Output, ctx_->tag(Channel::PeIndices, view_, ctx_->self),
                 "pe winner " + std::to_string(*winner));
        changed = true;
      }
    }
  }
}

}  // namespace adkg
