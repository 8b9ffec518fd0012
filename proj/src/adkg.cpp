#include "adkg/adkg.hpp"

namespace adkg {

bool transcript_valid(const CryptoProvider& crypto, const Bytes& encoded) {
  try {
    return crypto.dkg_verify(decode_transcript(encoded));
  } catch (const Error&) {
    return false;
  }
}

Adkg::Adkg(const PartyContext& ctx)
    : ctx_(&ctx),
      share_seen_(ctx.n, false),
      nwh_(ctx, [crypto = ctx.crypto](const Bytes& b) { return transcript_valid(*crypto, b); }) {}

void Adkg::start(Outbox& out) {
  if (started_) return;
  started_ = true;
  for (PartyId j = 0; j < ctx_->n; ++j) {
    Writer nonce;
    nonce.text("adkg-share").u32(ctx_->session).u32(j);
    out.send(j, ctx_->tag(Channel::Adkg), DkgShareMessage{ctx_->crypto->dkg_sh(ctx_->key, nonce.bytes())});
  }
}

void Adkg::handle(PartyId from, const InstanceTag& tag, const Payload& p, Outbox& out) {
  if (output_ || from >= ctx_->n) return;
  if (tag.channel == Channel::Adkg) {
    if (auto* m = std::get_if<DkgShareMessage>(&p)) on_share(from, *m, out);
  } else {
    nwh_.handle(from, tag, p, out);
  }
  check_output(out);
}

void Adkg::on_share(PartyId from, const DkgShareMessage& m, Outbox& out) {
  if (share_seen_[from]) return;
  if (!ctx_->crypto->dkg_sh_verify(ctx_->crypto->public_key(from), m.share)) return;
  share_seen_[from] = true;
  shares_.push_back(m.share);
  if (proposal_ || shares_.size() != ctx_->quorum()) return;
  proposal_ = ctx_->crypto->dkg_aggregate(shares_);
  nwh_.start(encode_transcript(*proposal_), out);
}

void Adkg::check_output(Outbox& out) {
  if (output_ || !nwh_.decision()) return;
  output_ = decode_transcript(*nwh_.decision());
  out.note(NoteKind::Output, ctx_->tag(Channel::Adkg), "transcript " + to_hex(output_->aggregate_id));
}

}  // namespace adkg
