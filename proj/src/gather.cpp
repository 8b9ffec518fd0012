#include "adkg/gather.hpp"

namespace adkg {

IndexSet indices_of(const GatherSet& set) {
  std::vector<PartyId> ids;
  ids.reserve(set.size());
  for (const auto& [id, _] : set) ids.push_back(id);
  return IndexSet(std::move(ids));
}

Gather::Gather(const PartyContext& ctx, std::uint32_t view, Validator validate)
    : ctx_(&ctx), view_(view), validate_(std::move(validate)) {}

ReliableBroadcast& Gather::instance(Channel channel, PartyId dealer) {
  auto& slot = broadcasts_[{channel, dealer}];
  if (!slot) {
    ReliableBroadcast::Validator check;
    if (channel == Channel::GatherValue) {
      check = [this](std::span<const field::FieldElem> words) {
        auto bytes = field::decode_bytes(words);
        return bytes && validate_(*bytes);
      };
    }
    slot = std::make_unique<ReliableBroadcast>(*ctx_, ctx_->tag(channel, view_, dealer), std::move(check));
  }
  return *slot;
}

void Gather::start(const Bytes& input, Outbox& out) {
  if (!validate_(input)) throw Error(ErrorCode::InvalidInput, "gather input fails validation");
  start_unchecked(input, out);
}

void Gather::start_unchecked(const Bytes& input, Outbox& out) {
  if (started_) return;
  started_ = true;
  ++version_;
  instance(Channel::GatherValue, ctx_->self).start_dealer(field::encode_bytes(input), out);
  progress(out);
}

void Gather::handle(PartyId from, const InstanceTag& tag, const RbMessage& m, Outbox& out) {
  if (tag.channel != Channel::GatherValue && tag.channel != Channel::GatherS &&
      tag.channel != Channel::GatherT)
    return;
  if (tag.dealer >= ctx_->n) return;
  auto& rb = instance(tag.channel, tag.dealer);
  if (rb.handle(from, m, out)) {
    on_delivery(tag.channel, tag.dealer, *rb.delivered());
    progress(out);
  }
}

void Gather::on_delivery(Channel channel, PartyId dealer, const Words& msg) {
  ++version_;
  switch (channel) {
    case Channel::GatherValue: {
      // The validated broadcast already checked decoding and the predicate.
      r_.emplace(dealer, *field::decode_bytes(msg));
      s_.insert(dealer);
      break;
    }
    case Channel::GatherS: {
      auto set = field::decode_indices(msg, ctx_->n);
      if (set && set->size() >= ctx_->quorum()) pending_s_.emplace(dealer, std::move(*set));
      break;
    }
    case Channel::GatherT: {
      auto set = field::decode_indices(msg, ctx_->n);
      if (set && set->size() >= ctx_->quorum()) pending_t_.emplace(dealer, std::move(*set));
      break;
    }
    default:
      break;
  }
}

void Gather::progress(Outbox& out) {
  const auto q = ctx_->quorum();
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = pending_s_.begin(); it != pending_s_.end();) {
      if (it->second.subset_of(s_)) {
        t_.insert(it->first);
        s_sets_.emplace(it->first, std::move(it->second));
        it = pending_s_.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
    for (auto it = pending_t_.begin(); it != pending_t_.end();) {
      if (it->second.subset_of(t_)) {
        IndexSet unioned;
        for (PartyId k : it->second) unioned = unioned.united(s_sets_.at(k));
        u_.emplace(it->first, std::move(unioned));
        it = pending_t_.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
    if (changed) ++version_;
  }

  if (!started_) return;
  if (!sent_s_ && s_.size() >= q) {
    sent_s_ = true;
    instance(Channel::GatherS, ctx_->self).start_dealer(field::encode_indices(s_), out);
  }
  if (!sent_t_ && t_.size() >= q) {
    sent_t_ = true;
    instance(Channel::GatherT, ctx_->self).start_dealer(field::encode_indices(t_), out);
  }
  if (!output_ && u_.size() >= q) {
    output_ = r_;
    ++version_;
    out.note(NoteKind::Output, ctx_->tag(Channel::GatherValue, view_, ctx_->self),
             "gather " + std::to_string(output_->size()));
  }
}

bool Gather::covers(const IndexSet& indices) const {
  if (!indices.subset_of(s_)) return false;
  std::size_t covered = 0;
  for (const auto& [j, v] : u_)
    if (v.subset_of(indices)) ++covered;
  return covered >= ctx_->quorum();
}

std::optional<GatherSet> Gather::verify(const IndexSet& indices) const {
  if (!covers(indices)) return std::nullopt;
  GatherSet x;
  for (PartyId j : indices) x.emplace(j, r_.at(j));
  return x;
}

}  // namespace adkg
