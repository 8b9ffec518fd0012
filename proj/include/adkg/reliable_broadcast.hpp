#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "adkg/message.hpp"

namespace adkg {

using Words = std::vector<field::FieldElem>;

/// Upper bound on a broadcast message, in words.
inline constexpr std::uint32_t kMaxBroadcastWords = 1u << 20;

/// The n value messages a dealer sends for `msg`; entry j is for party j.
/// Throws EmptyMessage.
std::vector<RbMessage> rb_dealer_messages(std::span<const field::FieldElem> msg, std::size_t n,
                                          std::size_t f);

/// Commitment leaves for a chunk vector.
std::vector<Bytes> chunk_leaves(const std::vector<Words>& chunks);

/// Erasure-coded reliable broadcast, one instance per (tag, dealer), seen
/// from one party. With a validator it is the validated variant: a
/// reconstructed message failing validation is never delivered.
class ReliableBroadcast {
 public:
  using Validator = std::function<bool(std::span<const field::FieldElem>)>;

  ReliableBroadcast(const PartyContext& ctx, InstanceTag tag, Validator validate = {});

  /// Sends the value messages; caller must be the tag's dealer.
  void start_dealer(std::span<const field::FieldElem> msg, Outbox& out);

  /// Processes one value/echo/ready message. Returns true if this call
  /// delivered the message.
  bool handle(PartyId from, const RbMessage& m, Outbox& out);

  const std::optional<Words>& delivered() const { return delivered_; }
  bool rejected() const { return rejected_; }
  bool sent_ready() const { return sent_ready_; }
  /// Commitment this party sent its ready for, if any.
  const std::optional<vc::VectorCommitment>& ready_commitment() const { return ready_com_; }
  std::size_t dropped() const { return dropped_; }
  const InstanceTag& tag() const { return tag_; }

 private:
  struct ComKey {
    vc::VectorCommitment com;
    std::uint32_t msg_len = 0;
    auto operator<=>(const ComKey&) const = default;
  };

  bool well_formed(const RbMessage& m) const;
  void add_points(std::vector<field::Point>& set, PartyId from, const RbMessage& m) const;
  std::optional<field::Poly> fit(std::vector<field::Point>& set, std::uint32_t msg_len) const;
  void send_ready(const ComKey& key, const std::vector<Words>& chunks, Outbox& out);
  bool on_echo(PartyId from, const RbMessage& m, Outbox& out);
  bool on_ready(PartyId from, const RbMessage& m, Outbox& out);

  const PartyContext* ctx_;
  InstanceTag tag_;
  Validator validate_;

  bool value_seen_ = false;
  std::vector<bool> echo_seen_;
  std::vector<bool> ready_seen_;
  std::map<ComKey, std::vector<field::Point>> echoes_;
  std::map<ComKey, std::vector<field::Point>> readies_;
  bool sent_ready_ = false;
  std::optional<vc::VectorCommitment> ready_com_;
  std::optional<Words> delivered_;
  bool rejected_ = false;
  std::size_t dropped_ = 0;
};

}  // namespace adkg
