#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "adkg/reliable_broadcast.hpp"

namespace adkg {

/// (party index, value) pairs; each index at most once.
using GatherSet = std::map<PartyId, Bytes>;

IndexSet indices_of(const GatherSet& set);

/// Verifiable gather seen from one party. Round 1 is a validated broadcast
/// of the input, rounds 2 and 3 broadcast index sets (S then T). Outputs a
/// gather-set containing a binding core common to every honest output and
/// every terminating verification.
class Gather {
 public:
  using Validator = std::function<bool(const Bytes&)>;

  Gather(const PartyContext& ctx, std::uint32_t view, Validator validate);

  /// Throws InvalidInput when validate(input) fails.
  void start(const Bytes& input, Outbox& out);

  /// Routes a broadcast message on one of the three gather channels.
  void handle(PartyId from, const InstanceTag& tag, const RbMessage& m, Outbox& out);

  const std::optional<GatherSet>& output() const { return output_; }

  /// Verification poll for index set I: the gather-set restricted to I once
  /// at least n - f accepted T sets have their unions inside I and I is
  /// within S; nullopt while that does not (yet) hold.
  std::optional<GatherSet> verify(const IndexSet& indices) const;
  /// True exactly when verify(indices) would return a value.
  bool covers(const IndexSet& indices) const;

  /// Bumped on every state change, for callers that poll.
  std::uint64_t version() const { return version_; }
  bool started() const { return started_; }

  const GatherSet& received() const { return r_; }  // R
  const IndexSet& s_set() const { return s_; }
  const IndexSet& t_set() const { return t_; }
  const std::map<PartyId, IndexSet>& unions() const { return u_; }  // U

  /// Launches the round-1 broadcast of an arbitrary, unchecked value; used
  /// by adversary plugins.
  void start_unchecked(const Bytes& input, Outbox& out);

 private:
  ReliableBroadcast& instance(Channel channel, PartyId dealer);
  void on_delivery(Channel channel, PartyId dealer, const Words& msg);
  void progress(Outbox& out);

  const PartyContext* ctx_;
  std::uint32_t view_;
  Validator validate_;
  bool started_ = false;

  std::map<std::pair<Channel, PartyId>, std::unique_ptr<ReliableBroadcast>> broadcasts_;

  GatherSet r_;
  IndexSet s_;
  IndexSet t_;
  std::map<PartyId, IndexSet> u_;
  std::map<PartyId, IndexSet> s_sets_;        // accepted S_j
  std::map<PartyId, IndexSet> pending_s_;     // received S_j waiting for S_j within S
  std::map<PartyId, IndexSet> pending_t_;     // received T_j waiting for T_j within T
  bool sent_s_ = false;
  bool sent_t_ = false;
  std::optional<GatherSet> output_;
  std::uint64_t version_ = 0;
};

}  // namespace adkg
