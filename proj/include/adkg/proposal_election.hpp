#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>

#include "adkg/gather.hpp"

namespace adkg {

/// A gathered proposal: the proposal itself plus the VRF-DKG transcript its
/// sender committed to alongside it.
struct PeTuple {
  Bytes prop;
  DkgTranscript transcript;
};

Bytes encode_pe_tuple(const PeTuple& t);
std::optional<PeTuple> decode_pe_tuple(ByteView bytes);

struct PeOutput {
  Bytes proposal;
  IndexSet proof;  // indices of the gather-set the election was computed on
};

/// VRF input for party k's proposal: k as 2 bytes, big-endian.
Bytes vrf_input(PartyId k);

/// Proposal election seen from one party: DKG shares, gather over
/// (proposal, transcript) pairs, index-set broadcast, VRF evaluation per
/// gathered index, then output of the proposal with the largest evaluation.
class ProposalElection {
 public:
  using Validator = std::function<bool(const Bytes&)>;

  ProposalElection(const PartyContext& ctx, std::uint32_t view, Validator validate);

  /// Throws InvalidInput when validate(prop) fails.
  void start(const Bytes& prop, Outbox& out);
  void handle(PartyId from, const InstanceTag& tag, const Payload& p, Outbox& out);

  const std::optional<PeOutput>& output() const { return output_; }

  /// Verification poll: true once every index of `proof` has a recorded
  /// tuple and evaluation, the gather verification of `proof` terminates
  /// and `x` is the proposal with the largest evaluation within `proof`.
  bool verify(const Bytes& x, const IndexSet& proof) const;

  /// Proposal with the largest evaluation among `indices` (ties go to the
  /// lower index); nullopt unless all of them are evaluated.
  std::optional<PartyId> elect(const IndexSet& indices) const;

  std::uint64_t version() const { return version_ + gather_.version(); }
  bool started() const { return started_; }
  const Gather& gather() const { return gather_; }
  const std::map<PartyId, PeTuple>& start_eval() const { return start_eval_; }
  const std::map<PartyId, Bytes>& evaluations() const { return evals_; }
  std::size_t eval_fanouts() const { return eval_fanouts_; }
  const std::optional<DkgTranscript>& own_transcript() const { return vrf_dkg_; }

 private:
  bool check_validity(const Bytes& tuple_bytes) const;
  void on_dkg_share(PartyId from, const DkgShareMessage& m);
  void on_eval_share(PartyId from, const EvalShareMessage& m);
  void accept_eval_share(PartyId from, PartyId k, const EvalShare& share);
  void progress(Outbox& out);

  const PartyContext* ctx_;
  std::uint32_t view_;
  Validator validate_;
  Gather gather_;

  bool started_ = false;
  Bytes prop_;
  std::vector<DkgShare> dkg_shares_;
  std::vector<bool> dkg_seen_;
  std::optional<DkgTranscript> vrf_dkg_;

  std::map<PartyId, std::unique_ptr<ReliableBroadcast>> index_broadcasts_;
  bool sent_indices_ = false;
  std::map<PartyId, IndexSet> pending_indices_;

  std::map<PartyId, PeTuple> start_eval_;
  std::set<std::pair<PartyId, PartyId>> eval_seen_;  // (sender, index)
  std::map<PartyId, std::vector<std::pair<PartyId, EvalShare>>> waiting_shares_;
  std::map<PartyId, std::vector<EvalShare>> eval_shares_;
  std::map<PartyId, Bytes> evals_;
  std::size_t eval_fanouts_ = 0;

  std::optional<PeOutput> output_;
  std::uint64_t version_ = 0;
};

}  // namespace adkg
