#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "adkg/proposal_election.hpp"

namespace adkg {

/// View-based validated agreement on top of proposal election, following
/// the key / lock / commit ladder. One object per party.
class Nwh {
 public:
  using Validator = std::function<bool(const Bytes&)>;

  Nwh(const PartyContext& ctx, Validator validate);

  /// Enters view 1. Throws InvalidInput when validate(x) fails.
  void start(const Bytes& x, Outbox& out);
  /// Accepts agreement messages and proposal-election traffic of any view.
  void handle(PartyId from, const InstanceTag& tag, const Payload& p, Outbox& out);

  bool key_correct(std::uint64_t view, const Bytes& v, const SigSet& proof) const;
  bool lock_correct(std::uint64_t view, const Bytes& v, const SigSet& proof) const;
  bool commit_correct(std::uint64_t view, const Bytes& v, const SigSet& proof) const;

  bool started() const { return started_; }
  std::uint32_t view() const { return view_; }
  const KeyTuple& key() const { return key_; }
  const KeyTuple& lock() const { return lock_; }
  const std::optional<Bytes>& decision() const { return decision_; }
  std::optional<std::uint32_t> decided_view() const { return decided_view_; }

  /// Election of `view`, or nullptr if none has been touched yet.
  const ProposalElection* election(std::uint32_t view) const;
  const std::map<std::uint32_t, std::unique_ptr<ProposalElection>>& elections() const {
    return elections_;
  }

 private:
  struct PendingEcho {
    PartyId from;
    EchoMessage msg;
  };
  struct ViewState {
    explicit ViewState(std::size_t n)
        : suggest_seen(n), echo_seen(n), key_seen(n), lock_seen(n), blame_seen(n), equiv_seen(n) {}
    std::vector<bool> suggest_seen, echo_seen, key_seen, lock_seen, blame_seen, equiv_seen;
    std::vector<std::pair<PartyId, KeyTuple>> suggestions;
    bool pe_output_handled = false;
    std::vector<PendingEcho> pending_echoes;
    std::vector<PendingEcho> echoes;
    std::vector<BlameMessage> pending_blames;
    std::vector<EquivocateMessage> pending_equivs;
    SigSet keys;
    SigSet locks;
    std::optional<std::uint64_t> polled_version;
  };
  struct Buffered {
    PartyId from;
    InstanceTag tag;
    std::shared_ptr<const Payload> payload;
  };

  ProposalElection& election_for(std::uint32_t view);
  bool threshold_signed(std::string_view kind, std::uint64_t view, const Bytes& v,
                        const SigSet& proof) const;
  Signature sign(std::string_view kind, const Bytes& v, std::uint64_t view) const;

  void dispatch(PartyId from, const InstanceTag& tag, const Payload& p, Outbox& out);
  void on_suggest(PartyId from, const SuggestMessage& m, Outbox& out);
  void on_echo(PartyId from, const EchoMessage& m);
  void on_key(PartyId from, const KeyMessage& m, Outbox& out);
  void on_lock(PartyId from, const LockMessage& m, Outbox& out);
  void on_commit(std::uint32_t view, const CommitMessage& m, Outbox& out);
  void on_blame(PartyId from, const BlameMessage& m);
  void on_equivocate(PartyId from, const EquivocateMessage& m);

  void accept_echo(const PendingEcho& e, Outbox& out);
  void on_pe_output(const PeOutput& o, Outbox& out);
  bool poll(Outbox& out);
  void settle(Outbox& out);
  void enter_view(std::uint32_t view, Outbox& out);
  void decide(const Bytes& v, std::uint32_t view, Outbox& out);

  const PartyContext* ctx_;
  Validator validate_;
  bool started_ = false;
  Bytes input_;
  std::uint32_t view_ = 0;
  KeyTuple key_;
  KeyTuple lock_;
  ViewState vs_;
  std::map<std::uint32_t, std::unique_ptr<ProposalElection>> elections_;
  std::multimap<std::uint32_t, Buffered> delayed_;
  std::vector<Buffered> before_start_;
  std::vector<bool> commit_seen_;
  std::optional<Bytes> decision_;
  std::optional<std::uint32_t> decided_view_;
};

}  // namespace adkg
