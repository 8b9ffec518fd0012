#pragma once

#include <memory>

#include "adkg/adkg.hpp"
#include "adkg/scenario.hpp"
#include "adkg/simnet.hpp"

namespace adkg::sim {

/// Honest party running the scenario's protocol.
class Node final : public Process {
 public:
  Node(const ScenarioConfig& cfg, const CryptoProvider& crypto, PartyKey key, std::uint64_t seed);

  void start(Outbox& out) override;
  void receive(const Envelope& env, Outbox& out) override;
  bool terminated() const override;
  std::size_t dropped() const override;

  const PartyContext& ctx() const { return ctx_; }
  Protocol protocol() const { return protocol_; }
  const Validity& validity() const { return validity_; }
  const Bytes& input() const { return input_; }

  const ReliableBroadcast* rb() const { return rb_.get(); }
  const Gather* gather() const { return gather_.get(); }
  const ProposalElection* pe() const { return pe_.get(); }
  /// The agreement instance, standalone or inside key generation.
  const Nwh* agreement() const;
  const Adkg* adkg() const { return adkg_.get(); }

 private:
  PartyContext ctx_;
  Protocol protocol_;
  Validity validity_;
  Bytes input_;
  Words rb_msg_;
  PartyId rb_dealer_;
  std::unique_ptr<ReliableBroadcast> rb_;
  std::unique_ptr<Gather> gather_;
  std::unique_ptr<ProposalElection> pe_;
  std::unique_ptr<Nwh> nwh_;
  std::unique_ptr<Adkg> adkg_;
};

/// Byzantine strategy: rewrites what its honest core would send. It has the
/// party's own key and state but no access to the VRF oracle or to other
/// parties' keys.
class Behavior {
 public:
  virtual ~Behavior() = default;
  virtual bool silent() const { return false; }
  virtual void transform(const Node& self, std::vector<Outgoing>& msgs) = 0;
};

/// Throws Error(Config) for unknown names.
std::unique_ptr<Behavior> make_behavior(std::string_view name, const ScenarioConfig& cfg, PartyId self,
                                        std::uint64_t seed);

class CorruptNode final : public Process {
 public:
  CorruptNode(std::unique_ptr<Node> core, std::unique_ptr<Behavior> behavior)
      : core_(std::move(core)), behavior_(std::move(behavior)) {}

  void start(Outbox& out) override;
  void receive(const Envelope& env, Outbox& out) override;
  bool terminated() const override { return core_->terminated(); }

  const Node& core() const { return *core_; }

 private:
  void finish(Outbox& out);

  std::unique_ptr<Node> core_;
  std::unique_ptr<Behavior> behavior_;
};

}  // namespace adkg::sim
