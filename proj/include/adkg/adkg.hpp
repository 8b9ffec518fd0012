#pragma once

#include <optional>

#include "adkg/nwh.hpp"

namespace adkg {

/// Key generation: exchange DKG shares, aggregate the first n - f verified
/// ones and agree on one verifying transcript.
class Adkg {
 public:
  explicit Adkg(const PartyContext& ctx);

  void start(Outbox& out);
  void handle(PartyId from, const InstanceTag& tag, const Payload& p, Outbox& out);

  bool started() const { return started_; }
  const std::optional<DkgTranscript>& proposal() const { return proposal_; }
  const std::optional<DkgTranscript>& output() const { return output_; }
  const Nwh& agreement() const { return nwh_; }

 private:
  void on_share(PartyId from, const DkgShareMessage& m, Outbox& out);
  void check_output(Outbox& out);

  const PartyContext* ctx_;
  bool started_ = false;
  std::vector<DkgShare> shares_;
  std::vector<bool> share_seen_;
  std::optional<DkgTranscript> proposal_;
  Nwh nwh_;
  std::optional<DkgTranscript> output_;
};

/// External validity predicate of the agreement: decodes and verifies.
bool transcript_valid(const CryptoProvider& crypto, const Bytes& encoded);

}  // namespace adkg
