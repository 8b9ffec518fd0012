#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "adkg/crypto.hpp"
#include "adkg/field.hpp"
#include "adkg/vector_commitment.hpp"

namespace adkg {

/// Which sub-protocol an envelope belongs to. Broadcast channels carry RB
/// traffic for one dealer; the others are direct protocol messages.
enum class Channel : std::uint8_t {
  Rb,           // standalone reliable broadcast
  GatherValue,  // gather round 1 (validated broadcast of the input)
  GatherS,      // gather round 2
  GatherT,      // gather round 3
  PeIndices,    // proposal election index-set broadcast
  PeDkg,        // proposal election VRF-DKG shares
  PeEval,       // proposal election VRF evaluation shares
  Nwh,          // agreement messages
  Adkg,         // key generation shares
};

std::string_view to_string(Channel c);

/// Instance identity: session, view (0 outside the agreement layer), channel
/// and, for broadcasts, the dealer.
struct InstanceTag {
  std::uint32_t session = 0;
  std::uint32_t view = 0;
  Channel channel = Channel::Rb;
  PartyId dealer = 0;

  std::string path() const;
  /// Owning protocol for metering: rb, gather, pe, nwh or adkg.
  std::string_view protocol() const;

  friend auto operator<=>(const InstanceTag&, const InstanceTag&) = default;
};

// --- reliable broadcast -----------------------------------------------------

enum class RbKind : std::uint8_t { Value, Echo, Ready };

struct RbMessage {
  RbKind kind = RbKind::Value;
  vc::VectorCommitment com;
  std::uint32_t msg_len = 0;  // message length in words; fixes the chunk size
  std::vector<field::FieldElem> chunk;
  vc::OpeningProof proof;
};

// --- proposal election / key generation --------------------------------------

struct DkgShareMessage {
  DkgShare share;
};

struct EvalShareMessage {
  PartyId index = 0;  // whose proposal this evaluation is for
  EvalShare share;
};

// --- agreement ---------------------------------------------------------------

struct SignedBy {
  PartyId signer = 0;
  Signature sig{};

  friend bool operator==(const SignedBy&, const SignedBy&) = default;
};

/// Signature set sorted by signer.
using SigSet = std::vector<SignedBy>;

/// (view, value, proof) triple used for keys and locks. View 0 is the
/// genesis triple whose proof is empty.
struct KeyTuple {
  std::uint64_t view = 0;
  Bytes value;
  SigSet proof;

  friend bool operator==(const KeyTuple&, const KeyTuple&) = default;
};

struct SuggestMessage {
  KeyTuple key;
};
struct EchoMessage {
  KeyTuple tuple;
  IndexSet election;
  Signature sig{};
};
struct KeyMessage {
  Bytes value;
  SigSet proof;
  Signature sig{};
};
struct LockMessage {
  Bytes value;
  SigSet proof;
  Signature sig{};
};
struct CommitMessage {
  Bytes value;
  SigSet proof;
};
struct BlameMessage {
  KeyTuple tuple;
  IndexSet election;
  KeyTuple lock;
};
struct EquivocateMessage {
  KeyTuple first;
  IndexSet first_election;
  KeyTuple second;
  IndexSet second_election;
};

using Payload = std::variant<RbMessage, DkgShareMessage, EvalShareMessage, SuggestMessage, EchoMessage,
                             KeyMessage, LockMessage, CommitMessage, BlameMessage, EquivocateMessage>;

std::string_view kind_name(const Payload& p);

/// Metered size: one word per field element, digest, signature or index.
/// Opaque values cost as many words as their broadcast encoding.
std::size_t word_cost(const Payload& p);
std::size_t value_words(const Bytes& v);

struct Envelope {
  std::uint64_t seq = 0;
  PartyId from = 0;
  PartyId to = 0;
  InstanceTag tag;
  std::shared_ptr<const Payload> payload;
  std::uint32_t words = 0;
  std::uint32_t depth = 0;  // causal round depth
};

// --- per-party plumbing ------------------------------------------------------

struct PartyContext {
  PartyId self = 0;
  std::size_t n = 0;
  std::size_t f = 0;
  const CryptoProvider* crypto = nullptr;
  PartyKey key;
  std::uint32_t session = 0;

  std::size_t quorum() const { return n - f; }
  InstanceTag tag(Channel channel, std::uint32_t view = 0, PartyId dealer = 0) const {
    return {session, view, channel, dealer};
  }
};

enum class NoteKind : std::uint8_t { Output, ViewChange, Decide };

struct Note {
  NoteKind kind;
  InstanceTag tag;
  std::string detail;
};

struct Outgoing {
  PartyId to = 0;
  InstanceTag tag;
  std::shared_ptr<const Payload> payload;
};

/// Collects what a handler emits; the network turns it into envelopes.
class Outbox {
 public:
  Outbox(PartyId self, std::size_t n) : self_(self), n_(n) {}

  void send(PartyId to, const InstanceTag& tag, Payload p) {
    out_.push_back({to, tag, std::make_shared<const Payload>(std::move(p))});
  }
  void send_shared(PartyId to, const InstanceTag& tag, std::shared_ptr<const Payload> p) {
    out_.push_back({to, tag, std::move(p)});
  }
  void broadcast(const InstanceTag& tag, Payload p) {
    auto shared = std::make_shared<const Payload>(std::move(p));
    for (PartyId j = 0; j < n_; ++j) out_.push_back({j, tag, shared});
  }
  void note(NoteKind kind, const InstanceTag& tag, std::string detail = {}) {
    notes_.push_back({kind, tag, std::move(detail)});
  }

  PartyId self() const { return self_; }
  std::size_t n() const { return n_; }
  std::vector<Outgoing>& messages() { return out_; }
  std::vector<Note>& notes() { return notes_; }

 private:
  PartyId self_;
  std::size_t n_;
  std::vector<Outgoing> out_;
  std::vector<Note> notes_;
};

// --- canonical encodings ------------------------------------------------------

void write_sigset(Writer& w, const SigSet& s);
SigSet read_sigset(Reader& r);
Bytes encode_key_tuple(const KeyTuple& t);
/// Throws Error(Decode).
KeyTuple decode_key_tuple(ByteView bytes);

/// Bytes signed for echo, key and lock messages: <kind, value, view>.
Bytes nwh_signing_message(std::string_view kind, const Bytes& value, std::uint64_t view);

}  // namespace adkg
