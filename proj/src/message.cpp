#include "adkg/message.hpp"

namespace adkg {

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::Rb: return "rb";
    case Channel::GatherValue: return "gather.value";
    case Channel::GatherS: return "gather.s";
    case Channel::GatherT: return "gather.t";
    case Channel::PeIndices: return "pe.indices";
    case Channel::PeDkg: return "pe.dkg";
    case Channel::PeEval: return "pe.eval";
    case Channel::Nwh: return "nwh";
    case Channel::Adkg: return "adkg";
  }
  return "?";
}

std::string InstanceTag::path() const {
  std::string out = "s" + std::to_string(session);
  if (view != 0) out += "/v" + std::to_string(view);
  out += "/";
  out += to_string(channel);
  switch (channel) {
    case Channel::Rb:
    case Channel::GatherValue:
    case Channel::GatherS:
    case Channel::GatherT:
    case Channel::PeIndices:
      out += "/d" + std::to_string(dealer);
      break;
    default:
      break;
  }
  return out;
}

std::string_view InstanceTag::protocol() const {
  switch (channel) {
    case Channel::Rb: return "rb";
    case Channel::GatherValue:
    case Channel::GatherS:
    case Channel::GatherT: return "gather";
    case Channel::PeIndices:
    case Channel::PeDkg:
    case Channel::PeEval: return "pe";
    case Channel::Nwh: return "nwh";
    case Channel::Adkg: return "adkg";
  }
  return "?";
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t tuple_words(const KeyTuple& t) { return 1 + value_words(t.value) + 2 * t.proof.size(); }

}  // namespace

std::size_t value_words(const Bytes& v) { return 1 + (v.size() + 6) / 7; }

std::string_view kind_name(const Payload& p) {
  return std::visit(Overloaded{
                        [](const RbMessage& m) -> std::string_view {
                          switch (m.kind) {
                            case RbKind::Value: return "value";
                            case RbKind::Echo: return "echo";
                            case RbKind::Ready: return "ready";
                          }
                          return "rb";
                        },
                        [](const DkgShareMessage&) -> std::string_view { return "dkg"; },
                        [](const EvalShareMessage&) -> std::string_view { return "eval"; },
                        [](const SuggestMessage&) -> std::string_view { return "suggest"; },
                        [](const EchoMessage&) -> std::string_view { return "echo"; },
                        [](const KeyMessage&) -> std::string_view { return "key"; },
                        [](const LockMessage&) -> std::string_view { return "lock"; },
                        [](const CommitMessage&) -> std::string_view { return "commit"; },
                        [](const BlameMessage&) -> std::string_view { return "blame"; },
                        [](const EquivocateMessage&) -> std::string_view { return "equivocate"; },
                    },
                    p);
}

std::size_t word_cost(const Payload& p) {
  return std::visit(
      Overloaded{
          // commitment root, message length, chunk, opening path
          [](const RbMessage& m) { return 2 + m.chunk.size() + m.proof.siblings.size(); },
          [](const DkgShareMessage& m) { return share_words(m.share); },
          // index, evaluator, share
          [](const EvalShareMessage&) -> std::size_t { return 3; },
          [](const SuggestMessage& m) { return tuple_words(m.key); },
          [](const EchoMessage& m) { return tuple_words(m.tuple) + m.election.size() + 1; },
          [](const KeyMessage& m) { return value_words(m.value) + 2 * m.proof.size() + 1; },
          [](const LockMessage& m) { return value_words(m.value) + 2 * m.proof.size() + 1; },
          [](const CommitMessage& m) { return value_words(m.value) + 2 * m.proof.size(); },
          [](const BlameMessage& m) {
            return tuple_words(m.tuple) + m.election.size() + tuple_words(m.lock);
          },
          [](const EquivocateMessage& m) {
            return tuple_words(m.first) + m.first_election.size() + tuple_words(m.second) +
                   m.second_election.size();
          },
      },
      p);
}

void write_sigset(Writer& w, const SigSet& s) {
  w.u32(static_cast<std::uint32_t>(s.size()));
  for (const auto& e : s) w.u32(e.signer).raw(e.sig);
}

SigSet read_sigset(Reader& r) {
  const auto count = r.u32();
  if (count > 4096) throw Error(ErrorCode::Decode, "implausible signature count");
  SigSet out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    SignedBy e;
    e.signer = r.u32();
    e.sig = r.fixed<32>();
    out.push_back(e);
  }
  return out;
}

Bytes encode_key_tuple(const KeyTuple& t) {
  Writer w;
  w.u64(t.view).blob(t.value);
  write_sigset(w, t.proof);
  return std::move(w).bytes();
}

KeyTuple decode_key_tuple(ByteView bytes) {
  Reader r(bytes);
  KeyTuple t;
  t.view = r.u64();
  t.value = r.blob();
  t.proof = read_sigset(r);
  r.expect_done();
  return t;
}

Bytes nwh_signing_message(std::string_view kind, const Bytes& value, std::uint64_t view) {
  Writer w;
  w.text("adkg/nwh/").text(kind).u64(view).blob(value);
  return std::move(w).bytes();
}

}  // namespace adkg
