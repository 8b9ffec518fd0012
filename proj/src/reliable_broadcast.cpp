#include "adkg/reliable_broadcast.hpp"

#include <algorithm>

namespace adkg {

using field::FieldElem;
using field::Point;

std::vector<Bytes> chunk_leaves(const std::vector<Words>& chunks) {
  std::vector<Bytes> leaves;
  leaves.reserve(chunks.size());
  for (const auto& c : chunks) leaves.push_back(field::serialize_words(c));
  return leaves;
}

std::vector<RbMessage> rb_dealer_messages(std::span<const FieldElem> msg, std::size_t n, std::size_t f) {
  if (msg.size() > kMaxBroadcastWords) throw Error(ErrorCode::InvalidInput, "message too long");
  auto chunks = field::encode_chunks(msg, n, f);
  auto leaves = chunk_leaves(chunks);
  const auto com = vc::commit(leaves);
  auto proofs = vc::open_prove_all(leaves);
  std::vector<RbMessage> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    out.push_back({RbKind::Value, com, static_cast<std::uint32_t>(msg.size()), std::move(chunks[j]),
                   std::move(proofs[j])});
  return out;
}

ReliableBroadcast::ReliableBroadcast(const PartyContext& ctx, InstanceTag tag, Validator validate)
    : ctx_(&ctx),
      tag_(tag),
      validate_(std::move(validate)),
      echo_seen_(ctx.n, false),
      ready_seen_(ctx.n, false) {}

void ReliableBroadcast::start_dealer(std::span<const FieldElem> msg, Outbox& out) {
  auto msgs = rb_dealer_messages(msg, ctx_->n, ctx_->f);
  for (PartyId j = 0; j < msgs.size(); ++j) out.send(j, tag_, std::move(msgs[j]));
}

bool ReliableBroadcast::well_formed(const RbMessage& m) const {
  if (m.msg_len == 0 || m.msg_len > kMaxBroadcastWords) return false;
  if (m.com.length != ctx_->n) return false;
  return m.chunk.size() == field::chunk_size(m.msg_len, ctx_->f);
}

void ReliableBroadcast::add_points(std::vector<Point>& set, PartyId from, const RbMessage& m) const {
  const std::size_t c = m.chunk.size();
  for (std::size_t k = 0; k < c; ++k) set.emplace_back(field::chunk_abscissa(from, c, k), m.chunk[k]);
}

std::optional<field::Poly> ReliableBroadcast::fit(std::vector<Point>& set, std::uint32_t msg_len) const {
  // Lowest abscissae first; any msg_len points determine the polynomial.
  std::sort(set.begin(), set.end(), [](const Point& a, const Point& b) { return a.first < b.first; });
  if (set.size() < msg_len) return std::nullopt;
  return field::interpolate(set, msg_len - 1);
}

namespace {

std::vector<Words> evaluate_chunks(const field::Poly& p, std::size_t n, std::size_t c) {
  std::vector<Words> chunks(n);
  for (std::size_t j = 0; j < n; ++j) {
    chunks[j].reserve(c);
    for (std::size_t k = 0; k < c; ++k) chunks[j].push_back(p(field::chunk_abscissa(j, c, k)));
  }
  return chunks;
}

}  // namespace

void ReliableBroadcast::send_ready(const ComKey& key, const std::vector<Words>& chunks, Outbox& out) {
  auto leaves = chunk_leaves(chunks);
  RbMessage ready{RbKind::Ready, key.com, key.msg_len, chunks[ctx_->self],
                  vc::open_prove(leaves, ctx_->self)};
  sent_ready_ = true;
  ready_com_ = key.com;
  out.broadcast(tag_, std::move(ready));
}

bool ReliableBroadcast::handle(PartyId from, const RbMessage& m, Outbox& out) {
  if (delivered_ || rejected_ || from >= ctx_->n) return false;
  if (!well_formed(m)) {
    ++dropped_;
    return false;
  }
  switch (m.kind) {
    case RbKind::Value: {
      if (from != tag_.dealer || value_seen_) return false;
      value_seen_ = true;
      if (!vc::open_verify(m.com, field::serialize_words(m.chunk), ctx_->self, m.proof)) {
        ++dropped_;
        return false;
      }
      out.broadcast(tag_, RbMessage{RbKind::Echo, m.com, m.msg_len, m.chunk, m.proof});
      return false;
    }
    case RbKind::Echo:
      return on_echo(from, m, out);
    case RbKind::Ready:
      return on_ready(from, m, out);
  }
  return false;
}

bool ReliableBroadcast::on_echo(PartyId from, const RbMessage& m, Outbox& out) {
  if (echo_seen_[from]) return false;
  echo_seen_[from] = true;
  if (!vc::open_verify(m.com, field::serialize_words(m.chunk), from, m.proof)) {
    ++dropped_;
    return false;
  }
  const ComKey key{m.com, m.msg_len};
  auto& set = echoes_[key];
  add_points(set, from, m);
  const std::size_t c = m.chunk.size();
  if (!sent_ready_ && set.size() >= ctx_->quorum() * c) {
    auto poly = fit(set, m.msg_len);
    if (!poly) return false;
    auto chunks = evaluate_chunks(*poly, ctx_->n, c);
    // Re-commit check: only vouch for a commitment to a genuine codeword.
    if (vc::commit(chunk_leaves(chunks)) == m.com) send_ready(key, chunks, out);
  }
  return false;
}

bool ReliableBroadcast::on_ready(PartyId from, const RbMessage& m, Outbox& out) {
  if (ready_seen_[from]) return false;
  ready_seen_[from] = true;
  if (!vc::open_verify(m.com, field::serialize_words(m.chunk), from, m.proof)) {
    ++dropped_;
    return false;
  }
  const ComKey key{m.com, m.msg_len};
  auto& set = readies_[key];
  add_points(set, from, m);
  const std::size_t c = m.chunk.size();
  if (!sent_ready_ && set.size() >= (ctx_->f + 1) * c) {
    if (auto poly = fit(set, m.msg_len)) send_ready(key, evaluate_chunks(*poly, ctx_->n, c), out);
  }
  if (set.size() >= ctx_->quorum() * c) {
    auto poly = fit(set, m.msg_len);
    if (!poly) return false;
    auto msg = poly->coeffs_padded(m.msg_len);
    if (validate_ && !validate_(msg)) {
      rejected_ = true;
      return false;
    }
    delivered_ = std::move(msg);
    return true;
  }
  return false;
}

}  // namespace adkg
