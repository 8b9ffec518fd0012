#include "adkg/vector_commitment.hpp"

#include <bit>

#include "adkg/hash.hpp"
#include "adkg/serial.hpp"

namespace adkg::vc {

namespace {

const Digest& empty_leaf() {
  static const Digest d = sha256(as_bytes("adkg/vc/empty"));
  return d;
}

Digest leaf_digest(ByteView value, std::size_t position) {
  const std::uint8_t tag = 0x00;
  Writer w;
  w.u32(static_cast<std::uint32_t>(position));
  return sha256({ByteView(&tag, 1), w.bytes(), value});
}

Digest node_digest(const Digest& left, const Digest& right) {
  const std::uint8_t tag = 0x01;
  return sha256({ByteView(&tag, 1), left, right});
}

std::size_t depth_for(std::size_t length) {
  return length <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(length - 1));
}

// levels[0] are the padded leaves, levels.back() is {root}.
std::vector<std::vector<Digest>> build_levels(std::span<const Bytes> values) {
  const std::size_t width = std::size_t{1} << depth_for(values.size());
  std::vector<std::vector<Digest>> levels;
  levels.emplace_back(width, empty_leaf());
  for (std::size_t i = 0; i < values.size(); ++i) levels[0][i] = leaf_digest(values[i], i);
  while (levels.back().size() > 1) {
    const auto& below = levels.back();
    std::vector<Digest> up(below.size() / 2);
    for (std::size_t i = 0; i < up.size(); ++i) up[i] = node_digest(below[2 * i], below[2 * i + 1]);
    levels.push_back(std::move(up));
  }
  return levels;
}

OpeningProof path(const std::vector<std::vector<Digest>>& levels, std::size_t position) {
  OpeningProof proof;
  proof.siblings.reserve(levels.size() - 1);
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    proof.siblings.push_back(levels[l][position ^ 1]);
    position >>= 1;
  }
  return proof;
}

}  // namespace

VectorCommitment commit(std::span<const Bytes> values) {
  if (values.empty()) throw Error(ErrorCode::IndexOutOfRange, "cannot commit to an empty vector");
  auto levels = build_levels(values);
  return {levels.back()[0], static_cast<std::uint32_t>(values.size())};
}

OpeningProof open_prove(std::span<const Bytes> values, std::size_t position) {
  if (position >= values.size()) throw Error(ErrorCode::IndexOutOfRange, "position beyond vector length");
  return path(build_levels(values), position);
}

std::vector<OpeningProof> open_prove_all(std::span<const Bytes> values) {
  if (values.empty()) return {};
  auto levels = build_levels(values);
  std::vector<OpeningProof> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.push_back(path(levels, i));
  return out;
}

bool open_verify(const VectorCommitment& c, ByteView value, std::size_t position,
                 const OpeningProof& proof) {
  if (position >= c.length) return false;
  if (proof.siblings.size() != depth_for(c.length)) return false;
  Digest acc = leaf_digest(value, position);
  std::size_t idx = position;
  for (const auto& sib : proof.siblings) {
    acc = (idx & 1) ? node_digest(sib, acc) : node_digest(acc, sib);
    idx >>= 1;
  }
  return acc == c.root;
}

}  // namespace adkg::vc
