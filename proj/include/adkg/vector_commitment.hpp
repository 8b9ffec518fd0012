#pragma once

#include <vector>

#include "adkg/types.hpp"

namespace adkg::vc {

/// Merkle root over a fixed-length vector of byte strings.
struct VectorCommitment {
  Digest root{};
  std::uint32_t length = 0;

  friend auto operator<=>(const VectorCommitment&, const VectorCommitment&) = default;
};

/// Sibling path from leaf to root; empty for a length-1 vector.
struct OpeningProof {
  std::vector<Digest> siblings;
};

/// Leaves hash as H(0x00 || position || value) and inner nodes as
/// H(0x01 || left || right); the vector is padded to a power of two with a
/// fixed empty-leaf digest. Positions are zero-based.
VectorCommitment commit(std::span<const Bytes> values);

/// Throws Error(IndexOutOfRange) unless position < values.size().
OpeningProof open_prove(std::span<const Bytes> values, std::size_t position);

bool open_verify(const VectorCommitment& c, ByteView value, std::size_t position,
                 const OpeningProof& proof);

/// Proofs for every position at once; shares one tree build.
std::vector<OpeningProof> open_prove_all(std::span<const Bytes> values);

}  // namespace adkg::vc
