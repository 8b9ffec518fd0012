#pragma once

#include <initializer_list>

#include "adkg/types.hpp"

namespace adkg {

/// SHA-256 over the concatenation of the given parts.
Digest sha256(std::initializer_list<ByteView> parts);
inline Digest sha256(ByteView data) { return sha256({data}); }

/// HMAC-SHA-256 keyed by a 32-byte secret.
Digest hmac_sha256(const Digest& key, ByteView message);

}  // namespace adkg
