#include "adkg/hash.hpp"

#include <sodium.h>

#include <mutex>

namespace adkg {

namespace {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialization failed");
  });
}

}  // namespace

Digest sha256(std::initializer_list<ByteView> parts) {
  ensure_sodium();
  crypto_hash_sha256_state st;
  crypto_hash_sha256_init(&st);
  for (auto part : parts) crypto_hash_sha256_update(&st, part.data(), part.size());
  Digest out{};
  crypto_hash_sha256_final(&st, out.data());
  return out;
}

Digest hmac_sha256(const Digest& key, ByteView message) {
  ensure_sodium();
  Digest out{};
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, message.data(), message.size());
  crypto_auth_hmacsha256_final(&st, out.data());
  return out;
}

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyMessage: return "EmptyMessage";
    case ErrorCode::DuplicateAbscissa: return "DuplicateAbscissa";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::TooFewShares: return "TooFewShares";
    case ErrorCode::DuplicateContributor: return "DuplicateContributor";
    case ErrorCode::ShareMismatch: return "ShareMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::Decode: return "Decode";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace adkg
