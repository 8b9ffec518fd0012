#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "adkg/types.hpp"

namespace adkg::field {

/// Mersenne prime 2^61 - 1. One residue is one metered word.
inline constexpr std::uint64_t kModulus = (std::uint64_t{1} << 61) - 1;

/// Residue modulo kModulus, always canonical in [0, kModulus).
class FieldElem {
 public:
  constexpr FieldElem() = default;

  /// Rejects out-of-range input rather than reducing it; message words must
  /// already be canonical when they enter the field.
  static FieldElem from(std::uint64_t v);
  /// Reduces any 64-bit value.
  static constexpr FieldElem reduce(std::uint64_t v) {
    v = (v & kModulus) + (v >> 61);
    if (v >= kModulus) v -= kModulus;
    return FieldElem(v, 0);
  }

  constexpr std::uint64_t value() const { return v_; }

  friend constexpr FieldElem operator+(FieldElem a, FieldElem b) {
    std::uint64_t s = a.v_ + b.v_;
    if (s >= kModulus) s -= kModulus;
    return FieldElem(s, 0);
  }
  friend constexpr FieldElem operator-(FieldElem a, FieldElem b) {
    return FieldElem(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + kModulus - b.v_, 0);
  }
  friend constexpr FieldElem operator*(FieldElem a, FieldElem b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a.v_) * b.v_;
    std::uint64_t lo = static_cast<std::uint64_t>(p) & kModulus;
    std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
    std::uint64_t s = lo + hi;
    if (s >= kModulus) s -= kModulus;
    return FieldElem(s, 0);
  }
  FieldElem& operator+=(FieldElem o) { return *this = *this + o; }
  FieldElem& operator-=(FieldElem o) { return *this = *this - o; }
  FieldElem& operator*=(FieldElem o) { return *this = *this * o; }

  FieldElem pow(std::uint64_t e) const;
  /// Multiplicative inverse; the inverse of zero is defined as zero.
  FieldElem inverse() const { return pow(kModulus - 2); }

  friend constexpr bool operator==(FieldElem, FieldElem) = default;
  friend constexpr auto operator<=>(FieldElem a, FieldElem b) { return a.v_ <=> b.v_; }

 private:
  constexpr FieldElem(std::uint64_t v, int) : v_(v) {}

  std::uint64_t v_ = 0;
};

using Point = std::pair<FieldElem, FieldElem>;

/// Polynomial with coefficients lowest degree first. Canonical form has no
/// trailing zero coefficients; the zero polynomial has no coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<FieldElem> coeffs);

  FieldElem operator()(FieldElem x) const;
  const std::vector<FieldElem>& coeffs() const { return coeffs_; }
  /// Coefficients padded with zeros to exactly `count` entries. Fails if the
  /// polynomial has degree >= count.
  std::vector<FieldElem> coeffs_padded(std::size_t count) const;
  /// Degree, with the zero polynomial reported as 0.
  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  std::vector<FieldElem> coeffs_;
};

/// Evaluations per party: ceil(msg_len / (f + 1)).
std::size_t chunk_size(std::size_t msg_len, std::size_t f);

/// Treats msg as coefficients of p and returns n chunks; chunk j (zero-based)
/// holds p(j*c + 1), ..., p((j+1)*c).
std::vector<std::vector<FieldElem>> encode_chunks(std::span<const FieldElem> msg, std::size_t n,
                                                  std::size_t f);

/// Abscissa of the k-th (zero-based) evaluation in party j's chunk.
inline FieldElem chunk_abscissa(std::size_t j, std::size_t c, std::size_t k) {
  return FieldElem::reduce(static_cast<std::uint64_t>(j * c + k + 1));
}

/// Unique polynomial of degree <= degree_bound through the first
/// degree_bound + 1 points (barycentric Lagrange, exact inverses).
Poly interpolate(std::span<const Point> points, std::size_t degree_bound);

/// Packs bytes into field words: one length word followed by 7-byte limbs.
std::vector<FieldElem> encode_bytes(ByteView bytes);
/// Inverse of encode_bytes; nullopt on any non-canonical encoding.
std::optional<Bytes> decode_bytes(std::span<const FieldElem> words);

/// One word per index, ascending.
std::vector<FieldElem> encode_indices(const IndexSet& set);
/// nullopt unless strictly ascending and every index < n.
std::optional<IndexSet> decode_indices(std::span<const FieldElem> words, std::size_t n);

/// Canonical 8-byte big-endian serialization of a word list (commitment leaves).
Bytes serialize_words(std::span<const FieldElem> words);

}  // namespace adkg::field
