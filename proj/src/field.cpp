#include "adkg/field.hpp"

namespace adkg::field {

FieldElem FieldElem::from(std::uint64_t v) {
  if (v >= kModulus) throw Error(ErrorCode::InvalidInput, "word outside the field");
  return FieldElem(v, 0);
}

FieldElem FieldElem::pow(std::uint64_t e) const {
  FieldElem base = *this;
  FieldElem acc = FieldElem(1, 0);
  while (e != 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

Poly::Poly(std::vector<FieldElem> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == FieldElem{}) coeffs_.pop_back();
}

FieldElem Poly::operator()(FieldElem x) const {
  FieldElem acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<FieldElem> Poly::coeffs_padded(std::size_t count) const {
  if (coeffs_.size() > count) throw Error(ErrorCode::InvalidInput, "polynomial degree exceeds bound");
  auto out = coeffs_;
  out.resize(count);
  return out;
}

std::size_t chunk_size(std::size_t msg_len, std::size_t f) { return (msg_len + f) / (f + 1); }

std::vector<std::vector<FieldElem>> encode_chunks(std::span<const FieldElem> msg, std::size_t n,
                                                  std::size_t f) {
  if (msg.empty()) throw Error(ErrorCode::EmptyMessage, "nothing to encode");
  const std::size_t c = chunk_size(msg.size(), f);
  std::vector<std::vector<FieldElem>> chunks(n);
  for (std::size_t j = 0; j < n; ++j) {
    chunks[j].reserve(c);
    for (std::size_t k = 0; k < c; ++k) {
      FieldElem x = chunk_abscissa(j, c, k);
      FieldElem acc;
      for (auto it = msg.rbegin(); it != msg.rend(); ++it) acc = acc * x + *it;
      chunks[j].push_back(acc);
    }
  }
  return chunks;
}

namespace {

// Montgomery batch inversion. Inputs must be non-zero.
std::vector<FieldElem> batch_inverse(const std::vector<FieldElem>& xs) {
  std::vector<FieldElem> prefix(xs.size());
  FieldElem acc = FieldElem::reduce(1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    prefix[i] = acc;
    acc *= xs[i];
  }
  FieldElem inv = acc.inverse();
  std::vector<FieldElem> out(xs.size());
  for (std::size_t i = xs.size(); i-- > 0;) {
    out[i] = inv * prefix[i];
    inv *= xs[i];
  }
  return out;
}

}  // namespace

Poly interpolate(std::span<const Point> points, std::size_t degree_bound) {
  const std::size_t k = degree_bound + 1;
  if (points.size() < k) throw Error(ErrorCode::InsufficientPoints, "need degree_bound + 1 points");
  auto used = points.first(k);

  std::vector<FieldElem> xs;
  xs.reserve(k);
  for (const auto& p : used) xs.push_back(p.first);
  {
    auto sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorCode::DuplicateAbscissa, "abscissae must be pairwise distinct");
  }

  // master(x) = prod (x - x_i), degree k, lowest coefficient first.
  std::vector<FieldElem> master(k + 1);
  master[0] = FieldElem::reduce(1);
  std::size_t deg = 0;
  for (FieldElem xi : xs) {
    for (std::size_t d = deg + 2; d-- > 0;) {
      FieldElem shifted = d == 0 ? FieldElem{} : master[d - 1];
      master[d] = shifted - master[d] * xi;
    }
    ++deg;
  }

  // quotient_i = master / (x - x_i) by synthetic division; its value at x_i
  // is the barycentric denominator prod_{j != i} (x_i - x_j).
  std::vector<std::vector<FieldElem>> quotients(k, std::vector<FieldElem>(k));
  std::vector<FieldElem> denoms(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto& q = quotients[i];
    FieldElem carry;
    for (std::size_t d = k; d-- > 0;) {
      carry = master[d + 1] + carry * xs[i];
      q[d] = carry;
    }
    FieldElem at;
    for (std::size_t d = k; d-- > 0;) at = at * xs[i] + q[d];
    denoms[i] = at;
  }
  auto inv = batch_inverse(denoms);

  std::vector<FieldElem> coeffs(k);
  for (std::size_t i = 0; i < k; ++i) {
    FieldElem w = used[i].second * inv[i];
    if (w == FieldElem{}) continue;
    for (std::size_t d = 0; d < k; ++d) coeffs[d] += w * quotients[i][d];
  }
  return Poly(std::move(coeffs));
}

namespace {
constexpr std::size_t kLimbBytes = 7;
}

std::vector<FieldElem> encode_bytes(ByteView bytes) {
  std::vector<FieldElem> out;
  out.reserve(1 + (bytes.size() + kLimbBytes - 1) / kLimbBytes);
  out.push_back(FieldElem::reduce(bytes.size()));
  for (std::size_t pos = 0; pos < bytes.size(); pos += kLimbBytes) {
    std::uint64_t limb = 0;
    const std::size_t end = std::min(bytes.size(), pos + kLimbBytes);
    for (std::size_t i = pos; i < end; ++i) limb = (limb << 8) | bytes[i];
    out.push_back(FieldElem::reduce(limb));
  }
  return out;
}

std::optional<Bytes> decode_bytes(std::span<const FieldElem> words) {
  if (words.empty()) return std::nullopt;
  const std::uint64_t len = words[0].value();
  if (len > (std::uint64_t{1} << 32)) return std::nullopt;
  const std::size_t limbs = (len + kLimbBytes - 1) / kLimbBytes;
  if (words.size() != 1 + limbs) return std::nullopt;
  Bytes out;
  out.reserve(len);
  for (std::size_t l = 0; l < limbs; ++l) {
    const std::size_t width = std::min<std::size_t>(kLimbBytes, len - l * kLimbBytes);
    const std::uint64_t limb = words[1 + l].value();
    if (limb >> (8 * width)) return std::nullopt;
    for (std::size_t i = width; i-- > 0;) out.push_back(static_cast<std::uint8_t>(limb >> (8 * i)));
  }
  return out;
}

std::vector<FieldElem> encode_indices(const IndexSet& set) {
  std::vector<FieldElem> out;
  out.reserve(set.size());
  for (PartyId id : set) out.push_back(FieldElem::reduce(id));
  return out;
}

std::optional<IndexSet> decode_indices(std::span<const FieldElem> words, std::size_t n) {
  std::vector<PartyId> ids;
  ids.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto v = words[i].value();
    if (v >= n) return std::nullopt;
    if (i > 0 && v <= words[i - 1].value()) return std::nullopt;
    ids.push_back(static_cast<PartyId>(v));
  }
  return IndexSet(std::move(ids));
}

Bytes serialize_words(std::span<const FieldElem> words) {
  Bytes out;
  out.reserve(words.size() * 8);
  for (FieldElem w : words)
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(w.value() >> (8 * i)));
  return out;
}

}  // namespace adkg::field
