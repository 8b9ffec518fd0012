#include <algorithm>
#include <numeric>
#include <random>

#include "adkg/field.hpp"
#include "doctest.h"

using namespace adkg;
using namespace adkg::field;

namespace {

constexpr std::uint64_t P = (std::uint64_t{1} << 61) - 1;

// Plain modular arithmetic, independent of FieldElem.
std::uint64_t mmul(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % P);
}
std::uint64_t madd(std::uint64_t a, std::uint64_t b) { return (a + b) % P; }
std::uint64_t msub(std::uint64_t a, std::uint64_t b) { return (a + P - b) % P; }
std::uint64_t mpow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mmul(a, a))
    if (e & 1) r = mmul(r, a);
  return r;
}

// Coefficients through k points by Gauss-Jordan on the Vandermonde system.
std::vector<std::uint64_t> vandermonde_solve(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pts) {
  const std::size_t k = pts.size();
  std::vector<std::vector<std::uint64_t>> a(k, std::vector<std::uint64_t>(k + 1));
  for (std::size_t r = 0; r < k; ++r) {
    std::uint64_t x = 1;
    for (std::size_t c = 0; c < k; ++c) {
      a[r][c] = x;
      x = mmul(x, pts[r].first);
    }
    a[r][k] = pts[r].second;
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[piv], a[c]);
    const auto inv = mpow(a[c][c], P - 2);
    for (auto& v : a[c]) v = mmul(v, inv);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const auto m = a[r][c];
      for (std::size_t j = c; j <= k; ++j) a[r][j] = msub(a[r][j], mmul(m, a[c][j]));
    }
  }
  std::vector<std::uint64_t> out(k);
  for (std::size_t r = 0; r < k; ++r) out[r] = a[r][k];
  return out;
}

FieldElem fe(std::uint64_t v) { return FieldElem::reduce(v); }

std::vector<std::uint64_t> values(const std::vector<FieldElem>& v) {
  std::vector<std::uint64_t> out;
  for (auto x : v) out.push_back(x.value());
  return out;
}

}  // namespace

TEST_CASE("field arithmetic matches plain modular arithmetic") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto a = rng() % P, b = rng() % P;
    CHECK((fe(a) * fe(b)).value() == mmul(a, b));
    CHECK((fe(a) + fe(b)).value() == madd(a, b));
    CHECK((fe(a) - fe(b)).value() == msub(a, b));
    if (a != 0) CHECK((fe(a) * fe(a).inverse()).value() == 1);
  }
  CHECK(fe(P).value() == 0);
  CHECK(fe(~std::uint64_t{0}).value() == (~std::uint64_t{0}) % P);
  CHECK_THROWS_AS(FieldElem::from(P), Error);
  CHECK(FieldElem::from(P - 1).value() == P - 1);
}

TEST_CASE("chunk size") {
  CHECK(chunk_size(4, 1) == 2);
  CHECK(chunk_size(1, 1) == 1);
  CHECK(chunk_size(2, 1) == 1);
  CHECK(chunk_size(7, 2) == 3);
}

TEST_CASE("encode_chunks worked examples") {
  auto chunks = encode_chunks(std::vector{fe(3), fe(2)}, 4, 1);
  REQUIRE(chunks.size() == 4);
  CHECK(values(chunks[0]) == std::vector<std::uint64_t>{5});
  CHECK(values(chunks[1]) == std::vector<std::uint64_t>{7});
  CHECK(values(chunks[2]) == std::vector<std::uint64_t>{9});
  CHECK(values(chunks[3]) == std::vector<std::uint64_t>{11});

  for (std::size_t f : {0u, 1u, 2u}) {
    auto c = encode_chunks(std::vector{fe(5)}, 3 * f + 1, f);
    for (const auto& ch : c) CHECK(values(ch) == std::vector<std::uint64_t>(chunk_size(1, f), 5));
  }

  auto four = encode_chunks(std::vector{fe(1), fe(2), fe(3), fe(4)}, 4, 1);
  for (const auto& ch : four) CHECK(ch.size() == 2);
  // p(x) = 1 + 2x + 3x^2 + 4x^3 at x = 3, 4 (party 1's chunk)
  CHECK(values(four[1]) == std::vector<std::uint64_t>{1 + 6 + 27 + 108, 1 + 8 + 48 + 256});

  CHECK_THROWS_AS(encode_chunks(std::vector<FieldElem>{}, 4, 1), Error);
}

TEST_CASE("interpolate worked examples") {
  std::vector<Point> pts{{fe(1), fe(5)}, {fe(2), fe(7)}};
  CHECK(values(interpolate(pts, 1).coeffs()) == std::vector<std::uint64_t>{3, 2});

  std::vector<Point> flat{{fe(1), fe(9)}, {fe(2), fe(9)}, {fe(3), fe(9)}};
  CHECK(values(interpolate(flat, 2).coeffs()) == std::vector<std::uint64_t>{9});

  std::vector<Point> zero{{fe(4), fe(0)}, {fe(8), fe(0)}};
  CHECK(interpolate(zero, 1).coeffs().empty());
}

TEST_CASE("interpolate errors") {
  std::vector<Point> one{{fe(1), fe(5)}};
  try {
    interpolate(one, 1);
    FAIL("expected InsufficientPoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientPoints);
  }
  std::vector<Point> dup{{fe(2), fe(5)}, {fe(2), fe(6)}};
  try {
    interpolate(dup, 1);
    FAIL("expected DuplicateAbscissa");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateAbscissa);
  }
}

TEST_CASE("interpolate agrees with a Vandermonde solve") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng() % 12;
    std::vector<Point> pts;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
    std::vector<std::uint64_t> xs;
    while (xs.size() < k) {
      auto x = rng() % P;
      if (std::find(xs.begin(), xs.end(), x) != xs.end()) continue;
      xs.push_back(x);
      auto y = rng() % P;
      pts.emplace_back(fe(x), fe(y));
      raw.emplace_back(x, y);
    }
    auto expect = vandermonde_solve(raw);
    CHECK(values(interpolate(pts, k - 1).coeffs_padded(k)) == expect);
  }
}

TEST_CASE("encode then interpolate from random subsets") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t f = rng() % 4;
    const std::size_t n = 3 * f + 1;
    const std::size_t len = 1 + rng() % 20;
    std::vector<FieldElem> msg;
    for (std::size_t i = 0; i < len; ++i) msg.push_back(fe(rng()));
    auto chunks = encode_chunks(msg, n, f);
    const auto c = chunk_size(len, f);
    std::vector<PartyId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<Point> pts;
    for (std::size_t t = 0; t < f + 1; ++t)
      for (std::size_t k = 0; k < c; ++k) pts.emplace_back(chunk_abscissa(ids[t], c, k), chunks[ids[t]][k]);
    std::shuffle(pts.begin(), pts.end(), rng);
    CHECK(interpolate(pts, len - 1).coeffs_padded(len) == msg);
  }
}

TEST_CASE("byte and index encodings") {
  for (std::size_t len : {0u, 1u, 6u, 7u, 8u, 14u, 15u, 100u}) {
    Bytes b(len);
    for (std::size_t i = 0; i < len; ++i) b[i] = static_cast<std::uint8_t>(i * 37 + 250);
    auto w = encode_bytes(b);
    CHECK(w.size() == 1 + (len + 6) / 7);
    CHECK(decode_bytes(w) == b);
  }
  auto w = encode_bytes(to_bytes("abc"));
  w[1] = fe(w[1].value() | (std::uint64_t{1} << 40));
  CHECK_FALSE(decode_bytes(w).has_value());
  CHECK_FALSE(decode_bytes({}).has_value());
  auto longer = encode_bytes(to_bytes("abc"));
  longer.push_back(fe(0));
  CHECK_FALSE(decode_bytes(longer).has_value());

  IndexSet s{0, 2, 3};
  CHECK(decode_indices(encode_indices(s), 4) == s);
  CHECK_FALSE(decode_indices(encode_indices(s), 3).has_value());
  CHECK_FALSE(decode_indices(std::vector{fe(2), fe(1)}, 4).has_value());
  CHECK_FALSE(decode_indices(std::vector{fe(1), fe(1)}, 4).has_value());
}

TEST_CASE("serialize_words is big-endian, eight bytes per word") {
  auto b = serialize_words(std::vector{fe(0x0102), fe(P - 1)});
  REQUIRE(b.size() == 16);
  CHECK(b[6] == 0x01);
  CHECK(b[7] == 0x02);
  CHECK(b[8] == 0x1f);
  CHECK(b[15] == 0xfe);
}
