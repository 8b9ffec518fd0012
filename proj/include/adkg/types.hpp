#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace adkg {

/// Zero-based party index. Abscissae and other one-based quantities are
/// derived from it where needed.
using PartyId = std::uint32_t;

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;
using Signature = Digest;

enum class ErrorCode {
  EmptyMessage,
  DuplicateAbscissa,
  InsufficientPoints,
  TooFewShares,
  DuplicateContributor,
  ShareMismatch,
  IndexOutOfRange,
  InvalidInput,
  InvalidScenario,
  BudgetExhausted,
  Decode,
  Config,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Sorted, duplicate-free set of party indices. Kept as a flat vector since
/// the sets are small and compared often.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<PartyId> ids) : ids_(ids) { normalize(); }
  explicit IndexSet(std::vector<PartyId> ids) : ids_(std::move(ids)) { normalize(); }

  void insert(PartyId id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) ids_.insert(it, id);
  }
  bool contains(PartyId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }
  bool subset_of(const IndexSet& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
  }
  IndexSet united(const IndexSet& other) const {
    IndexSet out;
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                   std::back_inserter(out.ids_));
    return out;
  }
  IndexSet intersected(const IndexSet& other) const {
    IndexSet out;
    std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                          std::back_inserter(out.ids_));
    return out;
  }

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  const std::vector<PartyId>& ids() const { return ids_; }

  auto operator<=>(const IndexSet&) const = default;

 private:
  void normalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  std::vector<PartyId> ids_;
};

std::string to_hex(ByteView bytes);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) {
  auto view = as_bytes(s);
  return {view.begin(), view.end()};
}

/// Number of parties that must be heard from: n - f.
inline std::size_t quorum(std::size_t n, std::size_t f) { return n - f; }

}  // namespace adkg
