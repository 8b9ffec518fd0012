#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "adkg/reliable_broadcast.hpp"

namespace adkg::sim {

enum class Protocol { Rb, Vrb, Gather, Pe, Nwh, Adkg };

std::string_view to_string(Protocol p);
/// Throws Error(Config) on unknown names.
Protocol parse_protocol(std::string_view name);

/// External validity predicate named in scenario files:
///   any | max_len:N (bytes) | max_words:N (broadcast words) | prefix:STR
struct Validity {
  enum class Kind { Any, MaxLen, MaxWords, Prefix };
  Kind kind = Kind::Any;
  std::size_t limit = 0;
  std::string prefix;

  static Validity parse(std::string_view spec);
  std::string str() const;
  bool operator()(const Bytes& value) const;
  /// For validated broadcast, where messages are field words.
  bool accepts_words(std::span<const field::FieldElem> words) const;
};

struct AdversaryConfig {
  std::map<PartyId, std::string> corrupt;  // party -> behaviour plugin
  std::string scheduler = "random";        // random | fifo | delay-target
  PartyId target = 0;                      // for delay-target
  std::vector<std::tuple<PartyId, PartyId, double>> link_weights;
};

struct ScenarioConfig {
  Protocol protocol = Protocol::Adkg;
  std::size_t n = 4;
  std::size_t f = 1;
  std::vector<std::string> inputs;  // empty: generated per seed
  std::string validate = "prefix:in:";
  std::size_t rb_words = 8;  // generated broadcast length when inputs are empty
  PartyId rb_dealer = 0;
  AdversaryConfig adversary;
  std::uint64_t seed_begin = 0;
  std::uint64_t seed_end = 0;  // inclusive
  std::size_t lambda = 128;
  std::uint64_t budget = 1'000'000;
  std::string crypto = "sim-oracle";

  /// Throws InvalidScenario (or Config for unknown names).
  void check() const;
  bool corrupt(PartyId id) const { return adversary.corrupt.count(id) != 0; }

  Bytes input_of(PartyId id, std::uint64_t seed) const;
  Words rb_message(std::uint64_t seed) const;

  std::string to_json() const;
  /// Throws Error(Config) on malformed documents.
  static ScenarioConfig from_json(std::string_view text);
};

/// "A..B" (inclusive) or a single number.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(std::string_view text);

/// Defaults for one protocol with every field spelled out.
ScenarioConfig reference_config(Protocol p);

/// Names accepted in adversary.corrupt.
const std::vector<std::string>& behavior_names();

}  // namespace adkg::sim
