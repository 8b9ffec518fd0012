#include "adkg/scenario.hpp"

#include <algorithm>
#include <charconv>

#include "json.hpp"

namespace adkg::sim {

using ojson = nlohmann::ordered_json;

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Rb: return "rb";
    case Protocol::Vrb: return "vrb";
    case Protocol::Gather: return "gather";
    case Protocol::Pe: return "pe";
    case Protocol::Nwh: return "nwh";
    case Protocol::Adkg: return "adkg";
  }
  return "?";
}

Protocol parse_protocol(std::string_view name) {
  for (auto p : {Protocol::Rb, Protocol::Vrb, Protocol::Gather, Protocol::Pe, Protocol::Nwh, Protocol::Adkg})
    if (to_string(p) == name) return p;
  throw Error(ErrorCode::Config, "unknown protocol '" + std::string(name) + "'");
}

namespace {

std::uint64_t parse_u64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorCode::Config, std::string("bad ") + what + " '" + std::string(s) + "'");
  return v;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Validity Validity::parse(std::string_view spec) {
  Validity v;
  if (spec == "any") return v;
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw Error(ErrorCode::Config, "bad validity '" + std::string(spec) + "'");
  const auto head = spec.substr(0, colon);
  const auto arg = spec.substr(colon + 1);
  if (head == "max_len") {
    v.kind = Kind::MaxLen;
    v.limit = parse_u64(arg, "max_len");
  } else if (head == "max_words") {
    v.kind = Kind::MaxWords;
    v.limit = parse_u64(arg, "max_words");
  } else if (head == "prefix") {
    v.kind = Kind::Prefix;
    v.prefix = std::string(arg);
  } else {
    throw Error(ErrorCode::Config, "bad validity '" + std::string(spec) + "'");
  }
  return v;
}

std::string Validity::str() const {
  switch (kind) {
    case Kind::Any: return "any";
    case Kind::MaxLen: return "max_len:" + std::to_string(limit);
    case Kind::MaxWords: return "max_words:" + std::to_string(limit);
    case Kind::Prefix: return "prefix:" + prefix;
  }
  return "any";
}

bool Validity::operator()(const Bytes& value) const {
  switch (kind) {
    case Kind::Any: return true;
    case Kind::MaxLen: return value.size() <= limit;
    case Kind::MaxWords: return field::encode_bytes(value).size() <= limit;
    case Kind::Prefix:
      return value.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), value.begin());
  }
  return false;
}

bool Validity::accepts_words(std::span<const field::FieldElem> words) const {
  if (kind == Kind::Any) return true;
  if (kind == Kind::MaxWords) return words.size() <= limit;
  auto bytes = field::decode_bytes(words);
  return bytes && (*this)(*bytes);
}

const std::vector<std::string>& behavior_names() {
  static const std::vector<std::string> names = {"silent",           "bad_dealer",   "pe_withholder",
                                                 "nwh_equivocator", "stale_blamer", "invalid_input"};
  return names;
}

void ScenarioConfig::check() const {
  auto bad = [](const std::string& why) { throw Error(ErrorCode::InvalidScenario, why); };
  if (n == 0) bad("n must be positive");
  if (n < 3 * f + 1) bad("need n >= 3f + 1");
  if (n > 0xffff) bad("n too large");
  if (adversary.corrupt.size() > f) bad("more than f corrupt parties");
  for (const auto& [id, name] : adversary.corrupt) {
    if (id >= n) bad("corrupt party out of range");
    if (std::find(behavior_names().begin(), behavior_names().end(), name) == behavior_names().end())
      throw Error(ErrorCode::Config, "unknown behaviour '" + name + "'");
  }
  if (adversary.scheduler != "random" && adversary.scheduler != "fifo" && adversary.scheduler != "delay-target")
    throw Error(ErrorCode::Config, "unknown scheduler '" + adversary.scheduler + "'");
  if (adversary.target >= n) bad("scheduler target out of range");
  for (const auto& [a, b, w] : adversary.link_weights)
    if (a >= n || b >= n || !(w > 0.0)) bad("bad link weight");
  if (lambda < min_lambda_bits(n)) bad("lambda below 3 log2 n");
  if (lambda > 256) bad("lambda above 256");
  if (crypto != "sim-oracle") throw Error(ErrorCode::Config, "unknown crypto provider '" + crypto + "'");
  if (!inputs.empty() && inputs.size() != n) bad("inputs must list one value per party");
  if (rb_dealer >= n) bad("rb_dealer out of range");
  if (inputs.empty() && rb_words == 0) bad("rb_words must be positive");
  if (seed_end < seed_begin) bad("empty seed range");
  if (budget == 0) bad("budget must be positive");
  Validity::parse(validate);
}

Bytes ScenarioConfig::input_of(PartyId id, std::uint64_t seed) const {
  if (!inputs.empty()) return to_bytes(inputs.at(id));
  return to_bytes("in:" + std::to_string(id) + ":" + std::to_string(seed));
}

Words ScenarioConfig::rb_message(std::uint64_t seed) const {
  if (!inputs.empty()) return field::encode_bytes(to_bytes(inputs.at(rb_dealer)));
  Words w;
  w.reserve(rb_words);
  std::uint64_t state = splitmix(seed ^ 0x5eedULL);
  for (std::size_t k = 0; k < rb_words; ++k) {
    state = splitmix(state + k);
    w.push_back(field::FieldElem::reduce(state));
  }
  return w;
}

std::string ScenarioConfig::to_json() const {
  ojson j;
  j["protocol"] = to_string(protocol);
  j["n"] = n;
  j["f"] = f;
  j["inputs"] = inputs;
  j["validate"] = validate;
  j["rb_words"] = rb_words;
  j["rb_dealer"] = rb_dealer;
  ojson adv;
  ojson corrupt = ojson::object();
  for (const auto& [id, name] : adversary.corrupt) corrupt[std::to_string(id)] = name;
  adv["corrupt"] = corrupt;
  adv["scheduler"] = adversary.scheduler;
  adv["target"] = adversary.target;
  ojson links = ojson::array();
  for (const auto& [a, b, w] : adversary.link_weights) links.push_back({a, b, w});
  adv["link_weights"] = links;
  j["adversary"] = adv;
  j["seeds"] = std::to_string(seed_begin) + ".." + std::to_string(seed_end);
  j["lambda"] = lambda;
  j["budget"] = budget;
  j["crypto"] = crypto;
  return j.dump(2);
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    auto v = parse_u64(text, "seed");
    return {v, v};
  }
  auto a = parse_u64(text.substr(0, dots), "seed");
  auto b = parse_u64(text.substr(dots + 2), "seed");
  if (b < a) throw Error(ErrorCode::Config, "empty seed range");
  return {a, b};
}

ScenarioConfig ScenarioConfig::from_json(std::string_view text) {
  ScenarioConfig c;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::Config, "config must be an object");
    for (const auto& [key, _] : j.items()) {
      static const std::vector<std::string> known = {"protocol", "n",         "f",         "inputs",
                                                     "validate", "rb_words",  "rb_dealer", "adversary",
                                                     "seeds",    "lambda",    "budget",    "crypto"};
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw Error(ErrorCode::Config, "unknown key '" + key + "'");
    }
    if (j.contains("protocol")) c.protocol = parse_protocol(j.at("protocol").get<std::string>());
    if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
    if (j.contains("f")) c.f = j.at("f").get<std::size_t>();
    if (j.contains("inputs")) c.inputs = j.at("inputs").get<std::vector<std::string>>();
    if (j.contains("validate")) c.validate = j.at("validate").get<std::string>();
    if (j.contains("rb_words")) c.rb_words = j.at("rb_words").get<std::size_t>();
    if (j.contains("rb_dealer")) c.rb_dealer = j.at("rb_dealer").get<PartyId>();
    if (j.contains("lambda")) c.lambda = j.at("lambda").get<std::size_t>();
    if (j.contains("budget")) c.budget = j.at("budget").get<std::uint64_t>();
    if (j.contains("crypto")) c.crypto = j.at("crypto").get<std::string>();
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      auto range = s.is_string() ? parse_seed_range(s.get<std::string>())
                                 : std::pair{s.get<std::uint64_t>(), s.get<std::uint64_t>()};
      c.seed_begin = range.first;
      c.seed_end = range.second;
    }
    if (j.contains("adversary")) {
      const auto& a = j.at("adversary");
      if (a.contains("corrupt"))
        for (const auto& [id, name] : a.at("corrupt").items())
          c.adversary.corrupt[static_cast<PartyId>(parse_u64(id, "party"))] = name.get<std::string>();
      if (a.contains("scheduler")) c.adversary.scheduler = a.at("scheduler").get<std::string>();
      if (a.contains("target")) c.adversary.target = a.at("target").get<PartyId>();
      if (a.contains("link_weights"))
        for (const auto& l : a.at("link_weights"))
          c.adversary.link_weights.emplace_back(l.at(0).get<PartyId>(), l.at(1).get<PartyId>(),
                                                l.at(2).get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config: ") + e.what());
  }
  return c;
}

ScenarioConfig reference_config(Protocol p) {
  ScenarioConfig c;
  c.protocol = p;
  c.seed_end = 99;
  if (p == Protocol::Vrb) c.validate = "max_words:16";
  return c;
}

}  // namespace adkg::sim
