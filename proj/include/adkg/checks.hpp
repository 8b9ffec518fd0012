#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adkg/adversary.hpp"

namespace adkg::sim {

/// Result of one seeded run plus what the property checkers found.
struct RunOutcome {
  std::uint64_t seed = 0;
  RunMetrics metrics;
  std::vector<std::string> violations;  // "<property>: <detail>"
  std::map<std::string, bool> events;   // per-protocol statistics flags
  std::map<std::string, double> stats;
  std::string trace;

  bool ok() const { return violations.empty(); }
  std::string to_json() const;
};

/// One configured run: builds keys, nodes and network for (config, seed).
class Scenario {
 public:
  struct Options {
    bool trace = false;
    std::optional<bool> keep_log;                           // default: on for agreement protocols
    std::function<std::unique_ptr<Scheduler>()> scheduler;  // overrides the configured one
  };

  Scenario(const ScenarioConfig& cfg, std::uint64_t seed) : Scenario(cfg, seed, Options{}) {}
  Scenario(const ScenarioConfig& cfg, std::uint64_t seed, Options opts);

  RunMetrics run();
  /// Runs the property checkers on the finished run.
  RunOutcome evaluate() const;

  const ScenarioConfig& config() const { return cfg_; }
  const SimOracleProvider& crypto() const { return *crypto_; }
  Network& network() { return *net_; }
  bool honest(PartyId id) const { return !cfg_.corrupt(id); }
  /// Honest node, or the honest core of a corrupt one.
  const Node& node(PartyId id) const { return *nodes_.at(id); }
  std::vector<PartyId> honest_parties() const;

 private:
  void check_rb(RunOutcome& o) const;
  void check_gather(RunOutcome& o) const;
  void check_pe(RunOutcome& o) const;
  void check_nwh(RunOutcome& o) const;
  void check_adkg(RunOutcome& o) const;

  ScenarioConfig cfg_;
  std::uint64_t seed_;
  std::unique_ptr<SimOracleProvider> crypto_;
  std::unique_ptr<Network> net_;
  std::vector<const Node*> nodes_;
  std::optional<RunMetrics> metrics_;
};

RunOutcome run_scenario(const ScenarioConfig& cfg, std::uint64_t seed, bool trace = false);

/// Aggregate over a seed sweep.
struct Summary {
  std::string protocol;
  std::size_t runs = 0;
  std::size_t violations = 0;             // total across runs
  std::size_t runs_with_violations = 0;
  std::size_t agreement_violations = 0;
  std::size_t budget_exhausted = 0;
  double mean_words = 0;
  double mean_depth = 0;
  std::optional<double> alpha_frequency;    // pe: unanimous honest output equal to an honest input
  std::optional<double> strict_frequency;   // pe: global winner honest and in the core
  std::optional<double> quality_frequency;  // nwh/adkg: decided an honest input in view 1
  std::optional<double> mean_decided_view;
  std::optional<double> p50_decided_view;
  std::optional<double> p90_decided_view;
  std::optional<std::uint32_t> max_decided_view;
  std::map<std::string, std::size_t> violation_counts;  // by property

  std::string to_json() const;
};

Summary summarize(std::string_view protocol, const std::vector<RunOutcome>& runs);

struct ScalingPoint {
  std::size_t n = 0;
  double mean_words = 0;
};
struct ScalingResult {
  std::string protocol;
  std::vector<ScalingPoint> points;
  double slope = 0;
  std::size_t violations = 0;
  std::string to_json() const;
};

/// Least-squares slope of log(words) against log(n); needs three distinct n
/// (InsufficientPoints otherwise).
double loglog_slope(const std::vector<ScalingPoint>& points);

/// Mean words per n over the base config's seed range, f = (n - 1) / 3.
ScalingResult scaling(const ScenarioConfig& base, const std::vector<std::size_t>& ns);

}  // namespace adkg::sim
