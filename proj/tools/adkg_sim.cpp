// Experiment runner: seeded sweeps, summaries, scaling fits.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "adkg/checks.hpp"

namespace fs = std::filesystem;
using namespace adkg;
using namespace adkg::sim;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Config, "cannot write " + path.string());
  out << text << '\n';
}

std::vector<std::size_t> parse_ns(const std::string& text) {
  std::vector<std::size_t> ns;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto [a, b] = parse_seed_range(item);
    if (a != b) throw Error(ErrorCode::Config, "bad n list '" + text + "'");
    ns.push_back(a);
  }
  return ns;
}

int cmd_run(const std::string& config, const std::string& seeds, const std::string& out_dir, bool trace) {
  auto cfg = ScenarioConfig::from_json(slurp(config));
  if (!seeds.empty()) std::tie(cfg.seed_begin, cfg.seed_end) = parse_seed_range(seeds);
  cfg.check();
  if (!out_dir.empty()) fs::create_directories(out_dir);

  std::vector<RunOutcome> runs;
  for (auto seed = cfg.seed_begin; seed <= cfg.seed_end; ++seed) {
    auto o = run_scenario(cfg, seed, trace && !out_dir.empty());
    if (!out_dir.empty()) {
      const auto stem = fs::path(out_dir) / ("seed-" + std::to_string(seed));
      write_file(stem.string() + ".metrics.json", o.to_json());
      if (trace) {
        std::ofstream t(stem.string() + ".trace.jsonl");
        t << o.trace;
      }
    }
    for (const auto& v : o.violations) std::cerr << "seed " << seed << ": " << v << '\n';
    o.trace.clear();
    runs.push_back(std::move(o));
  }
  const auto summary = summarize(to_string(cfg.protocol), runs);
  if (!out_dir.empty()) write_file(fs::path(out_dir) / "summary.json", summary.to_json());
  std::cout << summary.to_json() << '\n';
  return summary.violations == 0 ? 0 : 1;
}

int cmd_scaling(const std::string& protocol, const std::string& ns, const std::string& seeds,
                const std::string& config, const std::string& out_dir) {
  ScenarioConfig base = config.empty() ? reference_config(parse_protocol(protocol))
                                       : ScenarioConfig::from_json(slurp(config));
  if (!protocol.empty()) base.protocol = parse_protocol(protocol);
  if (!seeds.empty()) std::tie(base.seed_begin, base.seed_end) = parse_seed_range(seeds);
  auto r = scaling(base, parse_ns(ns));
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "scaling.json", r.to_json());
  }
  std::cout << r.to_json() << '\n';
  return r.violations == 0 ? 0 : 1;
}

int cmd_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read " + path);
  auto t = replay_trace(in);
  std::cout << "{\"words_total\": " << t.words_total << ", \"sends\": " << t.sends << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seeded simulation runner for the asynchronous key generation stack"};
  app.require_subcommand(1);

  std::string config, seeds, out_dir, trace = "off", protocol, ns = "4,7,10,13", trace_file;

  auto* run = app.add_subcommand("run", "Run a scenario over a seed range");
  run->add_option("--config", config, "Scenario file (JSON)")->required();
  run->add_option("--seeds", seeds, "Seed range A..B (inclusive); overrides the file");
  run->add_option("--out", out_dir, "Directory for per-seed metrics, traces and summary.json");
  run->add_option("--trace", trace, "Write traces (on|off)")->check(CLI::IsMember({"on", "off"}));

  auto* scale = app.add_subcommand("scaling", "Fit the log-log slope of mean words against n");
  scale->add_option("--protocol", protocol, "rb|vrb|gather|pe|nwh|adkg");
  scale->add_option("--n", ns, "Comma-separated n values, each 3f+1");
  scale->add_option("--seeds", seeds, "Seed range A..B");
  scale->add_option("--config", config, "Base scenario file");
  scale->add_option("--out", out_dir, "Directory for scaling.json");

  auto* ref = app.add_subcommand("reference-config", "Print a scenario file with every default spelled out");
  ref->add_option("--protocol", protocol, "rb|vrb|gather|pe|nwh|adkg");

  auto* replay = app.add_subcommand("replay", "Recompute word totals from a trace");
  replay->add_option("trace", trace_file, "Trace file (JSON lines)")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config, seeds, out_dir, trace == "on");
    if (*scale) {
      if (protocol.empty() && config.empty()) protocol = "adkg";
      return cmd_scaling(protocol, ns, seeds, config, out_dir);
    }
    if (*ref) {
      std::cout << reference_config(parse_protocol(protocol.empty() ? "adkg" : protocol)).to_json() << '\n';
      return 0;
    }
    if (*replay) return cmd_replay(trace_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
