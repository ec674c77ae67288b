// Copyright 2026 The delay-lqgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// delay-lqgame: discretize delayed plants, synthesize distributed gain
// schedules offline, simulate them online, and sweep/compare schemes.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure, 64 usage.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "delay_lqgame/config.hpp"
#include "delay_lqgame/errors.hpp"
#include "delay_lqgame/io.hpp"
#include "delay_lqgame/schemes.hpp"
#include "delay_lqgame/simulate.hpp"
#include "delay_lqgame/synthesis.hpp"

namespace dlq = delay_lqgame;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitUsage = 64;

struct Options {
  std::string config;
  std::string out;
  std::string gains;
  std::string name = "generic";
  std::string scheme;
  std::string format = "csv";
  std::uint64_t seed = 0;
  int nash_trials = 0;
  double nash_magnitude = 1e-2;
};

void write_file(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw dlq::ValidationError("output-path", "cannot write '" + path + "'");
  out << content;
  if (!out) throw dlq::ValidationError("output-path", "write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dlq::ParseError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int thread_budget() {
  if (const char* env = std::getenv("DELAY_LQGAME_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw dlq::ValidationError("threads", "DELAY_LQGAME_THREADS must be a positive integer");
  }
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

dlq::ExperimentConfig load(const Options& o) {
  dlq::ExperimentConfig config = dlq::load_config_file(o.config);
  if (!o.scheme.empty()) config.scheme = dlq::scheme_from_string(o.scheme);
  return config;
}

void warn_total_cost(const dlq::GameWeights& weights) {
  if (!dlq::shared_state_weights(weights)) {
    std::cerr << "warning: controllers use different Q/QN; j_total uses controller 1's "
                 "state weights\n";
  }
}

int run_preset(const Options& o) {
  if (o.name != "generic" && o.name != "lfc") {
    throw dlq::ValidationError("preset", "unknown preset '" + o.name + "' (generic, lfc)");
  }
  const auto config = o.name == "generic" ? dlq::preset_generic() : dlq::preset_lfc();
  write_file(o.out, dlq::serialize_config(config));
  return kExitOk;
}

int run_discretize(const Options& o) {
  const auto config = load(o);
  write_file(o.out, dlq::discrete_plant_json(dlq::discretize(config.plant)));
  return kExitOk;
}

int run_synthesize(const Options& o) {
  const auto config = load(o);
  const auto plant = dlq::discretize(config.plant);
  const auto gains = dlq::synthesize_scheme(config, config.scheme);
  write_file(o.out, dlq::gains_json(gains, plant));
  return kExitOk;
}

int run_simulate(const Options& o) {
  const auto config = load(o);
  const auto plant = dlq::discretize(config.plant);
  std::optional<dlq::GainSchedule> gains;
  if (!o.gains.empty()) {
    auto loaded = dlq::parse_gains_json(read_file(o.gains));
    if (loaded.plant_fingerprint != dlq::plant_fingerprint(plant)) {
      throw dlq::ValidationError("plant-mismatch",
                                 "gain file was synthesized for a different plant");
    }
    gains.emplace(std::move(loaded.gains));
  } else {
    gains.emplace(dlq::synthesize_scheme(config, config.scheme));
  }
  warn_total_cost(config.weights);
  const auto tr = dlq::rollout(plant, *gains, config.weights, config.x0);

  dlq::RunMetadata meta{gains->scheme(), config.plant.delays(), o.seed, std::nullopt};
  if (o.nash_trials > 0) {
    meta.deviation = dlq::nash_deviation_check(plant, *gains, config.weights, config.x0,
                                               o.nash_trials, o.nash_magnitude, o.seed);
  }
  write_file(o.out, dlq::trajectory_csv(tr));
  if (!o.out.empty() && o.out != "-") {
    write_file(o.out + ".json", dlq::trajectory_sidecar(tr, meta));
  }
  return kExitOk;
}

int run_sweep(const Options& o) {
  const auto config = load(o);
  warn_total_cost(config.weights);
  const auto rows = dlq::sweep_delays(config, thread_budget());
  write_file(o.out, o.format == "json" ? dlq::sweep_json(rows) : dlq::sweep_csv(rows));
  return kExitOk;
}

int run_compare(const Options& o) {
  const auto config = load(o);
  warn_total_cost(config.weights);
  const auto rows = dlq::compare_schemes(config, thread_budget());
  write_file(o.out,
             o.format == "json" ? dlq::comparison_json(rows) : dlq::comparison_csv(rows));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed LQ control for networked plants with input delays"};
  app.require_subcommand(1);
  Options o;

  const auto scheme_check =
      CLI::IsMember({"proposed", "single_delayed", "delay_free_game"});

  auto* preset = app.add_subcommand("preset", "Write a bundled experiment configuration");
  preset->add_option("--name", o.name, "generic or lfc")->check(CLI::IsMember({"generic", "lfc"}));
  preset->add_option("--out", o.out, "Output configuration file (stdout if omitted)");

  auto* disc = app.add_subcommand("discretize", "Discretize the configured plant");
  disc->add_option("--config", o.config, "Configuration file")->required();
  disc->add_option("--out", o.out, "Output JSON file (stdout if omitted)");

  auto* synth = app.add_subcommand("synthesize", "Compute a gain schedule (offline phase)");
  synth->add_option("--config", o.config, "Configuration file")->required();
  synth->add_option("--out", o.out, "Output gain file")->required();
  synth->add_option("--scheme", o.scheme, "Override the configured scheme")->check(scheme_check);

  auto* sim = app.add_subcommand("simulate", "Roll out a gain schedule (online phase)");
  sim->add_option("--config", o.config, "Configuration file")->required();
  sim->add_option("--gains", o.gains, "Gain file from `synthesize` (synthesized if omitted)");
  sim->add_option("--out", o.out, "Trajectory CSV; a .json sidecar is written next to it")
      ->required();
  sim->add_option("--scheme", o.scheme, "Override the configured scheme")->check(scheme_check);
  sim->add_option("--seed", o.seed, "Seed for the deviation check");
  sim->add_option("--nash-trials", o.nash_trials, "Unilateral deviation trials to run")
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--nash-magnitude", o.nash_magnitude, "Deviation norm")
      ->check(CLI::NonNegativeNumber);

  auto* sweep = app.add_subcommand("sweep", "Proposed-scheme costs over the delay grid");
  sweep->add_option("--config", o.config, "Configuration file")->required();
  sweep->add_option("--out", o.out, "Output table (stdout if omitted)");
  sweep->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* compare = app.add_subcommand("compare", "All schemes at every delay point");
  compare->add_option("--config", o.config, "Configuration file")->required();
  compare->add_option("--out", o.out, "Output table (stdout if omitted)");
  compare->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*preset) return run_preset(o);
    if (*disc) return run_discretize(o);
    if (*synth) return run_synthesize(o);
    if (*sim) return run_simulate(o);
    if (*sweep) return run_sweep(o);
    if (*compare) return run_compare(o);
  } catch (const dlq::SingularityError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const dlq::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const dlq::ParseError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const dlq::Error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}
