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

#pragma once

// File formats: trajectory CSV plus JSON sidecar, gain-schedule JSON, sweep
// and comparison tables. Floating-point values are written in the shortest
// decimal form that reads back to the identical double, so every file is
// byte-reproducible and gain files round-trip exactly.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "delay_lqgame/model.hpp"
#include "delay_lqgame/schemes.hpp"
#include "delay_lqgame/simulate.hpp"
#include "delay_lqgame/synthesis.hpp"

namespace delay_lqgame {

std::string format_double(double value);

/// 16 hex digits identifying Phi and every Gamma bit-for-bit.
std::string plant_fingerprint(const DiscretePlant& plant);

/// Header `k,x_1..x_M,u_1_1..u_p_N`; one row per k = 0..N, control fields
/// empty on the final row.
std::string trajectory_csv(const Trajectory& trajectory);

/// Reads states and controls back from trajectory_csv output. Costs are left
/// at zero.
Trajectory parse_trajectory_csv(std::string_view text);

struct RunMetadata {
  Scheme scheme = Scheme::kProposed;
  std::vector<double> delays;
  std::uint64_t seed = 0;
  std::optional<DeviationReport> deviation;
};

std::string trajectory_sidecar(const Trajectory& trajectory, const RunMetadata& meta);

std::string discrete_plant_json(const DiscretePlant& plant);

/// Gain schedule with dimensions, scheme and the plant fingerprint.
std::string gains_json(const GainSchedule& gains, const DiscretePlant& plant);

struct LoadedGains {
  GainSchedule gains;
  std::string plant_fingerprint;
};

LoadedGains parse_gains_json(std::string_view text);

/// Header `td1,td2,j_total,j_1,j_2,ratio` (one td/j column per controller;
/// ratio only with two or more controllers).
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);

/// Header `scheme,td1,td2,j_total,j_1,j_2`.
std::string comparison_csv(const std::vector<ComparisonRow>& rows);
std::string comparison_json(const std::vector<ComparisonRow>& rows);

}  // namespace delay_lqgame
