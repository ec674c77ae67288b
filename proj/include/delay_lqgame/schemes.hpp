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

// Side-by-side evaluation of the delay-aware distributed scheme and the two
// baselines on a common plant, initial state and cost convention:
//
//   proposed         gains for the true delayed plant
//   single_delayed   controller 1 designed alone on its delayed plant; the
//                    other controllers stay at zero input
//   delay_free_game  game gains designed as if all delays were zero, applied
//                    to the true delayed plant

#include <vector>

#include "delay_lqgame/model.hpp"
#include "delay_lqgame/simulate.hpp"
#include "delay_lqgame/synthesis.hpp"

namespace delay_lqgame {

inline constexpr Scheme kAllSchemes[] = {Scheme::kProposed, Scheme::kSingleDelayed,
                                         Scheme::kDelayFreeGame};

/// Gain schedule of `scheme` for the plant and weights of `config`, always
/// with one row block per controller of the plant.
GainSchedule synthesize_scheme(const ExperimentConfig& config, Scheme scheme);

struct SchemeRun {
  Scheme scheme;
  std::vector<double> delays;
  GainSchedule gains;
  Trajectory trajectory;
};

/// Synthesizes `scheme` and rolls it out on the true delayed plant.
SchemeRun run_scheme(const ExperimentConfig& config, Scheme scheme);

struct SweepRow {
  std::vector<double> delays;
  double j_total = 0.0;
  std::vector<double> j;
  /// J_1 / J_2; only meaningful with two or more controllers.
  double ratio = 0.0;
};

struct ComparisonRow {
  Scheme scheme;
  std::vector<double> delays;
  double j_total = 0.0;
  std::vector<double> j;
};

/// Cartesian product of the per-controller delay lists, the first
/// controller's list varying slowest.
std::vector<std::vector<double>> grid_points(const DelaySweep& sweep);

/// Proposed scheme at every grid point of `config.sweep`, in grid order.
/// Points are evaluated on up to `threads` threads.
std::vector<SweepRow> sweep_delays(const ExperimentConfig& config, int threads = 1);

/// All three schemes at every grid point (or at the configured delays when
/// no sweep is present). Rows come in grid order, schemes in kAllSchemes
/// order within a point.
std::vector<ComparisonRow> compare_schemes(const ExperimentConfig& config,
                                           int threads = 1);

}  // namespace delay_lqgame
