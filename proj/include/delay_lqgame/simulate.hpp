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

// Online closed-loop rollout of a gain schedule, quadratic cost evaluation
// and the unilateral-deviation check of the equilibrium property.

#include <cstdint>
#include <vector>

#include "delay_lqgame/lin_ops.hpp"
#include "delay_lqgame/model.hpp"
#include "delay_lqgame/synthesis.hpp"

namespace delay_lqgame {

struct Trajectory {
  /// x(0), ..., x(N).
  std::vector<Vector> states;
  /// controls[i][k] = u_i(k), k = 0..N-1.
  std::vector<std::vector<Vector>> controls;
  /// J_i = x(N)' QN_i x(N) + sum_k x(k)' Q_i x(k) + u_i(k)' R_i u_i(k).
  std::vector<double> player_costs;
  /// J = x(N)' QN_1 x(N) + sum_k x(k)' Q_1 x(k) + sum_i u_i(k)' R_i u_i(k).
  double total_cost = 0.0;

  int horizon() const { return static_cast<int>(states.size()) - 1; }
  int controllers() const { return static_cast<int>(controls.size()); }

  /// z(k) = [x(k); u_1(k-1); ...; u_p(k-1)], zero history at k = 0.
  Vector augmented(int k) const;
};

struct Costs {
  double total = 0.0;
  std::vector<double> players;
};

/// Open-loop perturbation of one controller's input at one step.
struct Deviation {
  int controller = 0;
  int step = 0;
  Vector delta;
};

/// Runs the schedule from x0: u_i(k) = -L_i(k) z(k), then advances the
/// delayed dynamics. Costs are filled in.
Trajectory rollout(const DiscretePlant& plant, const GainSchedule& gains,
                   const GameWeights& weights, const Vector& x0);

/// As rollout, but adds `deviation.delta` to u_{controller}(step) after the
/// feedback law is evaluated. Later steps keep every feedback law.
Trajectory rollout(const DiscretePlant& plant, const GainSchedule& gains,
                   const GameWeights& weights, const Vector& x0,
                   const Deviation& deviation);

Costs evaluate_costs(const Trajectory& trajectory, const GameWeights& weights);

/// max_k |x(k+1) - Phi x(k) - sum_i [Gamma0_i u_i(k) + Gamma1_i u_i(k-1)]|.
double dynamics_residual(const DiscretePlant& plant, const Trajectory& trajectory);

/// True when all controllers share Q and QN, i.e. the total cost is
/// unambiguous.
bool shared_state_weights(const GameWeights& weights);

struct DeviationReport {
  int trials = 0;
  /// min over trials of J_i(deviated) - J_i(equilibrium).
  double min_delta = 0.0;
  int worst_trial = -1;
  /// J_i(deviated) - J_i(equilibrium) per trial, in trial order.
  std::vector<double> deltas;
  bool pass = true;
};

/// Each trial picks a controller i and step k uniformly, perturbs u_i(k) by
/// a random vector of norm `magnitude`, re-rolls the closed loop and records
/// the change of J_i. Passes iff every change is at least
/// -1e-6 (1 + J_i(equilibrium)). Trial t draws from a generator seeded with
/// (seed, t), so results do not depend on evaluation order.
DeviationReport nash_deviation_check(const DiscretePlant& plant,
                                     const GainSchedule& gains,
                                     const GameWeights& weights, const Vector& x0,
                                     int trials, double magnitude,
                                     std::uint64_t seed = 0);

/// Tolerance of the deviation check, relative to 1 + J_i.
inline constexpr double kNashTolerance = 1e-6;

}  // namespace delay_lqgame
