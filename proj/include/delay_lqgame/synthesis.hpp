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

// Offline synthesis of feedback-Nash gain schedules for plants whose
// controllers see a delay of less than one sampling period.
//
// Every controller i applies
//
//   u_i(k) = A_i(k) x(k) + sum_j B_j^i(k) u_j(k-1) = -L_i(k) z(k),
//   z(k)   = [x(k); u_1(k-1); ...; u_p(k-1)],
//
// with u_j(-1) = 0. The coefficients are computed by a backward recursion
// on per-controller value matrices S^i(k) over the augmented state, where at
// each step every controller's gain is the exact best response to the
// others' step-k laws.

#include <array>
#include <functional>
#include <vector>

#include "delay_lqgame/lin_ops.hpp"
#include "delay_lqgame/model.hpp"

namespace delay_lqgame {

/// Time-indexed coefficient matrices of all controllers.
///
/// Step k stores the stacked pN x (M + pN) matrix whose i-th row block is
/// [A_i(k) | B_1^i(k) | ... | B_p^i(k)]. Gains L_i(k) are derived from it.
class GainSchedule {
 public:
  GainSchedule(int states, int inputs, int controllers, Scheme scheme,
               std::vector<Matrix> steps);

  int states() const { return states_; }
  int inputs() const { return inputs_; }
  int controllers() const { return controllers_; }
  int horizon() const { return static_cast<int>(steps_.size()); }
  Scheme scheme() const { return scheme_; }
  BlockLayout layout() const { return {states_, inputs_, controllers_}; }

  const Matrix& coefficients(int k) const { return steps_.at(k); }
  /// [A_i(k) | B_1^i(k) | ... | B_p^i(k)], N x (M + pN).
  Matrix coefficients(int k, int i) const;
  Matrix a_coef(int k, int i) const;
  Matrix b_coef(int k, int i, int j) const;
  /// L_i(k) = -[A_i(k) | B_1^i(k) | ... | B_p^i(k)].
  Matrix gain(int k, int i) const;

 private:
  int states_;
  int inputs_;
  int controllers_;
  Scheme scheme_;
  std::vector<Matrix> steps_;
};

/// Receives the value matrices S^1(k), ..., S^p(k) (augmented layout) for
/// k = N, N-1, ..., 0.
using ValueObserver = std::function<void(int k, const std::vector<Matrix>& values)>;

/// Per-controller step coefficients of the two-controller closed form.
/// For controller i with opponent o:
///   a1 = E^-1 G Phi,  b1 = E^-1 G Gamma1_1,  c1 = E^-1 G Gamma1_2,
///   a2 = b2 = c2 = E^-1 F,
/// where G = Gamma0_i' S_11 + S_{i+1,1}, E = D_i' S D_i + R_i and
/// F = G Gamma0_o + Gamma0_i' S_{1,o+1} + S_{i+1,o+1}.
struct PlayerCoefficients {
  Matrix a1, b1, c1;
  Matrix a2, b2, c2;
  Matrix e;
};

/// Coefficients of both controllers from S^1(k+1), S^2(k+1).
std::array<PlayerCoefficients, 2> two_player_coefficients(
    const DiscretePlant& plant, const GameWeights& weights,
    const std::vector<Matrix>& next_values);

/// Value matrices S^i(N): QN_i in the leading block, zeros elsewhere.
std::vector<Matrix> terminal_values(const DiscretePlant& plant,
                                    const GameWeights& weights);

/// One backward step of the value recursion: given the step-k coefficients
/// of every controller and S^i(k+1), returns the symmetrized S^i(k).
std::vector<Matrix> update_values(const DiscretePlant& plant,
                                  const GameWeights& weights,
                                  const Matrix& coefficients,
                                  const std::vector<Matrix>& next_values);

/// Closed-loop matrix C_i(k) seen by controller i and its input map D_i.
Matrix closed_loop_for(const DiscretePlant& plant, const Matrix& coefficients, int i);
Matrix input_map_for(const DiscretePlant& plant, int i);

/// Two controllers, closed-form coupled solve per step.
GainSchedule synthesize_two(const DiscretePlant& plant, const GameWeights& weights,
                            const ValueObserver& observer = {});

/// Any number of controllers; one stacked linear solve per step.
GainSchedule synthesize_multi(const DiscretePlant& plant, const GameWeights& weights,
                              const ValueObserver& observer = {});

/// One delayed controller on [x; u(k-1)].
GainSchedule synthesize_single_delayed(const DiscretePlant& plant,
                                       const GameWeights& weights,
                                       const ValueObserver& observer = {});

/// Two controllers without delays (every Gamma1 zero); value matrices live
/// on x alone. Throws ValidationError("delay-free") otherwise.
GainSchedule synthesize_delay_free_game(const DiscretePlant& plant,
                                        const GameWeights& weights,
                                        const ValueObserver& observer = {});

}  // namespace delay_lqgame
