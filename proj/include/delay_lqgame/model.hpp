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

// Plant, delay and cost-weight data model. Every type validates its
// invariants on construction and is immutable afterwards.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "delay_lqgame/lin_ops.hpp"

namespace delay_lqgame {

enum class Scheme { kProposed, kSingleDelayed, kDelayFreeGame };

std::string_view to_string(Scheme scheme);
/// Accepts "proposed", "single_delayed", "delay_free_game".
Scheme scheme_from_string(std::string_view name);

/// dx/dt = A x + sum_i B_i u_i(t - tau_i), sampled every h with identity
/// observation. Each tau_i is the total (sensor-to-controller plus
/// controller-to-actuator) delay and must satisfy 0 <= tau_i < h.
class ContinuousPlant {
 public:
  ContinuousPlant(Matrix a, std::vector<Matrix> b, std::vector<double> delays,
                  double h);

  const Matrix& a() const { return a_; }
  const std::vector<Matrix>& b() const { return b_; }
  const Matrix& b(int i) const { return b_.at(i); }
  const std::vector<double>& delays() const { return delays_; }
  double h() const { return h_; }

  int states() const { return static_cast<int>(a_.rows()); }
  int inputs() const { return static_cast<int>(b_.front().cols()); }
  int controllers() const { return static_cast<int>(b_.size()); }

  /// Same plant with a different delay vector (validated).
  ContinuousPlant with_delays(std::vector<double> delays) const;

 private:
  Matrix a_;
  std::vector<Matrix> b_;
  std::vector<double> delays_;
  double h_;
};

/// x(k+1) = Phi x(k) + sum_i [Gamma0_i u_i(k) + Gamma1_i u_i(k-1)].
class DiscretePlant {
 public:
  DiscretePlant(Matrix phi, std::vector<Matrix> gamma0,
                std::vector<Matrix> gamma1);

  const Matrix& phi() const { return phi_; }
  const Matrix& gamma0(int i) const { return gamma0_.at(i); }
  const Matrix& gamma1(int i) const { return gamma1_.at(i); }

  int states() const { return static_cast<int>(phi_.rows()); }
  int inputs() const { return static_cast<int>(gamma0_.front().cols()); }
  int controllers() const { return static_cast<int>(gamma0_.size()); }

  /// Layout of the augmented state [x; u_1(k-1); ...; u_p(k-1)].
  BlockLayout layout() const { return {states(), inputs(), controllers()}; }

  /// True when every Gamma1_i is exactly zero.
  bool delay_free() const;

  /// Plant seen by the listed controllers only, in the given order.
  DiscretePlant restricted(std::span<const int> controllers) const;

 private:
  Matrix phi_;
  std::vector<Matrix> gamma0_;
  std::vector<Matrix> gamma1_;
};

/// Zero-order-hold discretization with the per-controller delay split.
/// Throws ValidationError("delay-split") if Gamma0 + Gamma1 drifts from the
/// delay-free input matrix by more than 1e-9.
DiscretePlant discretize(const ContinuousPlant& plant);

/// Per-controller quadratic weights of
///   J_i = x(N)' QN_i x(N) + sum_k x(k)' Q_i x(k) + u_i(k)' R_i u_i(k).
///
/// Q_i and QN_i must be symmetric positive semi-definite and R_i symmetric
/// positive definite. Asymmetry up to 1e-12 is removed by symmetrizing.
class GameWeights {
 public:
  GameWeights(std::vector<Matrix> q, std::vector<Matrix> qn,
              std::vector<Matrix> r, int horizon);

  const Matrix& q(int i) const { return q_.at(i); }
  const Matrix& qn(int i) const { return qn_.at(i); }
  const Matrix& r(int i) const { return r_.at(i); }
  const std::vector<Matrix>& q() const { return q_; }
  const std::vector<Matrix>& qn() const { return qn_; }
  const std::vector<Matrix>& r() const { return r_; }
  int horizon() const { return horizon_; }
  int controllers() const { return static_cast<int>(q_.size()); }

  GameWeights restricted(std::span<const int> controllers) const;

  /// Throws DimensionError unless the weights fit `plant`.
  void check_compatible(const DiscretePlant& plant) const;

 private:
  std::vector<Matrix> q_;
  std::vector<Matrix> qn_;
  std::vector<Matrix> r_;
  int horizon_;
};

/// Per-controller delay lists; the sweep visits their Cartesian product.
struct DelaySweep {
  std::vector<std::vector<double>> grid;
};

struct ExperimentConfig {
  ContinuousPlant plant;
  GameWeights weights;
  Vector x0;
  Scheme scheme = Scheme::kProposed;
  std::optional<DelaySweep> sweep;
};

/// Checks the cross-field invariants of a configuration (x0 length, weight
/// dimensions, sweep grid shape and delay bounds).
void validate(const ExperimentConfig& config);

}  // namespace delay_lqgame
