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

#include "delay_lqgame/simulate.hpp"

#include <limits>
#include <random>

#include "delay_lqgame/errors.hpp"

namespace delay_lqgame {
namespace {

void check_contract(const DiscretePlant& plant, const GainSchedule& gains,
                    const GameWeights& weights, const Vector& x0) {
  if (gains.controllers() != plant.controllers() ||
      gains.states() != plant.states() || gains.inputs() != plant.inputs()) {
    throw DimensionError("gain schedule does not match the plant");
  }
  weights.check_compatible(plant);
  if (gains.horizon() != weights.horizon()) {
    throw DimensionError("gain schedule horizon differs from the weights' horizon");
  }
  if (x0.size() != plant.states()) {
    throw DimensionError("x0 must have one entry per state");
  }
}

Trajectory run(const DiscretePlant& plant, const GainSchedule& gains,
               const GameWeights& weights, const Vector& x0,
               const Deviation* deviation) {
  check_contract(plant, gains, weights, x0);
  const int p = plant.controllers();
  const int n = plant.inputs();
  const int horizon = gains.horizon();
  const BlockLayout layout = plant.layout();

  Trajectory tr;
  tr.states.reserve(horizon + 1);
  tr.states.push_back(x0);
  tr.controls.assign(p, {});

  Vector z = Vector::Zero(layout.dim());
  for (int k = 0; k < horizon; ++k) {
    const Vector& x = tr.states.back();
    z.head(layout.lead) = x;
    // Every controller reads the same z(k); the exchange happens afterwards.
    const Vector u = gains.coefficients(k) * z;

    Vector next = plant.phi() * x;
    for (int i = 0; i < p; ++i) {
      Vector ui = u.segment(i * n, n);
      if (deviation && deviation->controller == i && deviation->step == k) {
        ui += deviation->delta;
      }
      next += plant.gamma0(i) * ui + plant.gamma1(i) * z.segment(layout.offset(i + 1), n);
      tr.controls[i].push_back(ui);
    }
    for (int i = 0; i < p; ++i) z.segment(layout.offset(i + 1), n) = tr.controls[i].back();
    tr.states.push_back(std::move(next));
  }

  const Costs costs = evaluate_costs(tr, weights);
  tr.player_costs = costs.players;
  tr.total_cost = costs.total;
  return tr;
}

double quad(const Vector& v, const Matrix& w) { return v.dot(w * v); }

}  // namespace

Vector Trajectory::augmented(int k) const {
  const int m = static_cast<int>(states.front().size());
  const int n = controls.empty() ? 0 : static_cast<int>(controls.front().front().size());
  Vector z = Vector::Zero(m + controllers() * n);
  z.head(m) = states.at(k);
  if (k > 0) {
    for (int i = 0; i < controllers(); ++i) z.segment(m + i * n, n) = controls[i].at(k - 1);
  }
  return z;
}

Trajectory rollout(const DiscretePlant& plant, const GainSchedule& gains,
                   const GameWeights& weights, const Vector& x0) {
  return run(plant, gains, weights, x0, nullptr);
}

Trajectory rollout(const DiscretePlant& plant, const GainSchedule& gains,
                   const GameWeights& weights, const Vector& x0,
                   const Deviation& deviation) {
  if (deviation.controller < 0 || deviation.controller >= plant.controllers() ||
      deviation.step < 0 || deviation.step >= gains.horizon() ||
      deviation.delta.size() != plant.inputs()) {
    throw DimensionError("deviation does not fit the schedule");
  }
  return run(plant, gains, weights, x0, &deviation);
}

Costs evaluate_costs(const Trajectory& trajectory, const GameWeights& weights) {
  const int p = trajectory.controllers();
  const int horizon = trajectory.horizon();
  if (p != weights.controllers() || horizon != weights.horizon()) {
    throw DimensionError("trajectory does not match the weights");
  }
  for (const auto& u : trajectory.controls) {
    if (static_cast<int>(u.size()) != horizon) {
      throw DimensionError("control sequence length differs from the horizon");
    }
  }

  Costs costs;
  costs.players.assign(p, 0.0);
  for (int k = 0; k < horizon; ++k) {
    const Vector& x = trajectory.states[k];
    costs.total += quad(x, weights.q(0));
    for (int i = 0; i < p; ++i) {
      const double effort = quad(trajectory.controls[i][k], weights.r(i));
      costs.players[i] += quad(x, weights.q(i)) + effort;
      costs.total += effort;
    }
  }
  const Vector& xn = trajectory.states.back();
  costs.total += quad(xn, weights.qn(0));
  for (int i = 0; i < p; ++i) costs.players[i] += quad(xn, weights.qn(i));
  return costs;
}

double dynamics_residual(const DiscretePlant& plant, const Trajectory& trajectory) {
  double worst = 0.0;
  for (int k = 0; k < trajectory.horizon(); ++k) {
    Vector r = trajectory.states[k + 1] - plant.phi() * trajectory.states[k];
    for (int i = 0; i < plant.controllers(); ++i) {
      r -= plant.gamma0(i) * trajectory.controls[i][k];
      if (k > 0) r -= plant.gamma1(i) * trajectory.controls[i][k - 1];
    }
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

bool shared_state_weights(const GameWeights& weights) {
  for (int i = 1; i < weights.controllers(); ++i) {
    if (weights.q(i) != weights.q(0) || weights.qn(i) != weights.qn(0)) return false;
  }
  return true;
}

DeviationReport nash_deviation_check(const DiscretePlant& plant,
                                     const GainSchedule& gains,
                                     const GameWeights& weights, const Vector& x0,
                                     int trials, double magnitude,
                                     std::uint64_t seed) {
  const Trajectory base = rollout(plant, gains, weights, x0);
  const int p = plant.controllers();
  const int n = plant.inputs();

  DeviationReport report;
  report.trials = trials;
  report.min_delta = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    Deviation dev;
    dev.controller = std::uniform_int_distribution<int>(0, p - 1)(rng);
    dev.step = std::uniform_int_distribution<int>(0, gains.horizon() - 1)(rng);
    std::normal_distribution<double> normal;
    Vector dir(n);
    do {
      for (int c = 0; c < n; ++c) dir[c] = normal(rng);
    } while (dir.norm() == 0.0);
    dev.delta = magnitude * dir / dir.norm();

    const Trajectory deviated = rollout(plant, gains, weights, x0, dev);
    const double equilibrium = base.player_costs[dev.controller];
    const double delta = deviated.player_costs[dev.controller] - equilibrium;
    report.deltas.push_back(delta);
    if (delta < report.min_delta) {
      report.min_delta = delta;
      report.worst_trial = t;
    }
    if (delta < -kNashTolerance * (1.0 + equilibrium)) report.pass = false;
  }
  if (trials == 0) report.min_delta = 0.0;
  return report;
}

}  // namespace delay_lqgame
