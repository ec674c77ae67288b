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

#include "delay_lqgame/synthesis.hpp"

#include <sstream>
#include <string>

#include "delay_lqgame/errors.hpp"

namespace delay_lqgame {
namespace {

[[noreturn]] void rethrow_at(const SingularityError& e, int step, int controller) {
  std::ostringstream msg;
  msg << "coupling-singularity at step " << step;
  if (controller >= 0) msg << ", controller " << controller + 1;
  msg << " (pivot " << e.pivot() << ")";
  throw SingularityError(msg.str(), e.pivot(), step, controller);
}

// [Phi | Gamma1_1 | ... | Gamma1_p]: the columns every controller's
// right-hand side multiplies.
Matrix open_loop_row(const DiscretePlant& plant) {
  const BlockLayout layout = plant.layout();
  Matrix w(layout.lead, layout.dim());
  w.leftCols(layout.lead) = plant.phi();
  for (int j = 0; j < plant.controllers(); ++j) {
    w.middleCols(layout.offset(j + 1), layout.block) = plant.gamma1(j);
  }
  return w;
}

// D_i' S for the augmented value matrix S: Gamma0_i' S_{1,:} + S_{i+1,:}.
Matrix weighted_input_rows(const DiscretePlant& plant, const Matrix& s, int i) {
  const BlockLayout layout = plant.layout();
  return plant.gamma0(i).transpose() * s.topRows(layout.lead) +
         s.middleRows(layout.offset(i + 1), layout.block);
}

void check_shapes(const DiscretePlant& plant, const GameWeights& weights) {
  weights.check_compatible(plant);
}

}  // namespace

GainSchedule::GainSchedule(int states, int inputs, int controllers, Scheme scheme,
                           std::vector<Matrix> steps)
    : states_(states),
      inputs_(inputs),
      controllers_(controllers),
      scheme_(scheme),
      steps_(std::move(steps)) {
  if (states <= 0 || inputs <= 0 || controllers <= 0 || steps_.empty()) {
    throw DimensionError("gain schedule needs positive dimensions and horizon");
  }
  const BlockLayout l = layout();
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    if (steps_[k].rows() != controllers * inputs || steps_[k].cols() != l.dim()) {
      throw DimensionError("gain schedule step " + std::to_string(k) +
                           " has the wrong shape");
    }
    require_finite(steps_[k], "gain schedule step " + std::to_string(k));
  }
}

Matrix GainSchedule::coefficients(int k, int i) const {
  return coefficients(k).middleRows(static_cast<Eigen::Index>(i) * inputs_, inputs_);
}

Matrix GainSchedule::a_coef(int k, int i) const {
  return coefficients(k, i).leftCols(states_);
}

Matrix GainSchedule::b_coef(int k, int i, int j) const {
  return coefficients(k, i).middleCols(layout().offset(j + 1), inputs_);
}

Matrix GainSchedule::gain(int k, int i) const { return -coefficients(k, i); }

std::vector<Matrix> terminal_values(const DiscretePlant& plant,
                                    const GameWeights& weights) {
  const BlockLayout layout = plant.layout();
  std::vector<Matrix> values;
  for (int i = 0; i < plant.controllers(); ++i) {
    Matrix s = Matrix::Zero(layout.dim(), layout.dim());
    block_set(s, layout, 0, 0, weights.qn(i));
    values.push_back(std::move(s));
  }
  return values;
}

Matrix closed_loop_for(const DiscretePlant& plant, const Matrix& coefficients, int i) {
  const BlockLayout layout = plant.layout();
  const int n = layout.block;
  Matrix c = Matrix::Zero(layout.dim(), layout.dim());
  c.topRows(layout.lead) = open_loop_row(plant);
  for (int j = 0; j < plant.controllers(); ++j) {
    if (j == i) continue;
    const auto row = coefficients.middleRows(static_cast<Eigen::Index>(j) * n, n);
    c.topRows(layout.lead) += plant.gamma0(j) * row;
    c.middleRows(layout.offset(j + 1), n) = row;
  }
  return c;
}

Matrix input_map_for(const DiscretePlant& plant, int i) {
  const BlockLayout layout = plant.layout();
  Matrix d = Matrix::Zero(layout.dim(), layout.block);
  d.topRows(layout.lead) = plant.gamma0(i);
  d.middleRows(layout.offset(i + 1), layout.block).setIdentity();
  return d;
}

std::vector<Matrix> update_values(const DiscretePlant& plant,
                                  const GameWeights& weights,
                                  const Matrix& coefficients,
                                  const std::vector<Matrix>& next_values) {
  const BlockLayout layout = plant.layout();
  std::vector<Matrix> values;
  for (int i = 0; i < plant.controllers(); ++i) {
    const Matrix& s = next_values[i];
    const Matrix c = closed_loop_for(plant, coefficients, i);
    const Matrix d = input_map_for(plant, i);
    Matrix p11 = c.transpose() * s * c;
    p11.topLeftCorner(layout.lead, layout.lead) += weights.q(i);
    const Matrix p22 = d.transpose() * s * d + weights.r(i);
    const Matrix gain =
        -coefficients.middleRows(static_cast<Eigen::Index>(i) * layout.block, layout.block);
    values.push_back(symmetrize(p11 - gain.transpose() * p22 * gain));
  }
  return values;
}

std::array<PlayerCoefficients, 2> two_player_coefficients(
    const DiscretePlant& plant, const GameWeights& weights,
    const std::vector<Matrix>& next_values) {
  const BlockLayout layout = plant.layout();
  std::array<PlayerCoefficients, 2> out;
  for (int i = 0; i < 2; ++i) {
    const int other = 1 - i;
    const Matrix& s = next_values[i];
    const Matrix g = weighted_input_rows(plant, s, i);
    const Matrix g_state = g.leftCols(layout.lead);
    const Matrix e = g_state * plant.gamma0(i) +
                     g.middleCols(layout.offset(i + 1), layout.block) + weights.r(i);
    const Matrix f = g_state * plant.gamma0(other) +
                     g.middleCols(layout.offset(other + 1), layout.block);

    auto& pc = out[i];
    pc.e = e;
    pc.a1 = solve(e, g_state * plant.phi());
    pc.b1 = solve(e, g_state * plant.gamma1(0));
    pc.c1 = solve(e, g_state * plant.gamma1(1));
    pc.a2 = solve(e, f);
    pc.b2 = pc.a2;
    pc.c2 = pc.a2;
  }
  return out;
}

GainSchedule synthesize_two(const DiscretePlant& plant, const GameWeights& weights,
                            const ValueObserver& observer) {
  if (plant.controllers() != 2) {
    throw DimensionError("synthesize_two requires exactly two controllers");
  }
  check_shapes(plant, weights);
  const BlockLayout layout = plant.layout();
  const int m = layout.lead;
  const int n = layout.block;
  const int horizon = weights.horizon();
  const Matrix id = Matrix::Identity(n, n);

  std::vector<Matrix> values = terminal_values(plant, weights);
  if (observer) observer(horizon, values);
  std::vector<Matrix> steps(horizon);

  for (int k = horizon - 1; k >= 0; --k) {
    std::array<PlayerCoefficients, 2> pc;
    try {
      pc = two_player_coefficients(plant, weights, values);
    } catch (const SingularityError& e) {
      rethrow_at(e, k, -1);
    }

    Matrix x(2 * n, layout.dim());
    for (int i = 0; i < 2; ++i) {
      const auto& own = pc[i];
      const auto& opp = pc[1 - i];
      try {
        // -A_i = a1_i + a2_i A_o, -A_o = a1_o + a2_o A_i, and the same for
        // the history coefficients with (b, c) in place of a.
        x.block(i * n, 0, n, m) = solve(id - own.a2 * opp.a2, own.a2 * opp.a1 - own.a1);
        x.block(i * n, layout.offset(1), n, n) =
            solve(id - own.b2 * opp.b2, own.b2 * opp.b1 - own.b1);
        x.block(i * n, layout.offset(2), n, n) =
            solve(id - own.c2 * opp.c2, own.c2 * opp.c1 - own.c1);
      } catch (const SingularityError& e) {
        rethrow_at(e, k, i);
      }
    }
    values = update_values(plant, weights, x, values);
    if (observer) observer(k, values);
    steps[k] = std::move(x);
  }
  return GainSchedule(m, n, 2, Scheme::kProposed, std::move(steps));
}

GainSchedule synthesize_multi(const DiscretePlant& plant, const GameWeights& weights,
                              const ValueObserver& observer) {
  check_shapes(plant, weights);
  const BlockLayout layout = plant.layout();
  const int m = layout.lead;
  const int n = layout.block;
  const int p = layout.count;
  const int horizon = weights.horizon();
  const Matrix open_loop = open_loop_row(plant);

  std::vector<Matrix> values = terminal_values(plant, weights);
  if (observer) observer(horizon, values);
  std::vector<Matrix> steps(horizon);

  for (int k = horizon - 1; k >= 0; --k) {
    // Row block i: E_i X_i + sum_{j != i} F_i^j X_j = -G_i [Phi | Gamma1_*],
    // X_i = [A_i | B_1^i | ... | B_p^i].
    Matrix coupling(p * n, p * n);
    Matrix rhs(p * n, layout.dim());
    for (int i = 0; i < p; ++i) {
      const Matrix g = weighted_input_rows(plant, values[i], i);
      const Matrix g_state = g.leftCols(m);
      for (int j = 0; j < p; ++j) {
        coupling.block(i * n, j * n, n, n) =
            g_state * plant.gamma0(j) + g.middleCols(layout.offset(j + 1), n);
      }
      coupling.block(i * n, i * n, n, n) += weights.r(i);
      rhs.middleRows(i * n, n) = -g_state * open_loop;
    }
    Matrix x;
    try {
      x = solve(coupling, rhs);
    } catch (const SingularityError& e) {
      rethrow_at(e, k, -1);
    }
    values = update_values(plant, weights, x, values);
    if (observer) observer(k, values);
    steps[k] = std::move(x);
  }
  return GainSchedule(m, n, p, Scheme::kProposed, std::move(steps));
}

GainSchedule synthesize_single_delayed(const DiscretePlant& plant,
                                       const GameWeights& weights,
                                       const ValueObserver& observer) {
  if (plant.controllers() != 1) {
    throw DimensionError("synthesize_single_delayed requires exactly one controller");
  }
  check_shapes(plant, weights);
  const int m = plant.states();
  const int n = plant.inputs();
  const int dim = m + n;
  const int horizon = weights.horizon();

  // z(k+1) = C z(k) + D u(k) with z = [x; u(k-1)].
  Matrix c = Matrix::Zero(dim, dim);
  c.topLeftCorner(m, m) = plant.phi();
  c.topRightCorner(m, n) = plant.gamma1(0);
  Matrix d(dim, n);
  d.topRows(m) = plant.gamma0(0);
  d.bottomRows(n).setIdentity();
  Matrix q11 = Matrix::Zero(dim, dim);
  q11.topLeftCorner(m, m) = weights.q(0);

  Matrix s = Matrix::Zero(dim, dim);
  s.topLeftCorner(m, m) = weights.qn(0);
  if (observer) observer(horizon, {s});
  std::vector<Matrix> steps(horizon);

  for (int k = horizon - 1; k >= 0; --k) {
    const Matrix p11 = c.transpose() * s * c + q11;
    const Matrix p12 = d.transpose() * s * c;
    const Matrix p22 = d.transpose() * s * d + weights.r(0);
    Matrix gain;
    try {
      gain = solve(p22, p12);
    } catch (const SingularityError& e) {
      rethrow_at(e, k, 0);
    }
    s = symmetrize(p11 - gain.transpose() * p22 * gain);
    if (observer) observer(k, {s});
    steps[k] = -gain;
  }
  return GainSchedule(m, n, 1, Scheme::kSingleDelayed, std::move(steps));
}

GainSchedule synthesize_delay_free_game(const DiscretePlant& plant,
                                        const GameWeights& weights,
                                        const ValueObserver& observer) {
  if (plant.controllers() != 2) {
    throw DimensionError("synthesize_delay_free_game requires exactly two controllers");
  }
  if (!plant.delay_free()) {
    throw ValidationError("delay-free",
                          "every Gamma1 must be zero; discretize with zero delays");
  }
  check_shapes(plant, weights);
  const BlockLayout layout = plant.layout();
  const int m = layout.lead;
  const int n = layout.block;
  const int horizon = weights.horizon();
  const Matrix id = Matrix::Identity(n, n);

  auto embed = [&](const std::array<Matrix, 2>& s) {
    std::vector<Matrix> out;
    for (const auto& si : s) {
      Matrix full = Matrix::Zero(layout.dim(), layout.dim());
      full.topLeftCorner(m, m) = si;
      out.push_back(std::move(full));
    }
    return out;
  };

  std::array<Matrix, 2> s = {weights.qn(0), weights.qn(1)};
  if (observer) observer(horizon, embed(s));
  std::vector<Matrix> steps(horizon);

  for (int k = horizon - 1; k >= 0; --k) {
    std::array<Matrix, 2> a1, a2, e;
    for (int i = 0; i < 2; ++i) {
      const Matrix& g = plant.gamma0(i);
      e[i] = weights.r(i) + g.transpose() * s[i] * g;
      try {
        a1[i] = solve(e[i], g.transpose() * s[i] * plant.phi());
        a2[i] = solve(e[i], g.transpose() * s[i] * plant.gamma0(1 - i));
      } catch (const SingularityError& err) {
        rethrow_at(err, k, i);
      }
    }
    std::array<Matrix, 2> a;
    for (int i = 0; i < 2; ++i) {
      const int o = 1 - i;
      try {
        a[i] = solve(id - a2[i] * a2[o], a2[i] * a1[o] - a1[i]);
      } catch (const SingularityError& err) {
        rethrow_at(err, k, i);
      }
    }
    for (int i = 0; i < 2; ++i) {
      const int o = 1 - i;
      const Matrix cl = plant.phi() + plant.gamma0(o) * a[o];
      s[i] = symmetrize(weights.q(i) + cl.transpose() * s[i] * cl -
                        a[i].transpose() * e[i] * a[i]);
    }
    if (observer) observer(k, embed(s));

    Matrix x = Matrix::Zero(2 * n, layout.dim());
    x.block(0, 0, n, m) = a[0];
    x.block(n, 0, n, m) = a[1];
    steps[k] = std::move(x);
  }
  return GainSchedule(m, n, 2, Scheme::kDelayFreeGame, std::move(steps));
}

}  // namespace delay_lqgame
