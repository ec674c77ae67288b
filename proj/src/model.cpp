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

#include "delay_lqgame/model.hpp"

#include <cmath>
#include <sstream>

#include "delay_lqgame/errors.hpp"

namespace delay_lqgame {
namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kSplitTolerance = 1e-9;

std::string indexed(std::string_view name, std::size_t i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}

void check_delay(double tau, double h, std::size_t i) {
  if (!std::isfinite(tau) || tau < 0.0 || tau >= h) {
    std::ostringstream msg;
    msg << "delay " << i << " = " << tau << " must satisfy 0 <= tau < h = "
        << h;
    throw ValidationError("delay-bound", msg.str());
  }
}

Matrix checked_weight(Matrix w, const std::string& name, bool definite) {
  if (w.rows() != w.cols() || w.rows() == 0) {
    throw ValidationError("dimension", name + " must be square");
  }
  if (!w.allFinite()) throw ValidationError("finite", name + " has non-finite entries");
  if (asymmetry(w) > kSymmetryTolerance) {
    throw ValidationError("symmetry", name + " is not symmetric");
  }
  w = symmetrize(w);
  if (definite) {
    if (Eigen::LLT<Matrix>(w).info() != Eigen::Success) {
      throw ValidationError("positive-definite",
                            name + " is not positive definite");
    }
  } else {
    const double floor = -kSymmetryTolerance * std::max(1.0, max_abs(w));
    if (min_eigenvalue(w) < floor) {
      throw ValidationError("positive-semidefinite",
                            name + " is not positive semi-definite");
    }
  }
  return w;
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kProposed:
      return "proposed";
    case Scheme::kSingleDelayed:
      return "single_delayed";
    case Scheme::kDelayFreeGame:
      return "delay_free_game";
  }
  return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "proposed") return Scheme::kProposed;
  if (name == "single_delayed") return Scheme::kSingleDelayed;
  if (name == "delay_free_game") return Scheme::kDelayFreeGame;
  throw ValidationError("scheme", "unknown scheme '" + std::string(name) + "'");
}

ContinuousPlant::ContinuousPlant(Matrix a, std::vector<Matrix> b,
                                 std::vector<double> delays, double h)
    : a_(std::move(a)), b_(std::move(b)), delays_(std::move(delays)), h_(h) {
  if (a_.rows() != a_.cols() || a_.rows() == 0) {
    throw ValidationError("dimension", "A must be a non-empty square matrix");
  }
  if (!a_.allFinite()) throw ValidationError("finite", "A has non-finite entries");
  if (b_.empty()) throw ValidationError("dimension", "at least one controller is required");
  if (delays_.size() != b_.size()) {
    throw ValidationError("dimension", "one delay per controller is required");
  }
  for (std::size_t i = 0; i < b_.size(); ++i) {
    if (b_[i].rows() != a_.rows() || b_[i].cols() == 0 ||
        b_[i].cols() != b_.front().cols()) {
      throw ValidationError("dimension",
                            indexed("B", i) + " must be M x N like B[0]");
    }
    if (!b_[i].allFinite()) {
      throw ValidationError("finite", indexed("B", i) + " has non-finite entries");
    }
  }
  if (!std::isfinite(h_) || h_ <= 0.0) {
    throw ValidationError("sampling-period", "h must be positive");
  }
  for (std::size_t i = 0; i < delays_.size(); ++i) check_delay(delays_[i], h_, i);
}

ContinuousPlant ContinuousPlant::with_delays(std::vector<double> delays) const {
  return ContinuousPlant(a_, b_, std::move(delays), h_);
}

DiscretePlant::DiscretePlant(Matrix phi, std::vector<Matrix> gamma0,
                             std::vector<Matrix> gamma1)
    : phi_(std::move(phi)),
      gamma0_(std::move(gamma0)),
      gamma1_(std::move(gamma1)) {
  if (phi_.rows() != phi_.cols() || phi_.rows() == 0) {
    throw DimensionError("Phi must be a non-empty square matrix");
  }
  if (gamma0_.empty() || gamma0_.size() != gamma1_.size()) {
    throw DimensionError("Gamma0 and Gamma1 need one entry per controller");
  }
  const auto n = gamma0_.front().cols();
  for (std::size_t i = 0; i < gamma0_.size(); ++i) {
    for (const Matrix* g : {&gamma0_[i], &gamma1_[i]}) {
      if (g->rows() != phi_.rows() || g->cols() != n || n == 0) {
        throw DimensionError(indexed("Gamma", i) + " must be M x N");
      }
      require_finite(*g, indexed("Gamma", i));
    }
  }
  require_finite(phi_, "Phi");
}

bool DiscretePlant::delay_free() const {
  for (const auto& g : gamma1_) {
    if (!(g.array() == 0.0).all()) return false;
  }
  return true;
}

DiscretePlant DiscretePlant::restricted(std::span<const int> controllers) const {
  std::vector<Matrix> g0;
  std::vector<Matrix> g1;
  for (int i : controllers) {
    g0.push_back(gamma0(i));
    g1.push_back(gamma1(i));
  }
  return DiscretePlant(phi_, std::move(g0), std::move(g1));
}

DiscretePlant discretize(const ContinuousPlant& plant) {
  const Matrix& a = plant.a();
  const double h = plant.h();
  const Matrix total = exp_integral(a, 0.0, h);
  std::vector<Matrix> g0;
  std::vector<Matrix> g1;
  for (int i = 0; i < plant.controllers(); ++i) {
    const double tau = plant.delays()[i];
    check_delay(tau, h, i);
    g0.push_back(exp_integral(a, 0.0, h - tau) * plant.b(i));
    g1.push_back(exp_integral(a, h - tau, h) * plant.b(i));

    const Matrix whole = total * plant.b(i);
    const double drift = max_abs(g0.back() + g1.back() - whole);
    if (drift > kSplitTolerance * (1.0 + max_abs(whole))) {
      std::ostringstream msg;
      msg << "controller " << i << ": Gamma0 + Gamma1 deviates by " << drift;
      throw ValidationError("delay-split", msg.str());
    }
  }
  return DiscretePlant(mat_exp(a, h), std::move(g0), std::move(g1));
}

GameWeights::GameWeights(std::vector<Matrix> q, std::vector<Matrix> qn,
                         std::vector<Matrix> r, int horizon)
    : horizon_(horizon) {
  if (q.empty() || q.size() != qn.size() || q.size() != r.size()) {
    throw ValidationError("dimension", "Q, QN and R need one entry per controller");
  }
  if (horizon <= 0) throw ValidationError("horizon", "horizon must be positive");
  for (std::size_t i = 0; i < q.size(); ++i) {
    q_.push_back(checked_weight(std::move(q[i]), indexed("Q", i), false));
    qn_.push_back(checked_weight(std::move(qn[i]), indexed("QN", i), false));
    r_.push_back(checked_weight(std::move(r[i]), indexed("R", i), true));
    if (q_[i].rows() != q_.front().rows() || qn_[i].rows() != q_.front().rows() ||
        r_[i].rows() != r_.front().rows()) {
      throw ValidationError("dimension", "weights must share dimensions");
    }
  }
}

GameWeights GameWeights::restricted(std::span<const int> controllers) const {
  std::vector<Matrix> q, qn, r;
  for (int i : controllers) {
    q.push_back(this->q(i));
    qn.push_back(this->qn(i));
    r.push_back(this->r(i));
  }
  return GameWeights(std::move(q), std::move(qn), std::move(r), horizon_);
}

void GameWeights::check_compatible(const DiscretePlant& plant) const {
  if (controllers() != plant.controllers()) {
    throw DimensionError("weights cover " + std::to_string(controllers()) +
                         " controllers, plant has " +
                         std::to_string(plant.controllers()));
  }
  if (q_.front().rows() != plant.states() || r_.front().rows() != plant.inputs()) {
    throw DimensionError("weight dimensions do not match the plant");
  }
}

void validate(const ExperimentConfig& config) {
  const auto& plant = config.plant;
  const auto& w = config.weights;
  if (w.controllers() != plant.controllers() ||
      w.q(0).rows() != plant.states() || w.r(0).rows() != plant.inputs()) {
    throw ValidationError("dimension", "weights do not match the plant");
  }
  if (config.x0.size() != plant.states()) {
    throw ValidationError("dimension", "x0 must have one entry per state");
  }
  if (!config.x0.allFinite()) throw ValidationError("finite", "x0 has non-finite entries");
  if (config.sweep) {
    const auto& grid = config.sweep->grid;
    if (static_cast<int>(grid.size()) != plant.controllers()) {
      throw ValidationError("dimension", "sweep needs one delay list per controller");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i].empty()) {
        throw ValidationError("dimension", "sweep delay list " + std::to_string(i) + " is empty");
      }
      for (double tau : grid[i]) check_delay(tau, plant.h(), i);
    }
  }
}

}  // namespace delay_lqgame
