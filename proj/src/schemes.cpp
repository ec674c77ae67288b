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

#include "delay_lqgame/schemes.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "delay_lqgame/errors.hpp"

namespace delay_lqgame {
namespace {

// Runs fn(0..count-1) on up to `threads` workers. Results are written by
// index, so the output order never depends on scheduling.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, int threads, Fn fn) {
  std::vector<std::optional<T>> slots(count);
  const std::size_t workers =
      std::clamp<std::size_t>(threads > 0 ? threads : 1, 1, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// Widens a one-controller schedule to p controllers: controller 0 keeps its
// law with zero weight on the others' history, the rest apply zero input.
GainSchedule embed_first(const GainSchedule& single, int controllers, Scheme scheme) {
  const int m = single.states();
  const int n = single.inputs();
  const BlockLayout wide{m, n, controllers};
  std::vector<Matrix> steps;
  for (int k = 0; k < single.horizon(); ++k) {
    Matrix x = Matrix::Zero(controllers * n, wide.dim());
    x.topLeftCorner(n, m + n) = single.coefficients(k);
    steps.push_back(std::move(x));
  }
  return GainSchedule(m, n, controllers, scheme, std::move(steps));
}

GainSchedule proposed(const DiscretePlant& plant, const GameWeights& weights) {
  if (plant.controllers() == 2) return synthesize_two(plant, weights);
  return synthesize_multi(plant, weights);
}

GainSchedule retag(const GainSchedule& g, Scheme scheme) {
  std::vector<Matrix> steps;
  for (int k = 0; k < g.horizon(); ++k) steps.push_back(g.coefficients(k));
  return GainSchedule(g.states(), g.inputs(), g.controllers(), scheme, std::move(steps));
}

double ratio_of(const std::vector<double>& j) {
  return j.size() >= 2 ? j[0] / j[1] : 0.0;
}

}  // namespace

GainSchedule synthesize_scheme(const ExperimentConfig& config, Scheme scheme) {
  validate(config);
  const int p = config.plant.controllers();
  switch (scheme) {
    case Scheme::kProposed:
      return proposed(discretize(config.plant), config.weights);
    case Scheme::kSingleDelayed: {
      const int first[] = {0};
      const DiscretePlant plant = discretize(config.plant).restricted(first);
      const GainSchedule single =
          synthesize_single_delayed(plant, config.weights.restricted(first));
      return embed_first(single, p, Scheme::kSingleDelayed);
    }
    case Scheme::kDelayFreeGame: {
      const DiscretePlant nominal =
          discretize(config.plant.with_delays(std::vector<double>(p, 0.0)));
      if (p == 2) return synthesize_delay_free_game(nominal, config.weights);
      return retag(synthesize_multi(nominal, config.weights), Scheme::kDelayFreeGame);
    }
  }
  throw ValidationError("scheme", "unknown scheme");
}

SchemeRun run_scheme(const ExperimentConfig& config, Scheme scheme) {
  GainSchedule gains = synthesize_scheme(config, scheme);
  const DiscretePlant plant = discretize(config.plant);
  Trajectory tr = rollout(plant, gains, config.weights, config.x0);
  return SchemeRun{scheme, config.plant.delays(), std::move(gains), std::move(tr)};
}

std::vector<std::vector<double>> grid_points(const DelaySweep& sweep) {
  std::vector<std::vector<double>> points{{}};
  for (const auto& values : sweep.grid) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : points) {
      for (double v : values) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }
  return points;
}

std::vector<SweepRow> sweep_delays(const ExperimentConfig& config, int threads) {
  validate(config);
  if (!config.sweep) throw ValidationError("sweep", "configuration has no delay sweep");
  const auto points = grid_points(*config.sweep);
  return parallel_map<SweepRow>(points.size(), threads, [&](std::size_t idx) {
    const ContinuousPlant plant = config.plant.with_delays(points[idx]);
    const DiscretePlant dp = discretize(plant);
    const GainSchedule g = proposed(dp, config.weights);
    const Trajectory tr = rollout(dp, g, config.weights, config.x0);
    return SweepRow{points[idx], tr.total_cost, tr.player_costs, ratio_of(tr.player_costs)};
  });
}

std::vector<ComparisonRow> compare_schemes(const ExperimentConfig& config, int threads) {
  validate(config);
  const auto points = config.sweep ? grid_points(*config.sweep)
                                   : std::vector<std::vector<double>>{config.plant.delays()};
  constexpr std::size_t kSchemes = std::size(kAllSchemes);
  return parallel_map<ComparisonRow>(
      points.size() * kSchemes, threads, [&](std::size_t idx) {
        const auto& delays = points[idx / kSchemes];
        const Scheme scheme = kAllSchemes[idx % kSchemes];
        ExperimentConfig at{config.plant.with_delays(delays), config.weights, config.x0,
                            scheme, std::nullopt};
        const SchemeRun run = run_scheme(at, scheme);
        return ComparisonRow{scheme, delays, run.trajectory.total_cost,
                             run.trajectory.player_costs};
      });
}

}  // namespace delay_lqgame
