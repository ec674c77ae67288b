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

// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "delay_lqgame/config.hpp"
#include "delay_lqgame/errors.hpp"
#include "delay_lqgame/io.hpp"
#include "delay_lqgame/schemes.hpp"
#include "delay_lqgame/simulate.hpp"
#include "delay_lqgame/synthesis.hpp"
#include "oracles.hpp"

using namespace delay_lqgame;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates the worst observed error against a bound.
struct Bound {
  double limit;
  double worst = 0.0;
  void see(double err) { worst = std::max(worst, err); }
  bool ok() const { return worst <= limit; }
  std::string str() const {
    std::ostringstream s;
    s << "max err " << worst << " (bound " << limit << ")";
    return s.str();
  }
};

struct Instance {
  DiscretePlant plant;
  GameWeights weights;
};

Instance random_instance(std::mt19937_64& rng, int p, int m, bool delayed) {
  std::uniform_real_distribution<double> frac(0.0, 0.95);
  const double h = 0.05;
  std::vector<Matrix> b, q, qn, r;
  std::vector<double> delays;
  for (int i = 0; i < p; ++i) {
    b.push_back(oracle::random_matrix(m, 1, rng, 2.0));
    delays.push_back(delayed ? frac(rng) * h : 0.0);
    q.push_back(oracle::random_spd(m, rng));
    qn.push_back(oracle::random_spd(m, rng));
    r.push_back(oracle::random_spd(1, rng, 0.2));
  }
  const ContinuousPlant cp(oracle::random_stable(m, rng), b, delays, h);
  return {discretize(cp), GameWeights(q, qn, r, 50)};
}

double gain_diff(const GainSchedule& a, const GainSchedule& b) {
  double worst = 0.0;
  for (int k = 0; k < a.horizon(); ++k) {
    worst = std::max(worst, oracle::max_abs_diff(a.coefficients(k), b.coefficients(k)));
  }
  return worst;
}

std::string fmt(double v) { return format_double(v); }

std::string delays_str(const std::vector<double>& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? ", " : "") + fmt(d[i]);
  return s + ")";
}

// --- criterion helpers shared by the generic and LFC presets -------------

Outcome nash(const ExperimentConfig& cfg) {
  const DiscretePlant plant = discretize(cfg.plant);
  const GainSchedule g = synthesize_scheme(cfg, Scheme::kProposed);
  const DeviationReport rep = nash_deviation_check(plant, g, cfg.weights, cfg.x0, 200, 1e-2);
  return {rep.pass, "min delta " + fmt(rep.min_delta) + " over " + std::to_string(rep.trials) +
                        " trials"};
}

// Rows of a two-controller sweep arranged as table[i][j] with TD1 = grid[0][i].
template <typename F>
std::vector<std::vector<double>> table(const std::vector<SweepRow>& rows, std::size_t n1,
                                       std::size_t n2, F value) {
  std::vector<std::vector<double>> t(n1, std::vector<double>(n2));
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) t[i][j] = value(rows[i * n2 + j]);
  }
  return t;
}

// Counts violations of monotonicity; sign = +1 for non-decreasing, -1 for non-increasing.
int monotone_violations(const std::vector<std::vector<double>>& t, bool along_td1, int sign,
                        std::string& where) {
  int bad = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      const std::size_t ni = along_td1 ? i + 1 : i;
      const std::size_t nj = along_td1 ? j : j + 1;
      if (ni >= t.size() || nj >= t[i].size()) continue;
      const double step = sign * (t[ni][nj] - t[i][j]);
      const double slack = 1e-12 * std::max(std::abs(t[i][j]), std::abs(t[ni][nj]));
      if (step < -slack) {
        if (bad++ == 0) where = "cell (" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
    }
  }
  return bad;
}

Outcome total_trend(const std::vector<SweepRow>& rows, std::size_t n1, std::size_t n2) {
  const auto t = table(rows, n1, n2, [](const SweepRow& r) { return r.j_total; });
  std::string where;
  const int bad = monotone_violations(t, true, +1, where) + monotone_violations(t, false, +1, where);
  return {bad == 0, bad == 0 ? "J_total non-decreasing over " + std::to_string(n1) + "x" +
                                   std::to_string(n2) + " grid"
                             : std::to_string(bad) + " violations, first at " + where};
}

Outcome ratio_trend(const std::vector<SweepRow>& rows, std::size_t n1, std::size_t n2) {
  const auto t = table(rows, n1, n2, [](const SweepRow& r) { return r.ratio; });
  std::string w1, w2;
  const int bad1 = monotone_violations(t, true, -1, w1);
  const int bad2 = monotone_violations(t, false, +1, w2);
  if (bad1 + bad2 == 0) {
    return {true, "J1/J2 from " + fmt(t.front().back()) + " to " + fmt(t.back().front())};
  }
  std::string d;
  if (bad1) d += std::to_string(bad1) + " TD1 violations at " + w1 + "; ";
  if (bad2) d += std::to_string(bad2) + " TD2 violations at " + w2;
  return {false, d};
}

// Proposed vs both baselines, plus TD2-invariance of the single-delayed cost.
Outcome ordering(const ExperimentConfig& cfg) {
  const auto rows = compare_schemes(cfg, 1);
  std::map<Scheme, std::vector<const ComparisonRow*>> by;
  for (const auto& r : rows) by[r.scheme].push_back(&r);
  int bad = 0;
  std::string first;
  double worst_gap = -1e300;
  for (std::size_t n = 0; n < by[Scheme::kProposed].size(); ++n) {
    const double j = by[Scheme::kProposed][n]->j_total;
    const double best =
        std::min(by[Scheme::kSingleDelayed][n]->j_total, by[Scheme::kDelayFreeGame][n]->j_total);
    worst_gap = std::max(worst_gap, j - best);
    if (j > best + 1e-9 * (1.0 + j)) {
      if (bad++ == 0) {
        first = delays_str(by[Scheme::kProposed][n]->delays) + ": proposed " + fmt(j) +
                " > baseline " + fmt(best);
      }
    }
  }
  // Single-delayed cost must not depend on TD2.
  std::map<double, std::vector<double>> per_td1;
  for (const auto* r : by[Scheme::kSingleDelayed]) per_td1[r->delays[0]].push_back(r->j_total);
  double spread = 0.0;
  for (const auto& [td1, js] : per_td1) {
    const auto [lo, hi] = std::minmax_element(js.begin(), js.end());
    spread = std::max(spread, (*hi - *lo) / std::abs(*lo));
  }
  const bool invariant = spread <= 1e-12;
  std::string d = bad == 0 ? "proposed <= baselines at " +
                                 std::to_string(by[Scheme::kProposed].size()) + " points"
                           : std::to_string(bad) + " ordering violations, first " + first;
  d += "; single_delayed TD2 spread " + fmt(spread);
  return {bad == 0 && invariant, d};
}

// --- the ten criteria -------------------------------------------------------

Outcome criterion1() {
  Bound match{1e-8}, conserve{1e-9};
  auto check = [&](const ContinuousPlant& cp) {
    const DiscretePlant dp = discretize(cp);
    const double h = cp.h();
    match.see(oracle::max_abs_diff(dp.phi(), oracle::taylor_exp(cp.a(), h)));
    for (int i = 0; i < cp.controllers(); ++i) {
      const double tau = cp.delays()[i];
      const Matrix g0 = oracle::quad_exp_integral(cp.a(), 0.0, h - tau) * cp.b(i);
      const Matrix g1 = oracle::quad_exp_integral(cp.a(), h - tau, h) * cp.b(i);
      match.see(oracle::max_abs_diff(dp.gamma0(i), g0));
      match.see(oracle::max_abs_diff(dp.gamma1(i), g1));
      const Matrix whole = oracle::quad_exp_integral(cp.a(), 0.0, h) * cp.b(i);
      conserve.see(oracle::max_abs_diff(dp.gamma0(i) + dp.gamma1(i), whole));
    }
  };
  check(preset_generic().plant);
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> frac(0.0, 0.99);
  for (int t = 0; t < 20; ++t) {
    const int m = 1 + t % 6;
    const double h = 0.05;
    std::vector<Matrix> b = {oracle::random_matrix(m, 1, rng), oracle::random_matrix(m, 1, rng)};
    check(ContinuousPlant(oracle::random_stable(m, rng), b, {frac(rng) * h, frac(rng) * h}, h));
  }
  return {match.ok() && conserve.ok(), "oracle " + match.str() + "; split " + conserve.str()};
}

Outcome criterion2() {
  Bound b{1e-10};
  std::mt19937_64 rng(1002);
  for (int t = 0; t < 20; ++t) {
    const auto inst = random_instance(rng, 1, 1 + t % 5, true);
    const GainSchedule g = synthesize_single_delayed(inst.plant, inst.weights);
    const auto ref = oracle::augmented_delay_lqr(
        inst.plant.phi(), inst.plant.gamma0(0), inst.plant.gamma1(0), inst.weights.q(0),
        inst.weights.qn(0), inst.weights.r(0), inst.weights.horizon());
    for (int k = 0; k < g.horizon(); ++k) b.see(oracle::max_abs_diff(g.gain(k, 0), ref[k]));
  }
  return {b.ok(), "20 instances, N = 50, " + b.str()};
}

Outcome criterion3() {
  Bound b{1e-9};
  for (const auto& cfg : {preset_generic(), preset_lfc()}) {
    const DiscretePlant plant = discretize(cfg.plant);
    b.see(gain_diff(synthesize_multi(plant, cfg.weights), synthesize_two(plant, cfg.weights)));
  }
  std::mt19937_64 rng(1003);
  for (int t = 0; t < 20; ++t) {
    const auto inst = random_instance(rng, 2, 1 + t % 5, true);
    b.see(gain_diff(synthesize_multi(inst.plant, inst.weights),
                    synthesize_two(inst.plant, inst.weights)));
  }
  return {b.ok(), "2 presets + 20 instances, " + b.str()};
}

Outcome criterion4() {
  Bound b{1e-10};
  for (const auto& cfg : {preset_generic(), preset_lfc()}) {
    const DiscretePlant plant = discretize(cfg.plant.with_delays({0.0, 0.0}));
    b.see(gain_diff(synthesize_two(plant, cfg.weights),
                    synthesize_delay_free_game(plant, cfg.weights)));
  }
  std::mt19937_64 rng(1004);
  for (int t = 0; t < 20; ++t) {
    const auto inst = random_instance(rng, 2, 1 + t % 5, false);
    b.see(gain_diff(synthesize_two(inst.plant, inst.weights),
                    synthesize_delay_free_game(inst.plant, inst.weights)));
  }
  const Matrix one = Matrix::Constant(1, 1, 1.0);
  const Matrix zero = Matrix::Zero(1, 1);
  const DiscretePlant scalar(one, {one, one}, {zero, zero});
  const GameWeights w({one, one}, {one, one}, {one, one}, 1);
  Bound fixture{1e-12};
  for (const GainSchedule& g :
       {synthesize_two(scalar, w), synthesize_delay_free_game(scalar, w)}) {
    for (int i = 0; i < 2; ++i) fixture.see(std::abs(g.a_coef(0, i)(0, 0) + 1.0 / 3.0));
  }
  return {b.ok() && fixture.ok(), "tau = 0 " + b.str() + "; scalar -1/3 " + fixture.str()};
}

Outcome criterion5() {
  const Outcome g = nash(preset_generic());
  const Outcome l = nash(preset_lfc());
  return {g.pass && l.pass, "generic: " + g.detail + "; lfc: " + l.detail};
}

Outcome criterion6() { return total_trend(sweep_delays(preset_generic(), 1), 6, 6); }

Outcome criterion7() { return ratio_trend(sweep_delays(preset_generic(), 1), 6, 6); }

Outcome criterion8() {
  ExperimentConfig cfg = preset_generic();
  cfg.sweep = DelaySweep{{preset_generic().sweep->grid[0], {0.0, 0.02}}};
  return ordering(cfg);
}

Outcome criterion9() {
  const ExperimentConfig cfg = preset_lfc();
  const DiscretePlant plant = discretize(cfg.plant);
  double asym = 0.0, floor = 0.0;
  (void)synthesize_two(plant, cfg.weights, [&](int, const std::vector<Matrix>& values) {
    for (const auto& s : values) {
      asym = std::max(asym, asymmetry(s));
      floor = std::min(floor, min_eigenvalue(s));
    }
  });
  const bool psd = asym <= 1e-9 && floor >= -1e-9;
  const auto rows = sweep_delays(cfg, 1);
  const Outcome n = nash(cfg);
  const Outcome t = total_trend(rows, 4, 4);
  const Outcome r = ratio_trend(rows, 4, 4);
  const Outcome o = ordering(cfg);
  return {psd && n.pass && t.pass && r.pass && o.pass,
          "S asym " + fmt(asym) + ", min eig " + fmt(floor) + "; nash " +
              (n.pass ? "ok" : n.detail) + "; trend " + (t.pass ? "ok" : t.detail) +
              "; ratio " + (r.pass ? "ok" : r.detail) + "; ordering " +
              (o.pass ? "ok" : o.detail)};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion10() {
  const fs::path root =
      fs::temp_directory_path() / ("delay_lqgame_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(root);
  // Each pipeline writes its outputs into the run directory; the second run
  // uses a different worker count to catch scheduling-dependent output.
  const std::vector<std::string> pipelines = {
      "preset --name generic --out generic.json",
      "preset --name lfc --out lfc.json",
      "discretize --config generic.json --out generic_dp.json",
      "discretize --config lfc.json --out lfc_dp.json",
      "synthesize --config lfc.json --out gains_p.json",
      "synthesize --config lfc.json --scheme single_delayed --out gains_s.json",
      "synthesize --config lfc.json --scheme delay_free_game --out gains_d.json",
      "simulate --config lfc.json --gains gains_p.json --out sim_gains.csv",
      "simulate --config generic.json --nash-trials 50 --seed 3 --out sim.csv",
      "sweep --config generic.json --out sweep.csv",
      "sweep --config lfc.json --format json --out sweep.json",
      "compare --config generic.json --out compare.csv",
      "compare --config lfc.json --format json --out compare.json",
  };
  std::vector<std::string> runs = {"run1", "run2"};
  const char* threads[] = {"1", "4"};
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const fs::path dir = root / runs[r];
    fs::create_directories(dir);
    for (const auto& p : pipelines) {
      const std::string cmd = "cd \"" + dir.string() + "\" && DELAY_LQGAME_THREADS=" +
                              threads[r] + " \"" + DELAY_LQGAME_CLI + "\" " + p +
                              " >/dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        fs::remove_all(root);
        return {false, "pipeline failed: " + p};
      }
    }
  }
  int files = 0, differ = 0;
  std::string first;
  for (const auto& entry : fs::directory_iterator(root / runs[0])) {
    ++files;
    const fs::path other = root / runs[1] / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      if (differ++ == 0) first = entry.path().filename().string();
    }
  }
  fs::remove_all(root);
  return {differ == 0 && files > 0,
          std::to_string(files) + " output files compared" +
              (differ ? ", " + std::to_string(differ) + " differ (first " + first + ")" : "")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"discretization matches series/quadrature oracle", criterion1},
      {"single delayed controller equals augmented LQR", criterion2},
      {"stacked solve equals two-controller closed form", criterion3},
      {"zero-delay degeneration to the delay-free game", criterion4},
      {"no profitable unilateral deviation", criterion5},
      {"total cost grows with either delay", criterion6},
      {"cost ratio falls with TD1, rises with TD2", criterion7},
      {"proposed scheme dominates both baselines", criterion8},
      {"load-frequency preset", criterion9},
      {"CLI reruns are byte-identical", criterion10},
  };
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    Outcome o;
    try {
      o = criteria[n].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %zu: %s -- %s\n", o.pass ? "PASS" : "FAIL", n + 1,
                criteria[n].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%zu/%zu criteria passed in %.1f s\n", criteria.size() - failed, criteria.size(),
              secs);
  return failed == 0 ? 0 : 1;
}
