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

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical kernels.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;

/// e^{A t} from a 40-term Taylor series on A t / 2^s, squared back up.
inline Matrix taylor_exp(const Matrix& a, double t) {
  Matrix x = a * t;
  const double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (norm / std::ldexp(1.0, s) > 0.125) ++s;
  x /= std::ldexp(1.0, s);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k <= 40; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

namespace detail {

inline Matrix simpson(const std::function<Matrix(double)>& f, double a, double b,
                      const Matrix& fa, const Matrix& fm, const Matrix& fb,
                      double tol, int depth) {
  const double m = 0.5 * (a + b);
  const Matrix flm = f(0.5 * (a + m));
  const Matrix frm = f(0.5 * (m + b));
  const Matrix whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const Matrix left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Matrix right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Matrix diff = left + right - whole;
  if (depth <= 0 || diff.cwiseAbs().maxCoeff() <= 15.0 * tol) {
    return left + right + diff / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

}  // namespace detail

/// \int_a^b e^{A s} ds by adaptive composite Simpson over taylor_exp.
inline Matrix quad_exp_integral(const Matrix& a, double lo, double hi, double tol = 1e-13) {
  if (hi == lo) return Matrix::Zero(a.rows(), a.cols());
  std::function<Matrix(double)> f = [&](double s) { return taylor_exp(a, s); };
  const double mid = 0.5 * (lo + hi);
  return detail::simpson(f, lo, hi, f(lo), f(mid), f(hi), tol, 40);
}

/// Textbook finite-horizon LQR on x+ = A x + B u with stage cost
/// x'Qx + u'Ru and terminal x'Qf x. Returns K(k), u = -K(k) x.
inline std::vector<Matrix> finite_horizon_lqr(const Matrix& a, const Matrix& b,
                                              const Matrix& q, const Matrix& qf,
                                              const Matrix& r, int horizon) {
  std::vector<Matrix> gains(horizon);
  Matrix p = qf;
  for (int k = horizon - 1; k >= 0; --k) {
    const Matrix k_gain = (r + b.transpose() * p * b).ldlt().solve(b.transpose() * p * a);
    p = q + a.transpose() * p * (a - b * k_gain);
    p = 0.5 * (p + p.transpose()).eval();
    gains[k] = k_gain;
  }
  return gains;
}

/// Gains of one delayed controller via LQR on the explicitly augmented
/// system z = [x; u(k-1)]: dynamics [[Phi, G1], [0, 0]], input [[G0], [I]],
/// state cost diag(Q, 0).
inline std::vector<Matrix> augmented_delay_lqr(const Matrix& phi, const Matrix& g0,
                                               const Matrix& g1, const Matrix& q,
                                               const Matrix& qn, const Matrix& r,
                                               int horizon) {
  const auto m = phi.rows();
  const auto n = g0.cols();
  Matrix a = Matrix::Zero(m + n, m + n);
  a.topLeftCorner(m, m) = phi;
  a.topRightCorner(m, n) = g1;
  Matrix b(m + n, n);
  b.topRows(m) = g0;
  b.bottomRows(n).setIdentity();
  Matrix qa = Matrix::Zero(m + n, m + n);
  qa.topLeftCorner(m, m) = q;
  Matrix qfa = Matrix::Zero(m + n, m + n);
  qfa.topLeftCorner(m, m) = qn;
  return finite_horizon_lqr(a, b, qa, qfa, r, horizon);
}

/// Delay-free p-player feedback game: at each step, iterate best responses
///   A_i <- -(R_i + G_i' S_i G_i)^{-1} G_i' S_i (Phi + sum_{j != i} G_j A_j)
/// (Gauss-Seidel) until the update is below `tol`, then propagate
///   S_i <- Q_i + A_i' R_i A_i + Acl' S_i Acl,  Acl = Phi + sum_j G_j A_j.
/// Returns A_i(k) per step, u_i = A_i(k) x.
inline std::vector<std::vector<Matrix>> best_response_game(
    const Matrix& phi, const std::vector<Matrix>& g, const std::vector<Matrix>& q,
    const std::vector<Matrix>& qn, const std::vector<Matrix>& r, int horizon,
    double tol = 1e-14) {
  const std::size_t p = g.size();
  std::vector<Matrix> s = qn;
  std::vector<std::vector<Matrix>> out(horizon);
  for (int k = horizon - 1; k >= 0; --k) {
    std::vector<Matrix> a(p);
    for (std::size_t i = 0; i < p; ++i) a[i] = Matrix::Zero(g[i].cols(), phi.cols());
    for (int iter = 0; iter < 10000; ++iter) {
      double change = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        Matrix others = phi;
        for (std::size_t j = 0; j < p; ++j) {
          if (j != i) others += g[j] * a[j];
        }
        const Matrix next = -(r[i] + g[i].transpose() * s[i] * g[i])
                                 .ldlt()
                                 .solve(g[i].transpose() * s[i] * others);
        change = std::max(change, (next - a[i]).cwiseAbs().maxCoeff());
        a[i] = next;
      }
      if (change < tol) break;
    }
    Matrix acl = phi;
    for (std::size_t j = 0; j < p; ++j) acl += g[j] * a[j];
    for (std::size_t i = 0; i < p; ++i) {
      s[i] = q[i] + a[i].transpose() * r[i] * a[i] + acl.transpose() * s[i] * acl;
      s[i] = 0.5 * (s[i] + s[i].transpose()).eval();
    }
    out[k] = a;
  }
  return out;
}

/// Random Hurwitz matrix: a random matrix shifted left of its spectral
/// abscissa.
inline Matrix random_stable(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Matrix a(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) a(r, c) = u(rng);
  Eigen::EigenSolver<Matrix> eig(a, false);
  const double abscissa = eig.eigenvalues().real().maxCoeff();
  return a - (abscissa + 0.5) * Matrix::Identity(m, m);
}

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix a(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) a(r, c) = u(rng);
  return a;
}

/// Random symmetric positive definite matrix W W' + floor I.
inline Matrix random_spd(int m, std::mt19937_64& rng, double floor = 0.5) {
  const Matrix w = random_matrix(m, m, rng);
  return w * w.transpose() + floor * Matrix::Identity(m, m);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace oracle
