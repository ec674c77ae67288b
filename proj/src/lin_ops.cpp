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

#include "delay_lqgame/lin_ops.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "delay_lqgame/errors.hpp"

namespace delay_lqgame {
namespace {

void require_square(const Matrix& a, std::string_view op) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream msg;
    msg << op << ": expected a non-empty square matrix, got " << a.rows()
        << "x" << a.cols();
    throw DimensionError(msg.str());
  }
}

// Padé(6,6) coefficients c_k = (12-k)! 6! / (12! k! (6-k)!).
constexpr std::array<double, 7> kPade = {
    1.0,
    1.0 / 2.0,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
};

// Scaled norm bound for the Padé(6,6) core; truncation error is below
// 1e-17 relative there.
constexpr double kPadeNorm = 0.5;

}  // namespace

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw DimensionError(std::string(what) + ": non-finite entry");
  }
}

Matrix mat_exp(const Matrix& a, double t) {
  require_square(a, "mat_exp");
  if (!std::isfinite(t)) throw DimensionError("mat_exp: non-finite time");
  require_finite(a, "mat_exp");

  const Eigen::Index n = a.rows();
  Matrix x = a * t;
  const double norm = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > kPadeNorm) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kPadeNorm)));
    x /= std::ldexp(1.0, squarings);
  }

  const Matrix id = Matrix::Identity(n, n);
  Matrix power = id;
  Matrix numer = kPade[0] * id;
  Matrix denom = kPade[0] * id;
  for (std::size_t k = 1; k < kPade.size(); ++k) {
    power = power * x;
    numer += kPade[k] * power;
    denom += ((k % 2) ? -kPade[k] : kPade[k]) * power;
  }
  Matrix result = denom.partialPivLu().solve(numer);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Matrix exp_integral(const Matrix& a, double from, double to) {
  require_square(a, "exp_integral");
  if (!(from <= to)) {
    std::ostringstream msg;
    msg << "exp_integral: interval [" << from << ", " << to
        << "] has lower bound above upper bound";
    throw IntervalError(msg.str());
  }
  const Eigen::Index n = a.rows();
  Matrix aug = Matrix::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = a;
  aug.topRightCorner(n, n).setIdentity();

  auto primitive = [&](double t) -> Matrix {
    if (t == 0.0) return Matrix::Zero(n, n);
    return mat_exp(aug, t).topRightCorner(n, n);
  };
  if (from == to) return Matrix::Zero(n, n);
  return primitive(to) - primitive(from);
}

Matrix solve(const Matrix& a, const Matrix& b) {
  require_square(a, "solve");
  if (b.rows() != a.rows()) {
    std::ostringstream msg;
    msg << "solve: right-hand side has " << b.rows() << " rows, expected "
        << a.rows();
    throw DimensionError(msg.str());
  }
  const double scale = max_abs(a);
  Eigen::FullPivLU<Matrix> lu(a);
  const double pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(pivot >= kSingularPivot * scale) || scale == 0.0) {
    std::ostringstream msg;
    msg << "solve: matrix is numerically singular (pivot " << pivot
        << ", scale " << scale << ")";
    throw SingularityError(msg.str(), pivot);
  }
  return lu.solve(b);
}

int BlockLayout::offset(int m) const {
  if (m < 0 || m > count) {
    throw IndexError("block index " + std::to_string(m) + " outside [0, " +
                     std::to_string(count) + "]");
  }
  return m == 0 ? 0 : lead + (m - 1) * block;
}

int BlockLayout::size(int m) const {
  if (m < 0 || m > count) {
    throw IndexError("block index " + std::to_string(m) + " outside [0, " +
                     std::to_string(count) + "]");
  }
  return m == 0 ? lead : block;
}

Matrix block_get(const Matrix& s, const BlockLayout& layout, int m, int n) {
  if (s.rows() != layout.dim() || s.cols() != layout.dim()) {
    throw DimensionError("block_get: matrix does not match block layout");
  }
  return s.block(layout.offset(m), layout.offset(n), layout.size(m),
                 layout.size(n));
}

void block_set(Matrix& s, const BlockLayout& layout, int m, int n,
               const Matrix& value) {
  if (s.rows() != layout.dim() || s.cols() != layout.dim()) {
    throw DimensionError("block_set: matrix does not match block layout");
  }
  const int rows = layout.size(m);
  const int cols = layout.size(n);
  if (value.rows() != rows || value.cols() != cols) {
    throw DimensionError("block_set: block (" + std::to_string(m) + "," +
                         std::to_string(n) + ") must be " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  s.block(layout.offset(m), layout.offset(n), rows, cols) = value;
}

Matrix symmetrize(const Matrix& w) { return 0.5 * (w + w.transpose()); }

double asymmetry(const Matrix& w) {
  if (w.size() == 0) return 0.0;
  return (w - w.transpose()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& w) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(w),
                                            Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace delay_lqgame
