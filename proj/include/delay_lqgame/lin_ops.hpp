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

// Dense matrix kernels used by discretization and gain synthesis.

#include <string_view>

#include <Eigen/Dense>

namespace delay_lqgame {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Throws DimensionError naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

/// e^{A t} by scaling and squaring around a Padé(6,6) core.
Matrix mat_exp(const Matrix& a, double t);

/// \int_from^to e^{A s} ds, evaluated through the top-right block of
/// exp([[A, I], [0, 0]] t).
Matrix exp_integral(const Matrix& a, double from, double to);

/// Solves A X = B with full pivoting. Throws SingularityError when the
/// smallest pivot falls below 1e-12 times the largest |entry| of A.
Matrix solve(const Matrix& a, const Matrix& b);

/// Relative pivot threshold used by `solve`.
inline constexpr double kSingularPivot = 1e-12;

/// Block layout [lead | block | block | ...] of an augmented vector or
/// square matrix. Block 0 has size `lead`; blocks 1..count have size `block`.
///
/// For the augmented state z = [x; u_1(k-1); ...; u_p(k-1)] this is
/// {M, N, p}.
struct BlockLayout {
  int lead = 0;
  int block = 0;
  int count = 0;

  int blocks() const { return count + 1; }
  int dim() const { return lead + count * block; }
  int offset(int m) const;
  int size(int m) const;
};

Matrix block_get(const Matrix& s, const BlockLayout& layout, int m, int n);
void block_set(Matrix& s, const BlockLayout& layout, int m, int n,
               const Matrix& value);

/// (W + W^T) / 2.
Matrix symmetrize(const Matrix& w);

/// max |W - W^T|.
double asymmetry(const Matrix& w);

/// Smallest eigenvalue of the symmetric part of W.
double min_eigenvalue(const Matrix& w);

/// max |entry|, 0 for empty matrices.
double max_abs(const Matrix& m);

}  // namespace delay_lqgame
