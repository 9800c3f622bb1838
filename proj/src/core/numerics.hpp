// Copyright 2026 the decolab developers
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

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "core/errors.hpp"

namespace decolab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/** Default positive-semidefiniteness tolerance, relative to the Frobenius
    norm of the matrix under test. */
inline constexpr double kPsdTol = 1e-10;

/** Eigenvalues below this relative cutoff (vs. the largest) count as zero
    when determining numerical rank. */
inline constexpr double kRankCutoff = 1e-10;

/** Unit-trace tolerance for density matrices. */
inline constexpr double kTraceTol = 1e-9;

/** max_kl |M_kl - conj(M_lk)| <= 1e-12 * (1 + max_kl |M_kl|). */
bool is_hermitian(const Matrix& m);

/**
 * Result of a Hermitian eigendecomposition.
 *
 * Eigenvalues are sorted in descending order and eigenvectors (columns of
 * `eigenvectors`, same order) are orthonormal.  Each eigenvector is phase
 * fixed: its component of largest modulus (ties broken by lowest index) is
 * real and nonnegative, which makes the output deterministic and directly
 * comparable across runs.
 */
struct Spectrum {
  RealVector eigenvalues;
  Matrix eigenvectors;

  int dim() const { return static_cast<int>(eigenvalues.size()); }

  /** Number of eigenvalues above kRankCutoff * max|eigenvalue|. */
  int numerical_rank() const;

  /** V diag(lambda) V† (used by reconstruction checks). */
  Matrix reconstruct() const;
};

/** Diagonalize a Hermitian matrix.  Throws Error(NotHermitian) otherwise. */
Spectrum hermitian_eig(const Matrix& m);

/**
 * Factor a positive semidefinite matrix M into vectors g_0..g_{d-1}, each of
 * dimension r = numerical rank, such that <g_k|g_l> = M_kl.
 *
 * Lower-triangular convention: stacking conj(g_k) as row k produces the
 * Cholesky-style factor L with M = L L† and real nonnegative diagonal, so
 * the output is unique and deterministic.  Eigenvalues in [-tol, 0) are
 * clamped to zero; anything below -tol throws Error(NotPSD).  `tol` is
 * relative to the Frobenius norm.
 */
std::vector<Vector> psd_factor(const Matrix& m, double tol = kPsdTol);

/**
 * Von Neumann entropy in bits, -Tr[rho log2 rho], with 0 log 0 = 0
 * (eigenvalues below 1e-15 contribute nothing).
 *
 * Throws Error(NotPSD) for negative spectrum beyond tolerance and
 * Error(NotNormalized) when |Tr rho - 1| > 1e-9.
 */
double von_neumann_entropy(const Matrix& rho, double tol = kPsdTol);

/** Entropy in bits of a nonnegative weight vector (need not be normalized
    for the caller's purposes; zeros are skipped). */
double shannon_entropy(const RealVector& p);

/**
 * Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2,
 * clamped into [0, 1].  Both arguments must be density matrices (PSD, unit
 * trace within 1e-9); violations throw as in von_neumann_entropy.
 */
double state_fidelity(const Matrix& rho, const Matrix& sigma,
                      double tol = kPsdTol);

namespace detail {

/** Hermitian part (m + m†)/2; cheap guard before diagonalizing products. */
Matrix hermitian_part(const Matrix& m);

/** Check PSD-ness of an already validated Hermitian spectrum. */
void require_psd(const RealVector& eigenvalues, double tol_abs,
                 const char* what);

/** Absolute tolerance derived from a relative one: tol * max(1, ||m||_F). */
double absolute_tol(const Matrix& m, double tol);

}  // namespace detail

}  // namespace decolab
