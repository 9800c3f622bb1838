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

#include <cstdint>
#include <vector>

#include "core/numerics.hpp"

namespace decolab {

/** Off-diagonal magnitudes must stay below 1 - kStrictMargin for a channel
    to count as strictly decohering. */
inline constexpr double kStrictMargin = 1e-10;

/**
 * A validated correlation matrix: Hermitian, positive semidefinite, unit
 * diagonal.  These are exactly the matrices whose entrywise (Schur) product
 * with a state defines a completely positive trace-preserving map that
 * leaves every diagonal element untouched.
 *
 * After the tolerance checks pass, the stored diagonal is set to exactly 1
 * so that contracts phrased as exact (identity preservation, diagonal
 * invariance) hold bitwise.  The eigendecomposition computed during
 * validation is cached; eigenvalue order is descending.
 */
class CorrelationMatrix {
 public:
  /** Throws NotHermitian / NotPSD / DiagonalNotUnit (with the offending
      index in the message).  `tol` is relative to the Frobenius norm for
      the PSD check and absolute for the unit-diagonal check. */
  static CorrelationMatrix validate(const Matrix& xi, double tol = kPsdTol);

  int dim() const { return static_cast<int>(xi_.rows()); }
  const Matrix& matrix() const { return xi_; }
  /** Numerical rank of the matrix (eigenvalues above kRankCutoff * max). */
  int rank() const { return rank_; }
  const Spectrum& spectrum() const { return spectrum_; }

 private:
  CorrelationMatrix(Matrix xi, Spectrum spectrum, int rank)
      : xi_(std::move(xi)), spectrum_(std::move(spectrum)), rank_(rank) {}

  Matrix xi_;
  Spectrum spectrum_;
  int rank_;
};

/** A quantum state: Hermitian, PSD, unit trace within 1e-9. */
class DensityMatrix {
 public:
  static DensityMatrix validate(const Matrix& rho, double tol = kPsdTol);

  /** Wrap without re-validation; reserved for outputs of maps that preserve
      the density-matrix properties by construction. */
  static DensityMatrix trusted(Matrix rho) {
    return DensityMatrix(std::move(rho));
  }

  int dim() const { return static_cast<int>(rho_.rows()); }
  const Matrix& matrix() const { return rho_; }

 private:
  explicit DensityMatrix(Matrix rho) : rho_(std::move(rho)) {}
  Matrix rho_;
};

/**
 * The decoherence channel attached to a correlation matrix.  Both pictures
 * act entrywise in the fixed computational basis (the basis is part of the
 * definition, never a parameter):
 *
 *   Heisenberg:   E(O)_kl   = xi_kl  O_kl
 *   Schrodinger:  E_S(rho)_kl = xi_lk rho_kl
 *
 * The two are adjoint to each other: Tr[E(O) rho] = Tr[O E_S(rho)].
 */
class SchurChannel {
 public:
  explicit SchurChannel(CorrelationMatrix xi);

  static SchurChannel from_matrix(const Matrix& xi, double tol = kPsdTol) {
    return SchurChannel(CorrelationMatrix::validate(xi, tol));
  }

  int dim() const { return correlation_.dim(); }
  const CorrelationMatrix& correlation() const { return correlation_; }
  const Matrix& xi() const { return correlation_.matrix(); }

  /** True when every off-diagonal magnitude is below 1 - 1e-10; iterating a
      strict channel kills all coherences in the limit. */
  bool strict() const { return strict_; }

  Matrix apply_heisenberg(const Matrix& obs) const;
  DensityMatrix apply_schrodinger(const DensityMatrix& rho) const;

 private:
  CorrelationMatrix correlation_;
  bool strict_;
};

/**
 * Kraus operators of a Schur channel.  All operators are diagonal; the
 * canonical set comes from the spectral decomposition of the correlation
 * matrix, E_i = sqrt(lambda_i) diag(conj(v_i)), one per nonzero eigenvalue,
 * so its size equals the matrix rank.
 */
struct KrausSet {
  std::vector<Matrix> operators;
  bool canonical = false;

  int count() const { return static_cast<int>(operators.size()); }
};

KrausSet canonical_kraus(const SchurChannel& ch);

/** sum_i E_i† O E_i. */
Matrix kraus_apply_heisenberg(const KrausSet& kraus, const Matrix& obs);
/** sum_i E_i rho E_i†. */
Matrix kraus_apply_schrodinger(const KrausSet& kraus, const Matrix& rho);

/**
 * n-fold self-composition: entrywise n-th power of the correlation matrix.
 * n = 0 gives the identity channel (all-ones matrix).  Off-diagonals of a
 * strict channel decay geometrically, |xi_kl|^n.
 */
SchurChannel iterate(const SchurChannel& ch, std::int64_t n);

/** Entrywise product of the two correlation matrices.  Composition of Schur
    channels is exactly commutative. */
SchurChannel compose(const SchurChannel& a, const SchurChannel& b);

/** Full dephasing: keep the diagonal, zero every coherence.  This is the
    n -> infinity limit of iterating any strict channel. */
DensityMatrix dephase_limit(const DensityMatrix& rho);

/**
 * Block decoherence: sum_kl xi_kl P_k O P_l for an orthogonal resolution
 * {P_k} of the identity.  The block matrix xi must satisfy the same
 * Hermitian / PSD / unit-diagonal contract as a correlation matrix, but may
 * be 1x1 (a single block leaves the observable untouched).  With rank-one
 * computational projectors this is apply_heisenberg.  Throws
 * ProjectorsNotOrthogonal when some P is not an orthogonal projector or a
 * mutual product exceeds tolerance, and ProjectorsIncomplete when the sum
 * differs from the identity.
 */
Matrix apply_partial_decoherence(const Matrix& xi,
                                 const std::vector<Matrix>& projectors,
                                 const Matrix& obs, double tol = kPsdTol);

}  // namespace decolab
