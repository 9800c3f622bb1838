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

#include <optional>

#include "core/dilation.hpp"

namespace decolab {

/**
 * Entropy exchange of the channel on a state, in bits: the entropy picked
 * up by a fresh environment.  Computed directly as
 *   S( sqrt(rho_inf) xi sqrt(rho_inf) ),   rho_inf = diag(rho),
 * which only sees the state's diagonal.  Bounded by log2(rank xi).
 */
double entropy_exchange(const SchurChannel& ch, const DensityMatrix& rho,
                        double tol = kPsdTol);

/** Same quantity through the environment: the entropy of
    Tr_sys[V rho V†].  Agrees with entropy_exchange within 1e-9. */
double entropy_exchange_via_dilation(const DilationModel& model,
                                     const DensityMatrix& rho,
                                     double tol = kPsdTol);

/** Same quantity through a random-unitary decomposition: the entropy of
    W_ij = sqrt(p_i p_j) Tr[U_i rho U_j†].  W has diagonal exactly p, so
    this is never above H(p). */
double entropy_exchange_ru(const RandomUnitaryDecomposition& dec,
                           const DensityMatrix& rho, double tol = kPsdTol);

/**
 * Entropy bookkeeping for one (channel, state) pair.
 *
 * `entropy_production` = |S(E_S(rho)) - S(rho)| never exceeds `s_ex`
 * (within 1e-9).  With a decomposition, `h_p` = H(p) and
 * `bound_gap` = h_p - s_ex >= -1e-9: the classical record is at least as
 * entropic as the exchange, with equality (at the maximally mixed state)
 * exactly when the unitaries are mutually orthogonal.
 */
struct InfoReport {
  double s_ex = 0.0;
  std::optional<double> h_p;
  std::optional<double> bound_gap;
  double entropy_production = 0.0;
};

/** Throws DecompositionMismatch if dec is given but does not reproduce ch
    within 1e-8. */
InfoReport check_bounds(const SchurChannel& ch, const DensityMatrix& rho,
                        const RandomUnitaryDecomposition* dec = nullptr,
                        double tol = kPsdTol);

/**
 * Decohered copy of a classically correlated reference/system pair: for a
 * probability vector p of length d,
 *   R = sum_ij xi_ji sqrt(p_i p_j) |i><j| ⊗ |i><j|.
 * Both marginals are diag(p).  The mutual information drops from 2 H(p)
 * to 2 H(p) - S_ex(diag p); the joint entropy comes from a full d^2 x d^2
 * eigendecomposition.
 */
struct ReferenceFrameReport {
  Matrix joint;
  RealVector probabilities;
  double info_before_bits = 0.0;
  double info_after_bits = 0.0;
};

/** Throws InvalidProbabilityVector for wrong length, negative entries, or a
    sum away from 1. */
ReferenceFrameReport reference_frame_state(const SchurChannel& ch,
                                           const RealVector& p);

}  // namespace decolab
