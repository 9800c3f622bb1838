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

#include "core/entropy.hpp"

#include <cmath>

namespace decolab {

double entropy_exchange(const SchurChannel& ch, const DensityMatrix& rho,
                        double tol) {
  if (rho.dim() != ch.dim()) {
    fail(ErrorCode::DimensionMismatch,
         "state dimension does not match the channel");
  }
  const int d = ch.dim();
  Matrix weighted(d, d);
  for (int k = 0; k < d; ++k) {
    const double sk = std::sqrt(std::max(rho.matrix()(k, k).real(), 0.0));
    for (int l = 0; l < d; ++l) {
      const double sl = std::sqrt(std::max(rho.matrix()(l, l).real(), 0.0));
      weighted(k, l) = sk * ch.xi()(k, l) * sl;
    }
  }
  return von_neumann_entropy(weighted, tol);
}

double entropy_exchange_via_dilation(const DilationModel& model,
                                     const DensityMatrix& rho, double tol) {
  return von_neumann_entropy(model.env_reduced_state(rho), tol);
}

double entropy_exchange_ru(const RandomUnitaryDecomposition& dec,
                           const DensityMatrix& rho, double tol) {
  if (rho.dim() != dec.dim()) {
    fail(ErrorCode::DimensionMismatch,
         "state dimension does not match the decomposition");
  }
  const int m = dec.terms();
  const int d = dec.dim();
  Matrix w(m, m);
  for (int i = 0; i < m; ++i) {
    const Vector ui = dec.phase_vectors[i].unit_vector();
    for (int j = 0; j < m; ++j) {
      const Vector uj = dec.phase_vectors[j].unit_vector();
      // Tr[U_i rho U_j†] for diagonal unitaries U = diag(conj(u)).
      Complex trace(0.0, 0.0);
      for (int k = 0; k < d; ++k) {
        trace += rho.matrix()(k, k) * std::conj(ui(k)) * uj(k);
      }
      w(i, j) = std::sqrt(dec.weights(i) * dec.weights(j)) * trace;
    }
  }
  return von_neumann_entropy(w, tol);
}

InfoReport check_bounds(const SchurChannel& ch, const DensityMatrix& rho,
                        const RandomUnitaryDecomposition* dec, double tol) {
  InfoReport report;
  report.s_ex = entropy_exchange(ch, rho, tol);

  const double s_in = von_neumann_entropy(rho.matrix(), tol);
  const double s_out =
      von_neumann_entropy(ch.apply_schrodinger(rho).matrix(), tol);
  report.entropy_production = std::abs(s_out - s_in);

  if (dec != nullptr) {
    if (dec->dim() != ch.dim()) {
      fail(ErrorCode::DimensionMismatch,
           "decomposition dimension does not match the channel");
    }
    const double residual = (ch.xi() - dec->reconstruct()).norm();
    if (residual > 1e-8) {
      fail(ErrorCode::DecompositionMismatch,
           "decomposition does not reproduce the channel (residual " +
               std::to_string(residual) + ")");
    }
    report.h_p = shannon_entropy(dec->weights);
    report.bound_gap = *report.h_p - report.s_ex;
  }
  return report;
}

ReferenceFrameReport reference_frame_state(const SchurChannel& ch,
                                           const RealVector& p) {
  const int d = ch.dim();
  if (static_cast<int>(p.size()) != d) {
    fail(ErrorCode::InvalidProbabilityVector,
         "probability vector length " + std::to_string(p.size()) +
             " does not match dimension " + std::to_string(d));
  }
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    if (p(i) < -1e-12) {
      fail(ErrorCode::InvalidProbabilityVector,
           "probability " + std::to_string(i) + " is negative");
    }
    total += p(i);
  }
  if (std::abs(total - 1.0) > kTraceTol) {
    fail(ErrorCode::InvalidProbabilityVector,
         "probabilities sum to " + std::to_string(total) +
             ", expected 1 within 1e-9");
  }

  // Start from the pure correlated pair sum_ij sqrt(p_i p_j) |ii><jj| and
  // decohere the system half; only the d x d block at (i*d+i, j*d+j)
  // survives, scaled by xi_ji.
  ReferenceFrameReport report;
  report.probabilities = p;
  report.joint = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      report.joint(i * d + i, j * d + j) =
          ch.xi()(j, i) * std::sqrt(std::max(p(i), 0.0) *
                                    std::max(p(j), 0.0));
    }
  }

  const double h = shannon_entropy(p);
  const double joint_entropy = von_neumann_entropy(report.joint);
  report.info_before_bits = 2.0 * h;
  report.info_after_bits = 2.0 * h - joint_entropy;
  return report;
}

}  // namespace decolab
