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

#include "core/decompose.hpp"

namespace decolab {

/**
 * Single-interaction environment model of a Schur channel.
 *
 * The joint unitary acts as |k> ⊗ |0> -> |k> ⊗ |e_k>: the system imprints
 * which-path information on the environment and is never rotated itself.
 * The environment vectors have unit norm and Gram matrix <e_k|e_l> = xi_kl;
 * tracing the environment out reproduces the Schrodinger action exactly.
 */
class DilationModel {
 public:
  /** Canonical model: environment dimension equals rank(xi), vectors from
      the lower-triangular factorization of xi. */
  static DilationModel build(const SchurChannel& ch);

  /** Decomposition-aligned model: (e_k)_i = sqrt(p_i) conj(phi_i(k)), one
      environment dimension per unitary.  Measuring the environment in the
      computational basis then yields outcome i with probability exactly
      p_i, for every input state. */
  static DilationModel from_decomposition(const RandomUnitaryDecomposition& dec);

  int sys_dim() const { return static_cast<int>(env_vectors_.size()); }
  int env_dim() const {
    return env_vectors_.empty()
               ? 0
               : static_cast<int>(env_vectors_.front().size());
  }
  const std::vector<Vector>& env_vectors() const { return env_vectors_; }

  /** Gram matrix of the environment vectors; equals xi up to the residual
      of the source (exactly, for the canonical model). */
  Matrix gram() const;

  /** The isometry V : C^d -> C^d ⊗ C^r, V|k> = |k> ⊗ |e_k>. */
  Matrix isometry() const;

  /** V rho V†, the joint system+environment state (dr x dr). */
  Matrix joint_state(const DensityMatrix& rho) const;

  /** Tr_env[V rho V†]; matches apply_schrodinger of the source channel. */
  DensityMatrix apply(const DensityMatrix& rho) const;

  /** Tr_sys[V rho V†] = sum_k rho_kk |e_k><e_k|; its entropy is the
      entropy exchange. */
  Matrix env_reduced_state(const DensityMatrix& rho) const;

 private:
  explicit DilationModel(std::vector<Vector> env_vectors)
      : env_vectors_(std::move(env_vectors)) {}

  std::vector<Vector> env_vectors_;
};

/** A POVM on the environment given by vectors mu_m (not necessarily
    normalized) with sum_m |mu_m><mu_m| = identity. */
struct EnvMeasurement {
  std::vector<Vector> outcome_vectors;

  int outcomes() const { return static_cast<int>(outcome_vectors.size()); }

  /** Max-norm deviation of sum |mu><mu| from the identity. */
  double resolution_defect() const;
};

/**
 * Outcome of a measure-and-correct protocol.  `corrections[m]` is the
 * diagonal unitary applied after outcome m.  Fidelities are worst-case over
 * outcomes and the entanglement-fidelity average; `classical_info_bits` is
 * the Shannon entropy of `outcome_probabilities`.
 */
struct RecoveryReport {
  EnvMeasurement measurement;
  std::vector<Matrix> corrections;
  RealVector outcome_probabilities;
  RealVector empirical_frequencies;           // empty when shots == 0
  std::vector<std::int64_t> outcome_counts;   // empty when shots == 0
  double worst_case_fidelity = 1.0;
  double average_entanglement_fidelity = 1.0;
  double classical_info_bits = 0.0;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
};

/**
 * Feedback recovery with a known decomposition: measure the aligned
 * environment in the computational basis (outcome i has probability exactly
 * p_i), then undo U_i.  The conditional states U_i rho U_i† are restored to
 * rho with fidelity 1 up to roundoff.  `shots` only adds sampled frequency
 * statistics; probabilities are computed exactly.
 *
 * Throws DecompositionMismatch when dec does not reproduce ch within 1e-8.
 */
RecoveryReport simulate_feedback_recovery(const SchurChannel& ch,
                                          const RandomUnitaryDecomposition& dec,
                                          const DensityMatrix& rho,
                                          std::int64_t shots,
                                          std::uint64_t seed);

/**
 * Best measure-and-correct protocol on the canonical environment, found by
 * multi-start local search over measurement isometries.  The figure of
 * merit is the average entanglement fidelity
 *   F = (1/d^2) sum_m (sum_k |<mu_m|e_k>|)^2,
 * whose maximum over corrections is built in (phase alignment).  When the
 * channel admits a random-unitary decomposition, the aligned measurement is
 * always included as a warm start, so F >= 1 - 1e-6 there; F is monotone in
 * `restarts` for a fixed seed.  `outcomes` <= 0 selects the environment
 * dimension.
 */
RecoveryReport optimize_recovery_measurement(const SchurChannel& ch,
                                             int outcomes, int restarts,
                                             std::uint64_t seed);

/**
 * n rounds of decohere-measure, one fresh environment per round, keeping
 * only the outcome tally; afterwards apply the single correction
 * prod_i (U_i†)^{c_i}.  Diagonal unitaries commute, so the tally determines
 * the correction: any two outcome orders with equal counts produce bitwise
 * identical corrections.
 */
RecoveryReport iterated_recovery(const SchurChannel& ch,
                                 const RandomUnitaryDecomposition& dec,
                                 std::int64_t steps, const DensityMatrix& rho,
                                 std::uint64_t seed);

/** The correction operator determined by an outcome tally. */
Matrix correction_for_counts(const RandomUnitaryDecomposition& dec,
                             const std::vector<std::int64_t>& counts);

}  // namespace decolab
