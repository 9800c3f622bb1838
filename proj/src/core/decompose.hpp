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
#include <optional>
#include <string>
#include <vector>

#include "core/channel.hpp"

namespace decolab {

/** Unimodularity tolerance: a scaled eigenvector counts as a phase vector
    when every component modulus is within this of 1. */
inline constexpr double kUnimodularTol = 1e-8;

/**
 * Phases of a unimodular vector (1, e^{i phi_1}, ..., e^{i phi_{d-1}}).
 * The global phase is gauge-fixed: phases(0) == 0 and all entries lie in
 * [0, 2 pi).
 */
struct PhaseVector {
  RealVector phases;

  int dim() const { return static_cast<int>(phases.size()); }

  /** The vector itself, components e^{i phi_k}. */
  Vector unit_vector() const;

  /** Extract and gauge-fix the phases of a (near-)unimodular vector.
      Component moduli are discarded; only arguments survive. */
  static PhaseVector from_vector(const Vector& v);
};

/** Map x into [0, 2 pi). */
double wrap_two_pi(double x);

/**
 * A convex decomposition xi = sum_i p_i |phi_i><phi_i| into unimodular
 * rank-one correlation matrices.  Each term corresponds to the diagonal
 * unitary U_i = diag(e^{-i phi_{i,k}}): mixing conjugations by the U_i with
 * probabilities p_i reproduces the Schur channel exactly.
 *
 * Weights are positive, sorted descending, and sum to 1 within 1e-12.
 */
struct RandomUnitaryDecomposition {
  RealVector weights;
  std::vector<PhaseVector> phase_vectors;

  int terms() const { return static_cast<int>(weights.size()); }
  int dim() const {
    return phase_vectors.empty() ? 0 : phase_vectors.front().dim();
  }

  /** sum_i p_i |phi_i><phi_i|. */
  Matrix reconstruct() const;

  /** Diagonal unitary of term i.  Conjugating a state by it realizes the
      i-th branch of the channel. */
  Matrix implied_unitary(int i) const;
};

/** Canonical constructor: wraps phases, drops weights below `min_weight`,
    renormalizes the sum to 1, sorts terms by descending weight. */
RandomUnitaryDecomposition make_decomposition(
    const RealVector& weights, const std::vector<PhaseVector>& phase_vectors,
    double min_weight = 1e-10);

enum class ExtremalityVerdict { Extremal, NotExtremal };

/**
 * Result of the Choi linear-independence test.
 *
 * For canonical Kraus operators E_1..E_r the channel is an extreme point of
 * the CPTP set iff the r^2 products {E_i† E_j} are linearly independent.
 * The products are diagonal, so independence is the rank of an r^2 x d
 * matrix, computed from its singular values (counted above
 * tol * sigma_max); extremality therefore requires r^2 <= d.
 *
 * `not_random_unitary` is set only for Extremal verdicts with r >= 2 whose
 * counted singular values all clear 10x the threshold: such a channel has a
 * unique Kraus representation and no mixture of unitaries can realize it.
 */
struct ExtremalityCertificate {
  int kraus_rank = 0;
  int gram_rank = 0;
  ExtremalityVerdict verdict = ExtremalityVerdict::NotExtremal;
  bool not_random_unitary = false;
  RealVector singular_values;
  double tolerance = 0.0;
};

ExtremalityCertificate extremality_test(const SchurChannel& ch,
                                        double tol = 1e-10);

/**
 * Exact two-term decomposition of any qubit channel: for off-diagonal
 * c = |c| e^{i theta}, weights (1 +- |c|)/2 pair with phase vectors
 * (0, -theta) and (0, pi - theta).  The two vectors are orthogonal and
 * H(p) equals the entropy of xi/2 exactly; a unimodular off-diagonal
 * degenerates to a single term.
 */
RandomUnitaryDecomposition ru_decompose_qubit(const SchurChannel& ch);

struct SearchConfig {
  double residual_tol = 1e-8;
  double min_weight = 1e-10;
  /** Multi-start count for both the peeling simplex and the refit stage. */
  int starts = 64;
  /** Term budget; 0 means 4 * dim. */
  int max_terms = 0;
  std::uint64_t seed = 0;
};

enum class SearchOutcome { Success, NotRandomUnitary, Inconclusive };

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::Inconclusive;
  std::optional<RandomUnitaryDecomposition> decomposition;
  std::optional<ExtremalityCertificate> certificate;
  /** Frobenius residual of the best reconstruction seen. */
  double residual = 0.0;
  /** Which stage decided: "qubit", "spectral", "uniform-phases", "peel",
      "refit(m=K)", or a short failure note. */
  std::string detail;
};

/**
 * Search for a random-unitary decomposition of the channel.
 *
 * Stages, in order: qubit closed form; spectral shortcut (eigenvectors
 * already unimodular); extremality certificate (proof that no decomposition
 * exists); greedy peeling of maximal unimodular rank-one terms, each step
 * located by multi-start simplex over the phase torus; and a damped
 * least-squares refit over weights and phases jointly, seeded both from the
 * peel output and from fresh random starts with increasing term counts.
 *
 * Success requires the final residual to clear config.residual_tol.  A
 * NotRandomUnitary outcome carries a sound certificate; everything else is
 * Inconclusive, never a wrong answer.  Deterministic under config.seed.
 */
SearchResult ru_decompose_search(const SchurChannel& ch,
                                 const SearchConfig& config = {});

struct VerifyReport {
  /** Frobenius norm of xi - sum_i p_i |phi_i><phi_i|. */
  double residual = 0.0;
  /** Shannon entropy H(p) in bits. */
  double shannon_bits = 0.0;
  /** Overlap matrix G_ij = Tr[U_i U_j†] / d. */
  Matrix gram;
};

VerifyReport verify_decomposition(const RandomUnitaryDecomposition& dec,
                                  const SchurChannel& ch);

/** True iff the implied unitaries are mutually orthogonal:
    |Tr[U_i U_j†]| <= d * tol for all i != j. */
bool orthogonality_check(const RandomUnitaryDecomposition& dec,
                         double tol = 1e-8);

}  // namespace decolab
