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

#include "core/decompose.hpp"
#include "core/rng.hpp"

namespace decolab {

/** [[1, c], [conj(c), 1]]. */
Matrix qubit_correlation(Complex c);

/**
 * The 4x4 rank-two correlation matrix built as the Gram matrix of
 * (1,0), (0,1), (1,1)/sqrt(2), (1,i)/sqrt(2).  Its channel is an extreme
 * point of the CPTP set with two Kraus operators, so it is provably not a
 * mixture of unitaries: the smallest dimension where decoherence can defeat
 * every feedback protocol.
 */
Matrix extremal_rank2_d4();

/**
 * A 3x3 correlation matrix with nondegenerate spectrum (eigenvalues 2,1,0)
 * that does admit random-unitary decompositions, but only lopsided ones:
 * every decomposition records strictly more classical information than the
 * entropy the environment carries (gap > 0.08 bits at the mixed state).
 */
Matrix strict_gap_qutrit();

/** Gram matrix of d random unit vectors in C^rank: a random correlation
    matrix of the given numerical rank (almost surely). */
Matrix random_correlation(int dim, int rank, Rng& rng);

/** Full-rank random density matrix (Wishart, normalized). */
Matrix random_density(int dim, Rng& rng);

/** Rank-one random density matrix. */
Matrix random_pure_density(int dim, Rng& rng);

/** Random mixture of `terms` diagonal unitaries with weights bounded away
    from zero; its reconstruction is a correlation matrix by construction. */
RandomUnitaryDecomposition random_planted_decomposition(int dim, int terms,
                                                        Rng& rng);

}  // namespace decolab
