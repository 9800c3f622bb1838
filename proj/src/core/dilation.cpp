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

#include "core/dilation.hpp"

#include <algorithm>
#include <cmath>

#include "core/optimize.hpp"
#include "core/rng.hpp"

namespace decolab {

namespace {

constexpr double kVerifyTol = 1e-8;

void require_verified(const SchurChannel& ch,
                      const RandomUnitaryDecomposition& dec) {
  if (dec.dim() != ch.dim()) {
    fail(ErrorCode::DimensionMismatch,
         "decomposition dimension does not match the channel");
  }
  const double residual = (ch.xi() - dec.reconstruct()).norm();
  if (residual > kVerifyTol) {
    fail(ErrorCode::DecompositionMismatch,
         "decomposition does not reproduce the channel (residual " +
             std::to_string(residual) + ")");
  }
}

std::vector<std::int64_t> sample_counts(const RealVector& p,
                                        std::int64_t shots, Rng& rng) {
  std::vector<std::int64_t> counts(p.size(), 0);
  for (std::int64_t s = 0; s < shots; ++s) {
    const double x = rng.uniform();
    double cumulative = 0.0;
    Eigen::Index pick = p.size() - 1;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      cumulative += p(i);
      if (x < cumulative) {
        pick = i;
        break;
      }
    }
    ++counts[pick];
  }
  return counts;
}

// Average entanglement fidelity of a measure-and-correct protocol given the
// overlap matrix a_mk = <mu_m|e_k>, with phase-aligning corrections.
double protocol_fidelity(const Matrix& overlaps) {
  const int d = static_cast<int>(overlaps.cols());
  double total = 0.0;
  for (Eigen::Index m = 0; m < overlaps.rows(); ++m) {
    total += std::pow(overlaps.row(m).cwiseAbs().sum(), 2);
  }
  return total / (static_cast<double>(d) * d);
}

}  // namespace

// ---------------------------------------------------------------------------
// DilationModel
// ---------------------------------------------------------------------------

DilationModel DilationModel::build(const SchurChannel& ch) {
  return DilationModel(psd_factor(ch.xi()));
}

DilationModel DilationModel::from_decomposition(
    const RandomUnitaryDecomposition& dec) {
  const int d = dec.dim();
  const int m = dec.terms();
  std::vector<Vector> env;
  env.reserve(d);
  for (int k = 0; k < d; ++k) {
    Vector e(m);
    for (int i = 0; i < m; ++i) {
      e(i) = std::sqrt(dec.weights(i)) *
             std::polar(1.0, -dec.phase_vectors[i].phases(k));
    }
    env.push_back(std::move(e));
  }
  return DilationModel(std::move(env));
}

Matrix DilationModel::gram() const {
  const int d = sys_dim();
  Matrix g(d, d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      g(k, l) = env_vectors_[k].dot(env_vectors_[l]);
    }
  }
  return g;
}

Matrix DilationModel::isometry() const {
  const int d = sys_dim();
  const int r = env_dim();
  Matrix v = Matrix::Zero(d * r, d);
  for (int k = 0; k < d; ++k) {
    v.block(k * r, k, r, 1) = env_vectors_[k];
  }
  return v;
}

Matrix DilationModel::joint_state(const DensityMatrix& rho) const {
  const int d = sys_dim();
  const int r = env_dim();
  if (rho.dim() != d) {
    fail(ErrorCode::DimensionMismatch,
         "state dimension does not match the dilation");
  }
  Matrix joint(d * r, d * r);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      joint.block(k * r, l * r, r, r) =
          rho.matrix()(k, l) * (env_vectors_[k] * env_vectors_[l].adjoint());
    }
  }
  return joint;
}

DensityMatrix DilationModel::apply(const DensityMatrix& rho) const {
  const int d = sys_dim();
  if (rho.dim() != d) {
    fail(ErrorCode::DimensionMismatch,
         "state dimension does not match the dilation");
  }
  Matrix out(d, d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      out(k, l) = rho.matrix()(k, l) * env_vectors_[l].dot(env_vectors_[k]);
    }
  }
  return DensityMatrix::trusted(std::move(out));
}

Matrix DilationModel::env_reduced_state(const DensityMatrix& rho) const {
  const int d = sys_dim();
  const int r = env_dim();
  if (rho.dim() != d) {
    fail(ErrorCode::DimensionMismatch,
         "state dimension does not match the dilation");
  }
  Matrix sigma = Matrix::Zero(r, r);
  for (int k = 0; k < d; ++k) {
    sigma += rho.matrix()(k, k).real() *
             (env_vectors_[k] * env_vectors_[k].adjoint());
  }
  return sigma;
}

double EnvMeasurement::resolution_defect() const {
  if (outcome_vectors.empty()) return 1.0;
  const auto r = outcome_vectors.front().size();
  Matrix sum = Matrix::Zero(r, r);
  for (const Vector& mu : outcome_vectors) sum += mu * mu.adjoint();
  return (sum - Matrix::Identity(r, r)).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Feedback recovery with a known decomposition
// ---------------------------------------------------------------------------

RecoveryReport simulate_feedback_recovery(const SchurChannel& ch,
                                          const RandomUnitaryDecomposition& dec,
                                          const DensityMatrix& rho,
                                          std::int64_t shots,
                                          std::uint64_t seed) {
  require_verified(ch, dec);
  if (rho.dim() != ch.dim()) {
    fail(ErrorCode::DimensionMismatch,
         "state dimension does not match the channel");
  }
  if (shots < 0) {
    fail(ErrorCode::InvalidArgument, "shot count must be nonnegative");
  }

  const int m = dec.terms();

  RecoveryReport report;
  report.shots = shots;
  report.seed = seed;
  report.outcome_probabilities = dec.weights;
  report.classical_info_bits = shannon_entropy(dec.weights);

  // Computational-basis measurement on the decomposition-aligned
  // environment; outcome i heralds the branch U_i rho U_i†.
  for (int i = 0; i < m; ++i) {
    Vector mu = Vector::Zero(m);
    mu(i) = Complex(1.0, 0.0);
    report.measurement.outcome_vectors.push_back(std::move(mu));
  }

  double worst = 1.0;
  double avg_ent = 0.0;
  for (int i = 0; i < m; ++i) {
    const Matrix u = dec.implied_unitary(i);
    const Matrix correction = u.adjoint();
    const Matrix conditional = u * rho.matrix() * u.adjoint();
    const Matrix recovered = correction * conditional * correction.adjoint();
    worst = std::min(worst, state_fidelity(recovered, rho.matrix()));

    // Kraus operator of the full heralded protocol on this branch.
    const Matrix branch =
        std::sqrt(dec.weights(i)) * (correction * u);
    avg_ent += std::norm((rho.matrix() * branch).trace());
    report.corrections.push_back(correction);
  }
  report.worst_case_fidelity = worst;
  report.average_entanglement_fidelity = avg_ent;

  if (shots > 0) {
    Rng rng(seed);
    report.outcome_counts = sample_counts(dec.weights, shots, rng);
    report.empirical_frequencies = RealVector(m);
    for (int i = 0; i < m; ++i) {
      report.empirical_frequencies(i) =
          static_cast<double>(report.outcome_counts[i]) /
          static_cast<double>(shots);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Measurement optimization on the canonical environment
// ---------------------------------------------------------------------------

RecoveryReport optimize_recovery_measurement(const SchurChannel& ch,
                                             int outcomes, int restarts,
                                             std::uint64_t seed) {
  const DilationModel model = DilationModel::build(ch);
  const int d = model.sys_dim();
  const int r = model.env_dim();
  if (outcomes <= 0) outcomes = r;
  if (outcomes < r) {
    fail(ErrorCode::InvalidArgument,
         "outcome count must reach the environment dimension " +
             std::to_string(r));
  }
  if (restarts < 0) {
    fail(ErrorCode::InvalidArgument, "restart count must be nonnegative");
  }

  // Columns of E are the environment vectors; a measurement is a matrix T
  // (outcomes x r) with orthonormal columns, row m giving <mu_m|.
  Matrix env(r, d);
  for (int k = 0; k < d; ++k) env.col(k) = model.env_vectors()[k];

  const auto orthonormalize = [&](const Matrix& raw) {
    Eigen::HouseholderQR<Matrix> qr(raw);
    return Matrix(qr.householderQ() * Matrix::Identity(outcomes, r));
  };
  const auto fidelity_of = [&](const Matrix& t) {
    return protocol_fidelity(t * env);
  };

  Rng master(seed);
  std::vector<Matrix> candidates;

  // Warm start: when the channel is a mixture of diagonal unitaries, the
  // measurement that distinguishes the mixture branches recovers perfectly.
  // Map the aligned environment onto the canonical one and orthonormalize.
  {
    SearchConfig cfg;
    cfg.seed = Rng::mix(seed, 0x77a9);
    const SearchResult search = ru_decompose_search(ch, cfg);
    if (search.outcome == SearchOutcome::Success &&
        search.decomposition->terms() <= outcomes) {
      const DilationModel aligned =
          DilationModel::from_decomposition(*search.decomposition);
      const int m = aligned.env_dim();
      Matrix env_aligned(m, d);
      for (int k = 0; k < d; ++k) {
        env_aligned.col(k) = aligned.env_vectors()[k];
      }
      // S solves S E = E' in the least-squares sense; S† carries the
      // computational outcomes back to the canonical environment.
      const Matrix gram_inv =
          (env * env.adjoint()).inverse();
      const Matrix s = env_aligned * env.adjoint() * gram_inv;
      Matrix padded = Matrix::Zero(outcomes, r);
      padded.topRows(m) = s;
      candidates.push_back(orthonormalize(padded));
    }
  }

  for (int s = 0; s < restarts; ++s) {
    Rng rng = master.stream(static_cast<std::uint64_t>(s) + 1);
    Matrix raw(outcomes, r);
    for (int i = 0; i < outcomes; ++i) {
      for (int j = 0; j < r; ++j) {
        raw(i, j) = Complex(rng.gaussian(), rng.gaussian());
      }
    }
    candidates.push_back(orthonormalize(raw));
  }

  // Local refinement of every candidate over the raw (pre-QR) entries.
  const int n_par = 2 * outcomes * r;
  SimplexOptions nm;
  nm.max_iterations = 60 * n_par;
  nm.x_tol = 1e-10;
  nm.f_tol = 1e-13;
  nm.initial_step = 0.15;

  const auto unpack = [&](const Eigen::VectorXd& x) {
    Matrix raw(outcomes, r);
    int idx = 0;
    for (int i = 0; i < outcomes; ++i) {
      for (int j = 0; j < r; ++j) {
        raw(i, j) = Complex(x(idx), x(idx + 1));
        idx += 2;
      }
    }
    return orthonormalize(raw);
  };

  Matrix best_t;
  double best_f = -1.0;
  for (const Matrix& t0 : candidates) {
    Eigen::VectorXd x0(n_par);
    int idx = 0;
    for (int i = 0; i < outcomes; ++i) {
      for (int j = 0; j < r; ++j) {
        x0(idx) = t0(i, j).real();
        x0(idx + 1) = t0(i, j).imag();
        idx += 2;
      }
    }
    const SimplexResult res = minimize_simplex(
        [&](const Eigen::VectorXd& x) { return -fidelity_of(unpack(x)); }, x0,
        nm);
    const Matrix t = unpack(res.x);
    const double f = fidelity_of(t);
    if (f > best_f) {
      best_f = f;
      best_t = t;
    }
  }
  if (best_f < 0.0) {
    fail(ErrorCode::InvalidArgument,
         "no measurement candidates (restarts = 0 and no warm start)");
  }

  const Matrix overlaps = best_t * env;
  RecoveryReport report;
  report.seed = seed;
  report.average_entanglement_fidelity = best_f;

  for (int m = 0; m < outcomes; ++m) {
    report.measurement.outcome_vectors.push_back(
        best_t.row(m).adjoint());
    Matrix w = Matrix::Identity(d, d);
    for (int k = 0; k < d; ++k) {
      const Complex a = overlaps(m, k);
      if (std::abs(a) > 1e-15) w(k, k) = std::conj(a) / std::abs(a);
    }
    report.corrections.push_back(std::move(w));
  }

  report.outcome_probabilities = RealVector(outcomes);
  double worst = 1.0;
  for (int m = 0; m < outcomes; ++m) {
    const double power = overlaps.row(m).squaredNorm();
    report.outcome_probabilities(m) = power / d;
    if (power / d > 1e-12) {
      const double abs_sum = overlaps.row(m).cwiseAbs().sum();
      worst = std::min(worst, (abs_sum * abs_sum) / (d * power));
    }
  }
  report.worst_case_fidelity = worst;
  report.classical_info_bits = shannon_entropy(report.outcome_probabilities);
  return report;
}

// ---------------------------------------------------------------------------
// Iterated decoherence with tally-only correction
// ---------------------------------------------------------------------------

Matrix correction_for_counts(const RandomUnitaryDecomposition& dec,
                             const std::vector<std::int64_t>& counts) {
  if (static_cast<int>(counts.size()) != dec.terms()) {
    fail(ErrorCode::DimensionMismatch,
         "tally length does not match the decomposition term count");
  }
  const int d = dec.dim();
  Matrix correction = Matrix::Identity(d, d);
  // Fixed term order: the tally alone determines the product bit for bit.
  for (int i = 0; i < dec.terms(); ++i) {
    if (counts[i] < 0) {
      fail(ErrorCode::InvalidArgument, "negative outcome count");
    }
    const Matrix u_dag = dec.implied_unitary(i).adjoint();
    for (std::int64_t c = 0; c < counts[i]; ++c) {
      for (int k = 0; k < d; ++k) correction(k, k) *= u_dag(k, k);
    }
  }
  return correction;
}

RecoveryReport iterated_recovery(const SchurChannel& ch,
                                 const RandomUnitaryDecomposition& dec,
                                 std::int64_t steps, const DensityMatrix& rho,
                                 std::uint64_t seed) {
  require_verified(ch, dec);
  if (rho.dim() != ch.dim()) {
    fail(ErrorCode::DimensionMismatch,
         "state dimension does not match the channel");
  }
  if (steps < 0) {
    fail(ErrorCode::InvalidArgument, "step count must be nonnegative");
  }

  const int m = dec.terms();
  Rng rng(seed);

  // Each round uses a fresh environment, so the heralded branch is drawn
  // from the weights independently of the current state (the diagonal, the
  // only thing the outcome distribution sees, never changes).
  std::vector<std::int64_t> counts(m, 0);
  Matrix state = rho.matrix();
  for (std::int64_t step = 0; step < steps; ++step) {
    const double x = rng.uniform();
    double cumulative = 0.0;
    int pick = m - 1;
    for (int i = 0; i < m; ++i) {
      cumulative += dec.weights(i);
      if (x < cumulative) {
        pick = i;
        break;
      }
    }
    ++counts[pick];
    const Matrix u = dec.implied_unitary(pick);
    state = u * state * u.adjoint();
  }

  const Matrix correction = correction_for_counts(dec, counts);
  const Matrix recovered = correction * state * correction.adjoint();
  const double fidelity = state_fidelity(recovered, rho.matrix());

  RecoveryReport report;
  report.shots = steps;
  report.seed = seed;
  report.outcome_probabilities = dec.weights;
  report.outcome_counts = counts;
  report.classical_info_bits = shannon_entropy(dec.weights);
  report.worst_case_fidelity = fidelity;
  report.average_entanglement_fidelity = fidelity;
  for (int i = 0; i < m; ++i) {
    Vector mu = Vector::Zero(m);
    mu(i) = Complex(1.0, 0.0);
    report.measurement.outcome_vectors.push_back(std::move(mu));
    report.corrections.push_back(dec.implied_unitary(i).adjoint());
  }
  if (steps > 0) {
    report.empirical_frequencies = RealVector(m);
    for (int i = 0; i < m; ++i) {
      report.empirical_frequencies(i) =
          static_cast<double>(counts[i]) / static_cast<double>(steps);
    }
  }
  return report;
}

}  // namespace decolab
