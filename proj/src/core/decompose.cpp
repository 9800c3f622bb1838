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

#include "core/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "core/optimize.hpp"
#include "core/rng.hpp"

namespace decolab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_modulus_deviation(const Vector& u) {
  double dev = 0.0;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    dev = std::max(dev, std::abs(std::abs(u(k)) - 1.0));
  }
  return dev;
}

std::vector<PhaseVector> phase_vectors_from_rows(
    const Eigen::MatrixXd& thetas) {
  std::vector<PhaseVector> out;
  out.reserve(thetas.rows());
  for (Eigen::Index i = 0; i < thetas.rows(); ++i) {
    PhaseVector pv;
    pv.phases = RealVector::Zero(thetas.cols() + 1);
    for (Eigen::Index k = 0; k < thetas.cols(); ++k) {
      pv.phases(k + 1) = wrap_two_pi(thetas(i, k));
    }
    out.push_back(std::move(pv));
  }
  return out;
}

std::vector<Vector> unit_vectors(const RandomUnitaryDecomposition& dec) {
  std::vector<Vector> us;
  us.reserve(dec.terms());
  for (const PhaseVector& pv : dec.phase_vectors) {
    us.push_back(pv.unit_vector());
  }
  return us;
}

// ---------------------------------------------------------------------------
// Shortcut stages
// ---------------------------------------------------------------------------

// When every eigenvector of xi is unimodular after scaling by sqrt(d), the
// eigendecomposition itself is the answer: weights lambda_i / d.
std::optional<RandomUnitaryDecomposition> spectral_candidate(
    const Spectrum& spec, double min_weight) {
  const int d = spec.dim();
  const double cutoff =
      kRankCutoff * std::max(std::abs(spec.eigenvalues(0)), 1e-300);
  const double sqrt_d = std::sqrt(static_cast<double>(d));

  std::vector<double> weights;
  std::vector<PhaseVector> pvs;
  for (int i = 0; i < d; ++i) {
    if (spec.eigenvalues(i) <= cutoff) continue;
    const Vector u = sqrt_d * spec.eigenvectors.col(i);
    if (max_modulus_deviation(u) > kUnimodularTol) return std::nullopt;
    weights.push_back(spec.eigenvalues(i) / d);
    pvs.push_back(PhaseVector::from_vector(u));
  }
  if (weights.empty()) return std::nullopt;
  RealVector w = Eigen::Map<RealVector>(weights.data(), weights.size());
  return make_decomposition(w, pvs, min_weight);
}

// The identity correlation matrix mixes the d Fourier phase vectors with
// equal weight; its spectral basis is not unique, so handle it explicitly.
RandomUnitaryDecomposition uniform_phase_decomposition(int d) {
  RealVector w = RealVector::Constant(d, 1.0 / d);
  std::vector<PhaseVector> pvs;
  for (int j = 0; j < d; ++j) {
    PhaseVector pv;
    pv.phases = RealVector::Zero(d);
    for (int k = 1; k < d; ++k) {
      pv.phases(k) = wrap_two_pi(kTwoPi * j * k / d);
    }
    pvs.push_back(std::move(pv));
  }
  return make_decomposition(w, pvs);
}

bool is_identity_matrix(const Matrix& xi) {
  return (xi - Matrix::Identity(xi.rows(), xi.cols())).cwiseAbs().maxCoeff() <=
         1e-12;
}

// ---------------------------------------------------------------------------
// Peeling: greedily remove the heaviest unimodular rank-one term
// ---------------------------------------------------------------------------

Vector torus_point(const Eigen::VectorXd& theta) {
  Vector u(theta.size() + 1);
  u(0) = Complex(1.0, 0.0);
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    u(k + 1) = std::polar(1.0, theta(k));
  }
  return u;
}

// Largest t with lambda_min(xi - t u u†) >= -eps, by bisection; lambda_min
// is concave in t so feasibility is an interval.
double peelable_weight_exact(const Matrix& xi, const Vector& u, double eps) {
  const auto feasible = [&](double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(
        xi - t * (u * u.adjoint()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -eps;
  };
  if (!feasible(0.0)) return 0.0;
  if (feasible(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 48; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

struct PeelOutcome {
  std::vector<double> weights;
  std::vector<PhaseVector> pvs;
  bool complete = false;
};

PeelOutcome peel(const Matrix& xi0, const SearchConfig& cfg, int max_terms,
                 Rng& rng) {
  const int d = static_cast<int>(xi0.rows());
  const double eps = 1e-11 * d;
  PeelOutcome out;

  Matrix cur = xi0;
  double mass = 1.0;

  for (int step = 0; step < max_terms; ++step) {
    Spectrum spec = hermitian_eig(cur);
    if (spec.eigenvalues.minCoeff() < 0.0) {
      // Clamp the slack drift from previous subtractions.
      for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        spec.eigenvalues(i) = std::max(spec.eigenvalues(i), 0.0);
      }
      cur = spec.reconstruct();
      cur.diagonal().setConstant(Complex(1.0, 0.0));
      spec = hermitian_eig(cur);
    }
    const int rank = spec.numerical_rank();

    if (rank <= 1) {
      // A rank-one correlation matrix is automatically unimodular.
      const Vector u = std::sqrt(static_cast<double>(d)) *
                       spec.eigenvectors.col(0);
      out.weights.push_back(mass);
      out.pvs.push_back(PhaseVector::from_vector(u));
      out.complete = true;
      return out;
    }
    if (auto sc = spectral_candidate(spec, cfg.min_weight)) {
      for (int i = 0; i < sc->terms(); ++i) {
        out.weights.push_back(mass * sc->weights(i));
        out.pvs.push_back(sc->phase_vectors[i]);
      }
      out.complete = true;
      return out;
    }

    // Surrogate for the peelable weight: exact on the range of cur, and a
    // slack-over-leakage ratio off it, which gives the simplex a smooth
    // signal pointing back toward the feasible torus points.
    const double cutoff =
        kRankCutoff * std::max(std::abs(spec.eigenvalues(0)), 1e-300);
    Matrix pinv = Matrix::Zero(d, d);
    Matrix range_proj = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      if (spec.eigenvalues(i) > cutoff) {
        const Matrix outer =
            spec.eigenvectors.col(i) * spec.eigenvectors.col(i).adjoint();
        pinv += outer / spec.eigenvalues(i);
        range_proj += outer;
      }
    }
    const bool full_rank = (rank == d);

    const auto surrogate = [&](const Eigen::VectorXd& theta) {
      const Vector u = torus_point(theta);
      const double q = std::real(u.dot(pinv * u));
      double t = (q > 1e-14) ? 1.0 / q : 1.0;
      if (!full_rank) {
        const double leak =
            std::max(static_cast<double>(d) - std::real(u.dot(range_proj * u)),
                     0.0);
        if (leak > 1e-18) t = std::min(t, eps / leak);
      }
      return -std::min(t, 1.0);
    };

    SimplexOptions nm;
    nm.max_iterations = 260;
    nm.x_tol = 1e-9;
    nm.f_tol = 1e-14;
    nm.initial_step = 0.8;

    double best_t = 0.0;
    Vector best_u;
    const int starts = std::max(cfg.starts, 8);
    for (int s = 0; s < starts; ++s) {
      Eigen::VectorXd theta0(d - 1);
      for (int k = 0; k < d - 1; ++k) theta0(k) = rng.uniform(0.0, kTwoPi);
      const SimplexResult res = minimize_simplex(surrogate, theta0, nm);
      const Vector u = torus_point(res.x);
      const double t = peelable_weight_exact(cur, u, eps);
      if (t > best_t) {
        best_t = t;
        best_u = u;
      }
    }

    if (best_t >= 1.0 - 1e-12) {
      out.weights.push_back(mass);
      out.pvs.push_back(PhaseVector::from_vector(best_u));
      out.complete = true;
      return out;
    }
    if (best_t * mass < std::max(cfg.min_weight, 1e-6)) {
      return out;  // stalled; the refit stage takes over
    }

    out.weights.push_back(mass * best_t);
    out.pvs.push_back(PhaseVector::from_vector(best_u));
    cur = (cur - best_t * (best_u * best_u.adjoint())) / (1.0 - best_t);
    cur = detail::hermitian_part(cur);
    cur.diagonal().setConstant(Complex(1.0, 0.0));
    mass *= (1.0 - best_t);

    if (mass < 0.1 * cfg.residual_tol) {
      out.complete = true;  // leftover mass is below the residual gate
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Damped least-squares refit over (weights, phases)
// ---------------------------------------------------------------------------

RealVector solve_weights(const Matrix& xi, const std::vector<Vector>& us) {
  const int m = static_cast<int>(us.size());
  Eigen::MatrixXd h(m, m);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    b(i) = std::real(us[i].dot(xi * us[i]));
    for (int j = 0; j < m; ++j) {
      h(i, j) = std::norm(us[i].dot(us[j]));
    }
  }
  return nnls_gram(h, b);
}

double model_residual(const Matrix& xi, const RealVector& w,
                      const std::vector<Vector>& us) {
  Matrix model = Matrix::Zero(xi.rows(), xi.cols());
  for (int i = 0; i < static_cast<int>(us.size()); ++i) {
    model += w(i) * (us[i] * us[i].adjoint());
  }
  return (xi - model).norm();
}

// One damped Gauss-Newton run over phases and weights jointly.  Residual
// rows cover the upper triangle (off-diagonal rows weighted by sqrt(2)) so
// the squared residual norm equals the Frobenius misfit; the diagonal rows
// read 1 - sum_i w_i and keep the weights pinned to the simplex without an
// explicit constraint.  Alternating the two blocks instead stalls: they are
// strongly coupled, and block descent crawls near a joint optimum.
void lm_refine(const Matrix& xi, RealVector& w, Eigen::MatrixXd& thetas,
               int max_steps) {
  const int d = static_cast<int>(xi.rows());
  const int m = static_cast<int>(thetas.rows());
  const int n_phase = m * (d - 1);
  const int n_par = n_phase + m;
  const int n_res = d * (d + 1);

  const auto residual_vector = [&](const Eigen::MatrixXd& th,
                                   const RealVector& wv,
                                   std::vector<Vector>* us_out) {
    std::vector<Vector> us;
    us.reserve(m);
    for (int i = 0; i < m; ++i) {
      us.push_back(torus_point(th.row(i).transpose()));
    }
    Matrix model = Matrix::Zero(d, d);
    for (int i = 0; i < m; ++i) model += wv(i) * (us[i] * us[i].adjoint());
    const Matrix delta = xi - model;
    Eigen::VectorXd r(n_res);
    int row = 0;
    for (int a = 0; a < d; ++a) {
      for (int b = a; b < d; ++b) {
        const double rw = (a == b) ? 1.0 : std::numbers::sqrt2;
        r(row++) = rw * delta(a, b).real();
        r(row++) = rw * delta(a, b).imag();
      }
    }
    if (us_out) *us_out = std::move(us);
    return r;
  };

  double lambda = 1e-3;
  Eigen::VectorXd r;
  std::vector<Vector> us;
  r = residual_vector(thetas, w, &us);
  double r_norm2 = r.squaredNorm();

  for (int step = 0; step < max_steps; ++step) {
    if (r_norm2 < 1e-28) break;

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n_res, n_par);
    int row = 0;
    for (int a = 0; a < d; ++a) {
      for (int b = a; b < d; ++b) {
        const double rw = (a == b) ? 1.0 : std::numbers::sqrt2;
        for (int i = 0; i < m; ++i) {
          const Complex outer = us[i](a) * std::conj(us[i](b));
          const Complex base = w(i) * outer;
          // d model_ab / d theta_ik = i (delta_{a,k+1} - delta_{b,k+1}) base
          if (a >= 1 && a != b) {
            const Complex g = Complex(0.0, 1.0) * base;
            jac(row, i * (d - 1) + (a - 1)) -= rw * g.real();
            jac(row + 1, i * (d - 1) + (a - 1)) -= rw * g.imag();
          }
          if (b >= 1 && a != b) {
            const Complex g = Complex(0.0, -1.0) * base;
            jac(row, i * (d - 1) + (b - 1)) -= rw * g.real();
            jac(row + 1, i * (d - 1) + (b - 1)) -= rw * g.imag();
          }
          // d model_ab / d w_i = u_i(a) conj(u_i(b))
          jac(row, n_phase + i) -= rw * outer.real();
          jac(row + 1, n_phase + i) -= rw * outer.imag();
        }
        row += 2;
      }
    }

    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    bool accepted = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal() +=
          lambda * (jtj.diagonal().array() + 1e-12).matrix();
      const Eigen::VectorXd delta = damped.ldlt().solve(-jtr);
      Eigen::MatrixXd trial = thetas;
      RealVector w_trial = w;
      for (int i = 0; i < m; ++i) {
        for (int k = 0; k < d - 1; ++k) {
          trial(i, k) += delta(i * (d - 1) + k);
        }
        w_trial(i) += delta(n_phase + i);
      }
      const Eigen::VectorXd r_trial = residual_vector(trial, w_trial, nullptr);
      if (r_trial.squaredNorm() < r_norm2) {
        thetas = trial;
        w = w_trial;
        lambda = std::max(lambda / 3.0, 1e-12);
        r = residual_vector(thetas, w, &us);
        r_norm2 = r.squaredNorm();
        accepted = true;
        if (delta.cwiseAbs().maxCoeff() < 1e-13) return;
        break;
      }
      lambda *= 4.0;
      if (lambda > 1e9) return;
    }
    if (!accepted) return;
  }
}

struct RefitResult {
  double residual = std::numeric_limits<double>::infinity();
  RealVector weights;
  Eigen::MatrixXd thetas;
};

RefitResult lm_fit(const Matrix& xi, Eigen::MatrixXd thetas, Rng& rng,
                   int outer_rounds = 14) {
  const int d = static_cast<int>(xi.rows());
  const int m = static_cast<int>(thetas.rows());
  RefitResult best;

  double previous = std::numeric_limits<double>::infinity();
  for (int round = 0; round < outer_rounds; ++round) {
    std::vector<Vector> us;
    us.reserve(m);
    for (int i = 0; i < m; ++i) {
      us.push_back(torus_point(thetas.row(i).transpose()));
    }
    RealVector w = solve_weights(xi, us);

    // Re-randomize terms the weight solver zeroed out; they contribute
    // nothing where they are, so give them a fresh chance elsewhere.
    for (int i = 0; i < m; ++i) {
      if (w(i) <= 0.0 && round + 1 < outer_rounds) {
        for (int k = 0; k < d - 1; ++k) {
          thetas(i, k) = rng.uniform(0.0, kTwoPi);
        }
        w(i) = 1e-3;
      }
    }

    lm_refine(xi, w, thetas, 60);

    // Project back onto nonnegative weights at the refined phases.
    std::vector<Vector> us3;
    for (int i = 0; i < m; ++i) {
      us3.push_back(torus_point(thetas.row(i).transpose()));
    }
    w = solve_weights(xi, us3);
    const double res = model_residual(xi, w, us3);
    if (res < best.residual) {
      best.residual = res;
      best.weights = w;
      best.thetas = thetas;
    }
    if (res < 1e-13 || previous - res < 1e-14) break;
    previous = res;
  }
  return best;
}

std::optional<RandomUnitaryDecomposition> decomposition_if_good(
    const Matrix& xi, const RefitResult& fit, const SearchConfig& cfg,
    double* best_residual) {
  if (!std::isfinite(fit.residual)) return std::nullopt;
  *best_residual = std::min(*best_residual, fit.residual);
  if (fit.residual > cfg.residual_tol) return std::nullopt;
  RandomUnitaryDecomposition dec = make_decomposition(
      fit.weights, phase_vectors_from_rows(fit.thetas), cfg.min_weight);
  const double actual = (xi - dec.reconstruct()).norm();
  *best_residual = std::min(*best_residual, actual);
  if (actual > cfg.residual_tol) return std::nullopt;
  return dec;
}

}  // namespace

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

double wrap_two_pi(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  if (y >= kTwoPi) y = 0.0;
  return y;
}

Vector PhaseVector::unit_vector() const {
  Vector u(phases.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    u(k) = std::polar(1.0, phases(k));
  }
  return u;
}

PhaseVector PhaseVector::from_vector(const Vector& v) {
  PhaseVector pv;
  pv.phases = RealVector::Zero(v.size());
  const double base = std::arg(v(0));
  for (Eigen::Index k = 1; k < v.size(); ++k) {
    pv.phases(k) = wrap_two_pi(std::arg(v(k)) - base);
  }
  return pv;
}

Matrix RandomUnitaryDecomposition::reconstruct() const {
  const int d = dim();
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < terms(); ++i) {
    const Vector u = phase_vectors[i].unit_vector();
    out += weights(i) * (u * u.adjoint());
  }
  return out;
}

Matrix RandomUnitaryDecomposition::implied_unitary(int i) const {
  if (i < 0 || i >= terms()) {
    fail(ErrorCode::InvalidArgument, "term index out of range");
  }
  const int d = dim();
  Matrix u = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    u(k, k) = std::polar(1.0, -phase_vectors[i].phases(k));
  }
  return u;
}

RandomUnitaryDecomposition make_decomposition(
    const RealVector& weights, const std::vector<PhaseVector>& phase_vectors,
    double min_weight) {
  if (weights.size() != static_cast<Eigen::Index>(phase_vectors.size()) ||
      weights.size() == 0) {
    fail(ErrorCode::InvalidArgument,
         "weights and phase vectors must be nonempty and of equal length");
  }

  std::vector<int> keep;
  for (int i = 0; i < weights.size(); ++i) {
    if (weights(i) < -1e-12) {
      fail(ErrorCode::InvalidProbabilityVector,
           "decomposition weight " + std::to_string(i) + " is negative");
    }
    if (weights(i) >= min_weight) keep.push_back(i);
  }
  if (keep.empty()) {
    fail(ErrorCode::InvalidProbabilityVector,
         "all decomposition weights fall below the minimum weight");
  }
  std::stable_sort(keep.begin(), keep.end(),
                   [&](int a, int b) { return weights(a) > weights(b); });

  RandomUnitaryDecomposition dec;
  dec.weights = RealVector(keep.size());
  double total = 0.0;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    dec.weights(i) = weights(keep[i]);
    total += weights(keep[i]);
  }
  dec.weights /= total;

  for (int idx : keep) {
    PhaseVector pv = phase_vectors[idx];
    // Re-gauge by the first component: subtracting a common phase leaves
    // the projector |phi><phi| untouched.
    const double base = pv.phases(0);
    for (Eigen::Index k = 0; k < pv.phases.size(); ++k) {
      pv.phases(k) = wrap_two_pi(pv.phases(k) - base);
    }
    pv.phases(0) = 0.0;
    dec.phase_vectors.push_back(std::move(pv));
  }
  return dec;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

ExtremalityCertificate extremality_test(const SchurChannel& ch, double tol) {
  const KrausSet kraus = canonical_kraus(ch);
  const int r = kraus.count();
  const int d = ch.dim();

  // Stack the diagonals of all products E_i† E_j; the channel is extreme
  // iff these r^2 vectors in C^d are linearly independent.
  Matrix stacked(r * r, d);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      for (int k = 0; k < d; ++k) {
        stacked(i * r + j, k) =
            std::conj(kraus.operators[i](k, k)) * kraus.operators[j](k, k);
      }
    }
  }
  Eigen::JacobiSVD<Matrix> svd(stacked);

  ExtremalityCertificate cert;
  cert.kraus_rank = r;
  cert.tolerance = tol;
  cert.singular_values = svd.singularValues();
  const double sigma_max = std::max(cert.singular_values(0), 1e-300);
  for (Eigen::Index i = 0; i < cert.singular_values.size(); ++i) {
    if (cert.singular_values(i) > tol * sigma_max) ++cert.gram_rank;
  }
  cert.verdict = (cert.gram_rank == r * r) ? ExtremalityVerdict::Extremal
                                           : ExtremalityVerdict::NotExtremal;
  if (cert.verdict == ExtremalityVerdict::Extremal && r * r > d) {
    fail(ErrorCode::Internal,
         "extremality with kraus_rank^2 > dim is impossible");
  }
  cert.not_random_unitary =
      cert.verdict == ExtremalityVerdict::Extremal && r >= 2 &&
      cert.singular_values(cert.gram_rank - 1) > 10.0 * tol * sigma_max;
  return cert;
}

RandomUnitaryDecomposition ru_decompose_qubit(const SchurChannel& ch) {
  if (ch.dim() != 2) {
    fail(ErrorCode::DimensionMismatch,
         "closed-form decomposition applies to dimension 2 only");
  }
  const Complex c = ch.xi()(0, 1);
  const double mag = std::min(std::abs(c), 1.0);
  const double theta = (std::abs(c) > 0.0) ? std::arg(c) : 0.0;

  RealVector w(2);
  w << (1.0 + mag) / 2.0, (1.0 - mag) / 2.0;

  PhaseVector plus, minus;
  plus.phases = RealVector::Zero(2);
  plus.phases(1) = wrap_two_pi(-theta);
  minus.phases = RealVector::Zero(2);
  minus.phases(1) = wrap_two_pi(std::numbers::pi - theta);

  return make_decomposition(w, {plus, minus});
}

SearchResult ru_decompose_search(const SchurChannel& ch,
                                 const SearchConfig& config) {
  const int d = ch.dim();
  const Matrix& xi = ch.xi();
  const int max_terms = config.max_terms > 0 ? config.max_terms : 4 * d;

  SearchResult result;
  double best_residual = std::numeric_limits<double>::infinity();

  const auto succeed = [&](RandomUnitaryDecomposition dec,
                           const std::string& detail) {
    result.outcome = SearchOutcome::Success;
    result.residual = (xi - dec.reconstruct()).norm();
    result.decomposition = std::move(dec);
    result.detail = detail;
    return result;
  };

  if (d == 2) {
    return succeed(ru_decompose_qubit(ch), "qubit");
  }

  if (is_identity_matrix(xi)) {
    return succeed(uniform_phase_decomposition(d), "uniform-phases");
  }

  if (auto sc = spectral_candidate(ch.correlation().spectrum(),
                                   config.min_weight)) {
    const double res = (xi - sc->reconstruct()).norm();
    best_residual = std::min(best_residual, res);
    if (res <= config.residual_tol) return succeed(std::move(*sc), "spectral");
  }

  const ExtremalityCertificate cert = extremality_test(ch);
  if (cert.not_random_unitary) {
    result.outcome = SearchOutcome::NotRandomUnitary;
    result.certificate = cert;
    result.detail = "extremal";
    return result;
  }

  Rng master(config.seed);

  // Greedy peeling, then polish whatever it produced.
  {
    Rng peel_rng = master.stream(1);
    const PeelOutcome po = peel(xi, config, max_terms, peel_rng);
    if (po.complete && !po.weights.empty()) {
      RealVector w = Eigen::Map<const RealVector>(po.weights.data(),
                                                  po.weights.size());
      RandomUnitaryDecomposition dec =
          make_decomposition(w, po.pvs, config.min_weight);
      const double res = (xi - dec.reconstruct()).norm();
      best_residual = std::min(best_residual, res);
      if (res <= config.residual_tol) return succeed(std::move(dec), "peel");

      Eigen::MatrixXd thetas(dec.terms(), d - 1);
      for (int i = 0; i < dec.terms(); ++i) {
        for (int k = 0; k < d - 1; ++k) {
          thetas(i, k) = dec.phase_vectors[i].phases(k + 1);
        }
      }
      Rng polish_rng = master.stream(2);
      const RefitResult fit = lm_fit(xi, std::move(thetas), polish_rng);
      if (auto polished =
              decomposition_if_good(xi, fit, config, &best_residual)) {
        return succeed(std::move(*polished), "peel+refit");
      }
    }
  }

  // Randomized refit sweep over increasing term counts.  Each count reuses
  // the best previous fit, extended by one fresh term, plus fresh random
  // starts; the start budget halves as the count grows.
  {
    Rng refit_rng = master.stream(3);
    const int m0 = std::max(2, ch.correlation().rank());
    RefitResult carry;
    int runs = 0;
    const int run_budget = std::max(60, 8 * config.starts);

    for (int m = m0; m <= max_terms && runs < run_budget; ++m) {
      std::vector<Eigen::MatrixXd> starts;
      if (carry.thetas.rows() > 0) {
        Eigen::MatrixXd grown(m, d - 1);
        grown.setZero();
        const int copy = std::min<int>(carry.thetas.rows(), m);
        grown.topRows(copy) = carry.thetas.topRows(copy);
        for (int i = copy; i < m; ++i) {
          for (int k = 0; k < d - 1; ++k) {
            grown(i, k) = refit_rng.uniform(0.0, kTwoPi);
          }
        }
        starts.push_back(std::move(grown));
      }
      const int fresh =
          std::max(6, config.starts >> std::min(10, m - m0));
      for (int s = 0; s < fresh; ++s) {
        Eigen::MatrixXd th(m, d - 1);
        for (int i = 0; i < m; ++i) {
          for (int k = 0; k < d - 1; ++k) {
            th(i, k) = refit_rng.uniform(0.0, kTwoPi);
          }
        }
        starts.push_back(std::move(th));
      }

      RefitResult best_at_m;
      for (Eigen::MatrixXd& th : starts) {
        if (runs >= run_budget) break;
        ++runs;
        RefitResult fit = lm_fit(xi, std::move(th), refit_rng);
        if (fit.residual < best_at_m.residual) best_at_m = fit;
        if (auto dec =
                decomposition_if_good(xi, fit, config, &best_residual)) {
          return succeed(std::move(*dec),
                         "refit(m=" + std::to_string(m) + ")");
        }
      }
      if (best_at_m.thetas.rows() > 0 &&
          best_at_m.residual < carry.residual) {
        carry = std::move(best_at_m);
      }
    }
  }

  result.outcome = SearchOutcome::Inconclusive;
  result.residual = best_residual;
  result.detail = "no decomposition found within the term budget";
  return result;
}

VerifyReport verify_decomposition(const RandomUnitaryDecomposition& dec,
                                  const SchurChannel& ch) {
  if (dec.dim() != ch.dim()) {
    fail(ErrorCode::DimensionMismatch,
         "decomposition dimension does not match the channel");
  }
  VerifyReport report;
  report.residual = (ch.xi() - dec.reconstruct()).norm();
  report.shannon_bits = shannon_entropy(dec.weights);

  const std::vector<Vector> us = unit_vectors(dec);
  const int m = dec.terms();
  report.gram = Matrix(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      report.gram(i, j) = us[i].dot(us[j]) / static_cast<double>(ch.dim());
    }
  }
  return report;
}

bool orthogonality_check(const RandomUnitaryDecomposition& dec, double tol) {
  const std::vector<Vector> us = unit_vectors(dec);
  for (std::size_t i = 0; i < us.size(); ++i) {
    for (std::size_t j = i + 1; j < us.size(); ++j) {
      if (std::abs(us[i].dot(us[j])) > dec.dim() * tol) return false;
    }
  }
  return true;
}

}  // namespace decolab
