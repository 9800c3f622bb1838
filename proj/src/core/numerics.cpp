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

#include "core/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace decolab {

namespace {

// Eigenvalues this small contribute 0 log 0 = 0 to entropies.
constexpr double kEntropyCutoff = 1e-15;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    fail(ErrorCode::DimensionMismatch,
         std::string(what) + ": expected a nonempty square matrix, got " +
             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// Rotate each eigenvector so its largest-modulus component (lowest index on
// ties) is real and nonnegative.  Descending-order sort plus this phase fix
// makes the decomposition reproducible across runs and platforms.
void fix_phases(Matrix& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double a = std::abs(vectors(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (best > 0.0) {
      const Complex phase = vectors(arg, j) / best;
      vectors.col(j) *= std::conj(phase);
    }
  }
}

void require_density(const Matrix& rho, double tol, const char* what) {
  require_square(rho, what);
  if (!is_hermitian(rho)) {
    fail(ErrorCode::NotHermitian, std::string(what) + ": not Hermitian");
  }
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > kTraceTol) {
    fail(ErrorCode::NotNormalized,
         std::string(what) + ": trace " + std::to_string(trace) +
             " differs from 1 beyond 1e-9");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(detail::hermitian_part(rho),
                                               Eigen::EigenvaluesOnly);
  detail::require_psd(solver.eigenvalues().reverse(),
                      detail::absolute_tol(rho, tol), what);
}

}  // namespace

namespace detail {

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void require_psd(const RealVector& eigenvalues, double tol_abs,
                 const char* what) {
  const double min_eig = eigenvalues.minCoeff();
  if (min_eig < -tol_abs) {
    fail(ErrorCode::NotPSD, std::string(what) +
                                ": smallest eigenvalue " +
                                std::to_string(min_eig) + " below -" +
                                std::to_string(tol_abs));
  }
}

double absolute_tol(const Matrix& m, double tol) {
  return tol * std::max(1.0, m.norm());
}

}  // namespace detail

bool is_hermitian(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

int Spectrum::numerical_rank() const {
  if (eigenvalues.size() == 0) return 0;
  const double cutoff = kRankCutoff * std::abs(eigenvalues(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) > cutoff) ++rank;
  }
  return rank;
}

Matrix Spectrum::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal() *
         eigenvectors.adjoint();
}

Spectrum hermitian_eig(const Matrix& m) {
  require_square(m, "hermitian_eig");
  if (!is_hermitian(m)) {
    fail(ErrorCode::NotHermitian, "hermitian_eig: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(detail::hermitian_part(m));
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::Internal, "hermitian_eig: eigensolver did not converge");
  }
  Spectrum out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  fix_phases(out.eigenvectors);
  return out;
}

std::vector<Vector> psd_factor(const Matrix& m, double tol) {
  const Spectrum spec = hermitian_eig(m);
  const double tol_abs = detail::absolute_tol(m, tol);
  detail::require_psd(spec.eigenvalues, tol_abs, "psd_factor");

  const int d = spec.dim();
  const int r = std::max(spec.numerical_rank(), 1);

  // W holds sqrt(lambda)-scaled eigenvectors; rows of W are the candidate
  // factors in an arbitrary unitary gauge.
  Matrix w(d, r);
  for (int j = 0; j < r; ++j) {
    w.col(j) = std::sqrt(std::max(spec.eigenvalues(j), 0.0)) *
               spec.eigenvectors.col(j);
  }

  // Rotate to the lower-triangular gauge: QR of W^T yields R with
  // L = R^T lower trapezoidal and L L† = W W† = M.
  Eigen::HouseholderQR<Matrix> qr(w.transpose());
  Matrix rmat = qr.matrixQR();
  for (Eigen::Index i = 0; i < rmat.rows(); ++i) {
    for (Eigen::Index j = 0; j < std::min<Eigen::Index>(i, rmat.cols()); ++j) {
      rmat(i, j) = Complex(0.0, 0.0);
    }
  }
  Matrix l = rmat.transpose();

  // Make the leading diagonal real and nonnegative (column phase freedom).
  for (int j = 0; j < r && j < d; ++j) {
    const double a = std::abs(l(j, j));
    if (a > 0.0) l.col(j) *= std::conj(l(j, j)) / a;
  }

  std::vector<Vector> out;
  out.reserve(d);
  for (int k = 0; k < d; ++k) {
    out.push_back(l.row(k).conjugate().transpose());
  }
  return out;
}

double shannon_entropy(const RealVector& p) {
  double bits = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > kEntropyCutoff) bits -= p(i) * std::log2(p(i));
  }
  return bits;
}

double von_neumann_entropy(const Matrix& rho, double tol) {
  require_square(rho, "von_neumann_entropy");
  if (!is_hermitian(rho)) {
    fail(ErrorCode::NotHermitian, "von_neumann_entropy: not Hermitian");
  }
  const Spectrum spec = hermitian_eig(rho);
  detail::require_psd(spec.eigenvalues, detail::absolute_tol(rho, tol),
                      "von_neumann_entropy");
  const double trace = spec.eigenvalues.sum();
  if (std::abs(trace - 1.0) > kTraceTol) {
    fail(ErrorCode::NotNormalized,
         "von_neumann_entropy: trace " + std::to_string(trace) +
             " differs from 1 beyond 1e-9");
  }
  return shannon_entropy(spec.eigenvalues);
}

double state_fidelity(const Matrix& rho, const Matrix& sigma, double tol) {
  require_density(rho, tol, "state_fidelity(rho)");
  require_density(sigma, tol, "state_fidelity(sigma)");
  if (rho.rows() != sigma.rows()) {
    fail(ErrorCode::DimensionMismatch,
         "state_fidelity: dimension mismatch between the two states");
  }

  const Spectrum spec = hermitian_eig(rho);
  Matrix sqrt_rho = spec.eigenvectors;
  for (int j = 0; j < spec.dim(); ++j) {
    sqrt_rho.col(j) *= std::sqrt(std::max(spec.eigenvalues(j), 0.0));
  }
  sqrt_rho = sqrt_rho * spec.eigenvectors.adjoint();

  const Matrix inner = detail::hermitian_part(sqrt_rho * sigma * sqrt_rho);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(inner, Eigen::EigenvaluesOnly);
  double root_sum = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    root_sum += std::sqrt(std::max(solver.eigenvalues()(i), 0.0));
  }
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

}  // namespace decolab
