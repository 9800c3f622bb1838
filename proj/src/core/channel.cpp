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

#include "core/channel.hpp"

#include <cmath>
#include <string>

namespace decolab {

CorrelationMatrix CorrelationMatrix::validate(const Matrix& xi, double tol) {
  if (xi.rows() != xi.cols() || xi.rows() < 2) {
    fail(ErrorCode::InvalidArgument,
         "correlation matrix must be square with dimension >= 2, got " +
             std::to_string(xi.rows()) + "x" + std::to_string(xi.cols()));
  }
  if (!is_hermitian(xi)) {
    fail(ErrorCode::NotHermitian, "correlation matrix is not Hermitian");
  }
  for (Eigen::Index k = 0; k < xi.rows(); ++k) {
    if (std::abs(xi(k, k) - Complex(1.0, 0.0)) > tol) {
      fail(ErrorCode::DiagonalNotUnit,
           "diagonal entry " + std::to_string(k) + " is " +
               std::to_string(xi(k, k).real()) + " + " +
               std::to_string(xi(k, k).imag()) + "i, expected 1");
    }
  }

  Matrix snapped = detail::hermitian_part(xi);
  snapped.diagonal().setConstant(Complex(1.0, 0.0));

  Spectrum spectrum = hermitian_eig(snapped);
  detail::require_psd(spectrum.eigenvalues, detail::absolute_tol(snapped, tol),
                      "correlation matrix");
  const int rank = spectrum.numerical_rank();
  return CorrelationMatrix(std::move(snapped), std::move(spectrum), rank);
}

DensityMatrix DensityMatrix::validate(const Matrix& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    fail(ErrorCode::DimensionMismatch,
         "density matrix must be square and nonempty");
  }
  if (!is_hermitian(rho)) {
    fail(ErrorCode::NotHermitian, "density matrix is not Hermitian");
  }
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > kTraceTol) {
    fail(ErrorCode::NotNormalized, "density matrix trace is " +
                                       std::to_string(trace) +
                                       ", expected 1 within 1e-9");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(detail::hermitian_part(rho),
                                               Eigen::EigenvaluesOnly);
  detail::require_psd(solver.eigenvalues().reverse(),
                      detail::absolute_tol(rho, tol), "density matrix");
  return DensityMatrix(detail::hermitian_part(rho));
}

SchurChannel::SchurChannel(CorrelationMatrix xi)
    : correlation_(std::move(xi)) {
  strict_ = true;
  const Matrix& m = correlation_.matrix();
  for (Eigen::Index k = 0; k < m.rows() && strict_; ++k) {
    for (Eigen::Index l = 0; l < m.cols(); ++l) {
      if (k != l && std::abs(m(k, l)) >= 1.0 - kStrictMargin) {
        strict_ = false;
        break;
      }
    }
  }
}

Matrix SchurChannel::apply_heisenberg(const Matrix& obs) const {
  if (obs.rows() != dim() || obs.cols() != dim()) {
    fail(ErrorCode::DimensionMismatch,
         "observable dimension does not match the channel");
  }
  return xi().cwiseProduct(obs);
}

DensityMatrix SchurChannel::apply_schrodinger(const DensityMatrix& rho) const {
  if (rho.dim() != dim()) {
    fail(ErrorCode::DimensionMismatch,
         "state dimension does not match the channel");
  }
  // Adjoint of the Heisenberg action: entrywise product with the transpose.
  return DensityMatrix::trusted(
      xi().transpose().cwiseProduct(rho.matrix()));
}

KrausSet canonical_kraus(const SchurChannel& ch) {
  const Spectrum& spec = ch.correlation().spectrum();
  const int d = ch.dim();
  const int r = ch.correlation().rank();

  KrausSet out;
  out.canonical = true;
  out.operators.reserve(r);
  for (int i = 0; i < r; ++i) {
    const double scale = std::sqrt(std::max(spec.eigenvalues(i), 0.0));
    Matrix e = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
      e(k, k) = scale * std::conj(spec.eigenvectors(k, i));
    }
    out.operators.push_back(std::move(e));
  }
  return out;
}

Matrix kraus_apply_heisenberg(const KrausSet& kraus, const Matrix& obs) {
  Matrix out = Matrix::Zero(obs.rows(), obs.cols());
  for (const Matrix& e : kraus.operators) out += e.adjoint() * obs * e;
  return out;
}

Matrix kraus_apply_schrodinger(const KrausSet& kraus, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const Matrix& e : kraus.operators) out += e * rho * e.adjoint();
  return out;
}

SchurChannel iterate(const SchurChannel& ch, std::int64_t n) {
  if (n < 0) {
    fail(ErrorCode::InvalidArgument, "iteration count must be nonnegative");
  }
  const int d = ch.dim();
  Matrix powered = Matrix::Constant(d, d, Complex(1.0, 0.0));
  // Plain repeated multiplication keeps iterate(ch, 2) bitwise equal to
  // compose(ch, ch); n is desk scale here.
  for (std::int64_t step = 0; step < n; ++step) {
    powered = powered.cwiseProduct(ch.xi());
  }
  return SchurChannel::from_matrix(powered);
}

SchurChannel compose(const SchurChannel& a, const SchurChannel& b) {
  if (a.dim() != b.dim()) {
    fail(ErrorCode::DimensionMismatch,
         "cannot compose channels of different dimension");
  }
  return SchurChannel::from_matrix(a.xi().cwiseProduct(b.xi()));
}

DensityMatrix dephase_limit(const DensityMatrix& rho) {
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  out.diagonal() = rho.matrix().diagonal();
  return DensityMatrix::trusted(std::move(out));
}

Matrix apply_partial_decoherence(const Matrix& xi,
                                 const std::vector<Matrix>& projectors,
                                 const Matrix& obs, double tol) {
  const auto m = static_cast<Eigen::Index>(projectors.size());
  if (xi.rows() < 1 || xi.rows() != xi.cols()) {
    fail(ErrorCode::InvalidArgument,
         "block correlation matrix must be square and nonempty");
  }
  if (m != xi.rows()) {
    fail(ErrorCode::DimensionMismatch,
         "number of projectors must equal the correlation matrix dimension");
  }
  // A single block admits only the trivial matrix [[1]]; larger block
  // counts go through the full correlation-matrix validation.
  if (m == 1) {
    if (std::abs(xi(0, 0) - 1.0) > tol) {
      fail(ErrorCode::DiagonalNotUnit, "diagonal entry 0 is not 1");
    }
  } else {
    (void)CorrelationMatrix::validate(xi, tol);
  }
  const Eigen::Index d = obs.rows();
  if (obs.cols() != d) {
    fail(ErrorCode::DimensionMismatch, "observable must be square");
  }

  for (Eigen::Index k = 0; k < m; ++k) {
    const Matrix& p = projectors[k];
    if (p.rows() != d || p.cols() != d) {
      fail(ErrorCode::DimensionMismatch,
           "projector " + std::to_string(k) +
               " does not match the observable dimension");
    }
    if (!is_hermitian(p) ||
        (p * p - p).cwiseAbs().maxCoeff() > tol * (1.0 + p.norm())) {
      fail(ErrorCode::ProjectorsNotOrthogonal,
           "operator " + std::to_string(k) +
               " is not an orthogonal projector");
    }
  }
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index l = k + 1; l < m; ++l) {
      if ((projectors[k] * projectors[l]).cwiseAbs().maxCoeff() > tol) {
        fail(ErrorCode::ProjectorsNotOrthogonal,
             "projectors " + std::to_string(k) + " and " + std::to_string(l) +
                 " overlap");
      }
    }
  }
  Matrix sum = Matrix::Zero(d, d);
  for (const Matrix& p : projectors) sum += p;
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol) {
    fail(ErrorCode::ProjectorsIncomplete,
         "projectors do not resolve the identity");
  }

  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Matrix left = projectors[k] * obs;
    for (Eigen::Index l = 0; l < m; ++l) {
      out += xi(k, l) * (left * projectors[l]);
    }
  }
  return out;
}

}  // namespace decolab
