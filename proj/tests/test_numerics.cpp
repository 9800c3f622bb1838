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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "core/numerics.hpp"
#include "core/reference.hpp"
#include "core/rng.hpp"

using namespace decolab;

namespace {

Matrix random_hermitian(int d, Rng& rng) {
  Matrix a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      a(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  return Matrix((a + a.adjoint()) / 2.0);
}

Matrix plus_state() {
  Matrix rho(2, 2);
  rho << 0.5, 0.5, 0.5, 0.5;
  return rho;
}

constexpr double kBinaryEntropy08 = 0.7219280948873623;  // H2(0.8)

}  // namespace

TEST_CASE("hermitian_eig handles the identity", "[numerics]") {
  const Spectrum s = hermitian_eig(Matrix::Identity(2, 2));
  REQUIRE(s.eigenvalues.size() == 2);
  CHECK(s.eigenvalues(0) == Catch::Approx(1.0));
  CHECK(s.eigenvalues(1) == Catch::Approx(1.0));
  CHECK((s.eigenvectors.adjoint() * s.eigenvectors - Matrix::Identity(2, 2))
            .norm() < 1e-12);
}

TEST_CASE("hermitian_eig diagonalizes a real symmetric 2x2", "[numerics]") {
  Matrix m(2, 2);
  m << 1.0, 0.6, 0.6, 1.0;
  const Spectrum s = hermitian_eig(m);

  CHECK(s.eigenvalues(0) == Catch::Approx(1.6).margin(1e-12));
  CHECK(s.eigenvalues(1) == Catch::Approx(0.4).margin(1e-12));

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Vector v0(2), v1(2);
  v0 << inv_sqrt2, inv_sqrt2;
  v1 << inv_sqrt2, -inv_sqrt2;
  CHECK((s.eigenvectors.col(0) - v0).norm() < 1e-12);
  CHECK((s.eigenvectors.col(1) - v1).norm() < 1e-12);
}

TEST_CASE("hermitian_eig finds the rank of the extremal d=4 matrix",
          "[numerics]") {
  const Spectrum s = hermitian_eig(extremal_rank2_d4());
  REQUIRE(s.eigenvalues.size() == 4);
  CHECK(s.numerical_rank() == 2);
  CHECK(s.eigenvalues(2) < 1e-10);
  CHECK(s.eigenvalues(3) < 1e-10);
}

TEST_CASE("hermitian_eig rejects non-Hermitian input", "[numerics]") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 3.0, 1.0;
  REQUIRE_THROWS_AS(hermitian_eig(m), Error);
  try {
    hermitian_eig(m);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
  }
}

TEST_CASE("hermitian_eig reconstruction is accurate and deterministic",
          "[numerics]") {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(7));
    const Matrix m = random_hermitian(d, rng);
    const Spectrum s = hermitian_eig(m);

    CHECK((s.reconstruct() - m).norm() <= 1e-10 * (1.0 + m.norm()));
    for (int i = 0; i + 1 < d; ++i) {
      CHECK(s.eigenvalues(i) >= s.eigenvalues(i + 1));
    }
    // Phase convention: the largest-modulus component of each eigenvector
    // is real and nonnegative.
    for (int i = 0; i < d; ++i) {
      Eigen::Index arg = 0;
      s.eigenvectors.col(i).cwiseAbs().maxCoeff(&arg);
      const Complex pivot = s.eigenvectors(arg, i);
      CHECK(std::abs(pivot.imag()) < 1e-12);
      CHECK(pivot.real() >= -1e-12);
    }

    const Spectrum again = hermitian_eig(m);
    CHECK((again.eigenvectors - s.eigenvectors).norm() == 0.0);
  }
}

TEST_CASE("psd_factor produces the lower-triangular factor", "[numerics]") {
  SECTION("identity gives an orthonormal pair") {
    const auto g = psd_factor(Matrix::Identity(2, 2));
    REQUIRE(g.size() == 2);
    REQUIRE(g[0].size() == 2);
    CHECK(std::abs(g[0].dot(g[1])) < 1e-12);
    CHECK(g[0].norm() == Catch::Approx(1.0));
    CHECK(g[1].norm() == Catch::Approx(1.0));
  }

  SECTION("all-ones 3x3 gives three identical unit vectors") {
    const auto g = psd_factor(Matrix::Ones(3, 3));
    REQUIRE(g.size() == 3);
    REQUIRE(g[0].size() == 1);  // numerical rank one
    for (const auto& v : g) {
      CHECK((v - g[0]).norm() < 1e-12);
      CHECK(v.norm() == Catch::Approx(1.0));
    }
  }

  SECTION("hand-checkable 2x2 Cholesky") {
    Matrix m(2, 2);
    m << 1.0, 0.6, 0.6, 1.0;
    const auto g = psd_factor(m);
    REQUIRE(g.size() == 2);
    REQUIRE(g[0].size() == 2);
    Vector g0(2), g1(2);
    g0 << 1.0, 0.0;
    g1 << 0.6, 0.8;
    CHECK((g[0] - g0).norm() < 1e-12);
    CHECK((g[1] - g1).norm() < 1e-12);
  }

  SECTION("rejects an indefinite matrix") {
    Matrix m(2, 2);
    m << 1.0, 2.0, 2.0, 1.0;
    REQUIRE_THROWS_AS(psd_factor(m), Error);
    try {
      psd_factor(m);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotPSD);
    }
  }
}

TEST_CASE("psd_factor reproduces random PSD matrices", "[numerics]") {
  Rng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(5));
    const int r = 1 + static_cast<int>(rng.below(d));
    Matrix w(d, r);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < r; ++j) {
        w(i, j) = Complex(rng.gaussian(), rng.gaussian());
      }
    }
    const Matrix m = w * w.adjoint();

    const auto g = psd_factor(m);
    REQUIRE(static_cast<int>(g.size()) == d);
    CHECK(static_cast<int>(g[0].size()) == hermitian_eig(m).numerical_rank());
    Matrix gram(d, d);
    for (int k = 0; k < d; ++k) {
      for (int l = 0; l < d; ++l) {
        gram(k, l) = g[k].dot(g[l]);
      }
    }
    CHECK((gram - m).norm() <= 1e-10 * (1.0 + m.norm()));
  }
}

TEST_CASE("von_neumann_entropy oracle values", "[numerics]") {
  SECTION("pure projector") {
    Matrix rho = Matrix::Zero(3, 3);
    rho(1, 1) = 1.0;
    CHECK(von_neumann_entropy(rho) == Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("maximally mixed qubit") {
    CHECK(von_neumann_entropy(Matrix::Identity(2, 2) / 2.0) ==
          Catch::Approx(1.0).margin(1e-12));
  }

  SECTION("binary entropy of 0.8") {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 0.8;
    rho(1, 1) = 0.2;
    CHECK(von_neumann_entropy(rho) ==
          Catch::Approx(kBinaryEntropy08).margin(1e-9));
  }

  SECTION("rejects a non-normalized state") {
    REQUIRE_THROWS_AS(von_neumann_entropy(Matrix::Identity(2, 2)), Error);
    try {
      von_neumann_entropy(Matrix::Identity(2, 2));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotNormalized);
    }
  }

  SECTION("rejects a negative eigenvalue") {
    Matrix rho(2, 2);
    rho << 1.5, 0.0, 0.0, -0.5;
    REQUIRE_THROWS_AS(von_neumann_entropy(rho), Error);
    try {
      von_neumann_entropy(rho);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotPSD);
    }
  }
}

TEST_CASE("entropy is invariant under unitary conjugation", "[numerics]") {
  Rng rng(303);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(4));
    const Matrix rho = random_density(d, rng);

    // Random unitary from the QR of a Gaussian matrix.
    Matrix a(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        a(i, j) = Complex(rng.gaussian(), rng.gaussian());
      }
    }
    Eigen::HouseholderQR<Matrix> qr(a);
    const Matrix u = qr.householderQ() * Matrix::Identity(d, d);

    const double s0 = von_neumann_entropy(rho);
    const double s1 = von_neumann_entropy(u * rho * u.adjoint());
    CHECK(std::abs(s0 - s1) < 1e-9);
    CHECK(s0 >= 0.0);
    CHECK(s0 <= std::log2(d) + 1e-12);
  }
}

TEST_CASE("shannon_entropy skips zeros and normalizes nothing", "[numerics]") {
  RealVector p(3);
  p << 0.8, 0.2, 0.0;
  CHECK(shannon_entropy(p) == Catch::Approx(kBinaryEntropy08).margin(1e-12));

  RealVector point(2);
  point << 1.0, 0.0;
  CHECK(shannon_entropy(point) == 0.0);
}

TEST_CASE("state_fidelity oracle values", "[numerics]") {
  SECTION("a state with itself") {
    Rng rng(404);
    const Matrix rho = random_density(3, rng);
    CHECK(state_fidelity(rho, rho) == Catch::Approx(1.0).margin(1e-10));
  }

  SECTION("orthogonal pure states") {
    Matrix zero = Matrix::Zero(2, 2), one = Matrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    one(1, 1) = 1.0;
    CHECK(state_fidelity(zero, one) == Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("pure against maximally mixed") {
    CHECK(state_fidelity(plus_state(), Matrix::Identity(2, 2) / 2.0) ==
          Catch::Approx(0.5).margin(1e-10));
  }

  SECTION("symmetry on random pairs") {
    Rng rng(505);
    for (int trial = 0; trial < 25; ++trial) {
      const int d = 2 + static_cast<int>(rng.below(3));
      const Matrix rho = random_density(d, rng);
      const Matrix sigma = random_density(d, rng);
      const double f = state_fidelity(rho, sigma);
      CHECK(std::abs(f - state_fidelity(sigma, rho)) < 1e-10);
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
    }
  }

  SECTION("rejects a non-state argument") {
    REQUIRE_THROWS_AS(
        state_fidelity(Matrix::Identity(2, 2), Matrix::Identity(2, 2) / 2.0),
        Error);
  }
}
