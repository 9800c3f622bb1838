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
#include <numbers>

#include "core/decompose.hpp"
#include "core/reference.hpp"
#include "core/rng.hpp"

using namespace decolab;

namespace {

constexpr double kPi = std::numbers::pi;

PhaseVector make_phases(std::initializer_list<double> values) {
  PhaseVector pv;
  pv.phases = RealVector(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double v : values) pv.phases(i++) = v;
  return pv;
}

}  // namespace

TEST_CASE("phase vectors are gauge fixed and unimodular", "[decompose]") {
  Vector v(3);
  v << std::polar(2.0, 0.3), std::polar(0.5, 1.2), std::polar(1.0, -0.4);
  const PhaseVector pv = PhaseVector::from_vector(v);

  CHECK(pv.phases(0) == 0.0);
  for (int k = 0; k < 3; ++k) {
    CHECK(pv.phases(k) >= 0.0);
    CHECK(pv.phases(k) < 2.0 * kPi);
  }
  // Moduli are discarded, arguments survive relative to the first entry.
  CHECK(pv.phases(1) == Catch::Approx(0.9).margin(1e-12));
  CHECK(pv.phases(2) == Catch::Approx(2.0 * kPi - 0.7).margin(1e-12));

  const Vector u = pv.unit_vector();
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(std::abs(u(k)) - 1.0) < 1e-15);
  }
}

TEST_CASE("make_decomposition sorts, prunes, and renormalizes",
          "[decompose]") {
  RealVector w(3);
  w << 0.2, 0.8, 1e-14;
  std::vector<PhaseVector> phases = {make_phases({0.0, 1.0}),
                                     make_phases({0.0, 2.0}),
                                     make_phases({0.0, 3.0})};
  const auto dec = make_decomposition(w, phases);

  REQUIRE(dec.terms() == 2);  // the 1e-14 weight is dropped
  CHECK(dec.weights(0) == Catch::Approx(0.8));
  CHECK(dec.weights(1) == Catch::Approx(0.2));
  CHECK(dec.weights.sum() == Catch::Approx(1.0).margin(1e-12));
  CHECK(dec.phase_vectors[0].phases(1) == Catch::Approx(2.0));
  CHECK(dec.phase_vectors[1].phases(1) == Catch::Approx(1.0));

  RealVector bad(2);
  bad << 1.2, -0.2;
  REQUIRE_THROWS_AS(
      make_decomposition(bad, {make_phases({0.0, 1.0}),
                               make_phases({0.0, 2.0})}),
      Error);
}

TEST_CASE("implied unitaries realize the channel branches", "[decompose]") {
  Rng rng(12);
  const auto dec = random_planted_decomposition(3, 2, rng);
  const Matrix xi = dec.reconstruct();
  const auto ch = SchurChannel::from_matrix(xi);
  const Matrix rho = random_density(3, rng);

  Matrix mixed = Matrix::Zero(3, 3);
  for (int i = 0; i < dec.terms(); ++i) {
    const Matrix u = dec.implied_unitary(i);
    CHECK((u * u.adjoint() - Matrix::Identity(3, 3)).norm() < 1e-12);
    mixed += dec.weights(i) * (u * rho * u.adjoint());
  }
  CHECK((mixed - ch.apply_schrodinger(DensityMatrix::validate(rho)).matrix())
            .norm() < 1e-12);
}

TEST_CASE("extremality test", "[decompose]") {
  SECTION("a unitary channel is extremal with one Kraus operator") {
    Vector phi(3);
    phi << 1.0, std::polar(1.0, 0.8), std::polar(1.0, 2.2);
    const auto ch = SchurChannel::from_matrix(Matrix(phi * phi.adjoint()));
    const auto cert = extremality_test(ch);
    CHECK(cert.kraus_rank == 1);
    CHECK(cert.verdict == ExtremalityVerdict::Extremal);
    CHECK_FALSE(cert.not_random_unitary);
  }

  SECTION("the rank-two d=4 matrix is extremal and not random unitary") {
    const auto ch = SchurChannel::from_matrix(extremal_rank2_d4());
    const auto cert = extremality_test(ch);
    CHECK(cert.kraus_rank == 2);
    CHECK(cert.gram_rank == 4);
    CHECK(cert.verdict == ExtremalityVerdict::Extremal);
    CHECK(cert.not_random_unitary);
    // Soundness data behind the flag: every counted singular value clears
    // ten times the rank threshold.
    const double sigma_max = cert.singular_values(0);
    for (int i = 0; i < cert.gram_rank; ++i) {
      CHECK(cert.singular_values(i) > 10.0 * cert.tolerance * sigma_max);
    }
  }

  SECTION("the dephasing qubit is not extremal") {
    const auto ch = SchurChannel::from_matrix(Matrix::Identity(2, 2));
    const auto cert = extremality_test(ch);
    CHECK(cert.kraus_rank == 2);
    CHECK(cert.gram_rank < 4);
    CHECK(cert.verdict == ExtremalityVerdict::NotExtremal);
    CHECK_FALSE(cert.not_random_unitary);
  }

  SECTION("rank bound holds on random channels") {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
      const int d = 2 + static_cast<int>(rng.below(5));
      const auto ch = SchurChannel::from_matrix(
          random_correlation(d, 1 + static_cast<int>(rng.below(d)), rng));
      const auto cert = extremality_test(ch);
      if (cert.verdict == ExtremalityVerdict::Extremal) {
        CHECK(cert.kraus_rank * cert.kraus_rank <= d);
      }
      if (cert.not_random_unitary) {
        CHECK(cert.verdict == ExtremalityVerdict::Extremal);
        CHECK(cert.kraus_rank >= 2);
      }
    }
  }
}

TEST_CASE("exact qubit decomposition", "[decompose]") {
  SECTION("real off-diagonal 0.6") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    const auto dec = ru_decompose_qubit(ch);
    REQUIRE(dec.terms() == 2);
    CHECK(dec.weights(0) == Catch::Approx(0.8).margin(1e-12));
    CHECK(dec.weights(1) == Catch::Approx(0.2).margin(1e-12));
    CHECK(dec.phase_vectors[0].phases(1) == Catch::Approx(0.0).margin(1e-12));
    CHECK(dec.phase_vectors[1].phases(1) == Catch::Approx(kPi).margin(1e-12));
    CHECK((dec.reconstruct() - ch.xi()).norm() < 1e-10);
  }

  SECTION("identity channel collapses to a single term") {
    const auto ch = SchurChannel::from_matrix(Matrix::Ones(2, 2));
    const auto dec = ru_decompose_qubit(ch);
    REQUIRE(dec.terms() == 1);
    CHECK(dec.weights(0) == Catch::Approx(1.0));
    CHECK(dec.phase_vectors[0].phases(1) == Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("imaginary off-diagonal pairs weights with conjugate phases") {
    const auto ch =
        SchurChannel::from_matrix(qubit_correlation(Complex(0.0, 0.5)));
    const auto dec = ru_decompose_qubit(ch);
    REQUIRE(dec.terms() == 2);
    CHECK(dec.weights(0) == Catch::Approx(0.75).margin(1e-12));
    CHECK(dec.weights(1) == Catch::Approx(0.25).margin(1e-12));
    // The heavier term carries phase -theta = 3pi/2, the lighter pi - theta
    // = pi/2; this pairing is forced by the reconstruction identity.
    CHECK(dec.phase_vectors[0].phases(1) ==
          Catch::Approx(1.5 * kPi).margin(1e-12));
    CHECK(dec.phase_vectors[1].phases(1) ==
          Catch::Approx(0.5 * kPi).margin(1e-12));
    CHECK((dec.reconstruct() - ch.xi()).norm() < 1e-12);
  }

  SECTION("wrong dimension is rejected") {
    const auto ch = SchurChannel::from_matrix(Matrix::Ones(3, 3));
    REQUIRE_THROWS_AS(ru_decompose_qubit(ch), Error);
  }
}

TEST_CASE("qubit round trip: residual, entropy match, orthogonality",
          "[decompose]") {
  Rng rng(34);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex c =
        std::polar(rng.uniform(), rng.uniform(0.0, 2.0 * kPi));
    const auto ch = SchurChannel::from_matrix(qubit_correlation(c));
    const auto dec = ru_decompose_qubit(ch);

    const VerifyReport report = verify_decomposition(dec, ch);
    CHECK(report.residual <= 1e-10);
    CHECK(std::abs(report.shannon_bits -
                   von_neumann_entropy(ch.xi() / 2.0)) <= 1e-9);
    CHECK(orthogonality_check(dec));
    if (dec.terms() == 2) {
      CHECK((report.gram - Matrix::Identity(2, 2)).norm() < 1e-10);
    }
  }
}

TEST_CASE("search dispatches closed forms and shortcuts", "[decompose]") {
  SECTION("qubit channels use the exact two-term formula") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    const auto result = ru_decompose_search(ch);
    REQUIRE(result.outcome == SearchOutcome::Success);
    CHECK(result.detail == "qubit");
    CHECK(result.residual <= 1e-10);
  }

  SECTION("complete dephasing uses the uniform phase grid") {
    const auto ch = SchurChannel::from_matrix(Matrix::Identity(3, 3));
    const auto result = ru_decompose_search(ch);
    REQUIRE(result.outcome == SearchOutcome::Success);
    CHECK(result.detail == "uniform-phases");
    REQUIRE(result.decomposition->terms() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(result.decomposition->weights(i) ==
            Catch::Approx(1.0 / 3.0).margin(1e-12));
    }
    CHECK(result.residual <= 1e-12);
    CHECK(orthogonality_check(*result.decomposition));
  }

  SECTION("circulant matrices exit through the spectral shortcut") {
    const Complex a(0.3, 0.2);
    Matrix xi(3, 3);
    xi << 1.0, a, std::conj(a), std::conj(a), 1.0, a, a, std::conj(a), 1.0;
    const auto result = ru_decompose_search(SchurChannel::from_matrix(xi));
    REQUIRE(result.outcome == SearchOutcome::Success);
    CHECK(result.detail == "spectral");
    CHECK(result.residual <= 1e-8);
    CHECK((result.decomposition->reconstruct() - xi).norm() <= 1e-8);
  }

  SECTION("the extremal channel is refused with a certificate") {
    const auto ch = SchurChannel::from_matrix(extremal_rank2_d4());
    const auto result = ru_decompose_search(ch);
    REQUIRE(result.outcome == SearchOutcome::NotRandomUnitary);
    CHECK(result.detail == "extremal");
    REQUIRE(result.certificate.has_value());
    CHECK(result.certificate->verdict == ExtremalityVerdict::Extremal);
    CHECK(result.certificate->kraus_rank == 2);
    CHECK_FALSE(result.decomposition.has_value());
  }
}

TEST_CASE("search solves the lopsided qutrit", "[decompose]") {
  const auto ch = SchurChannel::from_matrix(strict_gap_qutrit());
  SearchConfig config;
  config.seed = 7;
  const auto result = ru_decompose_search(ch, config);

  REQUIRE(result.outcome == SearchOutcome::Success);
  REQUIRE(result.decomposition.has_value());
  CHECK(result.residual <= 1e-8);
  CHECK(result.decomposition->terms() >= 2);

  const VerifyReport report = verify_decomposition(*result.decomposition, ch);
  CHECK(report.residual <= 1e-8);
  // Every decomposition of this matrix is lopsided: the record entropy
  // strictly exceeds the exchange entropy of the mixed state.
  CHECK(report.shannon_bits - von_neumann_entropy(ch.xi() / 3.0) > 0.01);
  CHECK_FALSE(orthogonality_check(*result.decomposition));

  SECTION("the same seed reproduces the identical result") {
    const auto again = ru_decompose_search(ch, config);
    REQUIRE(again.outcome == SearchOutcome::Success);
    CHECK(again.residual == result.residual);
    CHECK((again.decomposition->weights - result.decomposition->weights)
              .norm() == 0.0);
  }
}

TEST_CASE("search recovers a planted two-term mixture", "[decompose]") {
  RealVector w(2);
  w << 0.7, 0.3;
  const std::vector<PhaseVector> phases = {
      make_phases({0.0, 0.9, 2.1}), make_phases({0.0, 4.4, 1.3})};
  const auto planted = make_decomposition(w, phases);
  const auto ch = SchurChannel::from_matrix(planted.reconstruct());

  SearchConfig config;
  config.seed = 99;
  const auto result = ru_decompose_search(ch, config);
  REQUIRE(result.outcome == SearchOutcome::Success);
  CHECK(result.residual <= 1e-8);
  CHECK((result.decomposition->reconstruct() - ch.xi()).norm() <= 1e-8);
}

TEST_CASE("planted decompositions are recovered reliably", "[decompose]") {
  Rng rng(45);
  int successes = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = (trial % 2 == 0) ? 3 : 4;
    const int terms = 2 + static_cast<int>(rng.below(2));
    const auto planted = random_planted_decomposition(d, terms, rng);
    const auto ch = SchurChannel::from_matrix(planted.reconstruct());

    SearchConfig config;
    config.seed = rng.next_u64();
    const auto result = ru_decompose_search(ch, config);
    if (result.outcome == SearchOutcome::Success &&
        result.residual <= 1e-8) {
      ++successes;
    } else {
      // An honest failure is Inconclusive; a certificate here would be
      // unsound because a decomposition exists by construction.
      CHECK(result.outcome == SearchOutcome::Inconclusive);
    }
  }
  CHECK(successes >= 95);
}

TEST_CASE("verify_decomposition flags corrupted weights", "[decompose]") {
  const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
  const auto dec = ru_decompose_qubit(ch);

  RealVector corrupted(2);
  corrupted << 0.5, 0.5;
  const auto broken = make_decomposition(corrupted, dec.phase_vectors);
  CHECK(verify_decomposition(broken, ch).residual > 0.1);
}

TEST_CASE("orthogonality check", "[decompose]") {
  SECTION("single-term decompositions are vacuously orthogonal") {
    RealVector w(1);
    w << 1.0;
    const auto dec = make_decomposition(w, {make_phases({0.0, 1.0, 2.0})});
    CHECK(orthogonality_check(dec));
  }

  SECTION("a non-orthogonal pair is detected") {
    RealVector w(2);
    w << 0.5, 0.5;
    const auto dec = make_decomposition(
        w, {make_phases({0.0, 1.5 * kPi, 1.75 * kPi}),
            make_phases({0.0, 0.5 * kPi, 0.25 * kPi})});
    CHECK_FALSE(orthogonality_check(dec));
  }
}
