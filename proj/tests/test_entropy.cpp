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
#include <functional>

#include "core/entropy.hpp"
#include "core/reference.hpp"
#include "core/rng.hpp"

using namespace decolab;

namespace {

constexpr double kBinaryEntropy08 = 0.7219280948873623;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Internal;
}

DensityMatrix maximally_mixed(int d) {
  return DensityMatrix::trusted(Matrix::Identity(d, d) / d);
}

// Reduced states of the d^2 x d^2 reference/system pair, blocks of size d.
Matrix first_marginal(const Matrix& joint, int d) {
  Matrix out(d, d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      out(k, l) = joint.block(k * d, l * d, d, d).trace();
    }
  }
  return out;
}

Matrix second_marginal(const Matrix& joint, int d) {
  Matrix out = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) out += joint.block(k * d, k * d, d, d);
  return out;
}

}  // namespace

TEST_CASE("entropy exchange on hand-checkable inputs", "[entropy]") {
  SECTION("basis states pick up nothing") {
    Rng rng(1301);
    const auto ch = SchurChannel::from_matrix(random_correlation(4, 3, rng));
    for (int j = 0; j < 4; ++j) {
      Matrix rho = Matrix::Zero(4, 4);
      rho(j, j) = 1.0;
      CHECK(entropy_exchange(ch, DensityMatrix::trusted(rho)) ==
            Catch::Approx(0.0).margin(1e-10));
    }
  }

  SECTION("the identity channel exchanges nothing") {
    const auto ch = SchurChannel::from_matrix(Matrix::Ones(3, 3));
    Rng rng(1302);
    const auto rho = DensityMatrix::validate(random_density(3, rng));
    CHECK(entropy_exchange(ch, rho) == Catch::Approx(0.0).margin(1e-10));
  }

  SECTION("the 0.6 qubit at the mixed state exchanges a binary entropy") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    CHECK(entropy_exchange(ch, maximally_mixed(2)) ==
          Catch::Approx(kBinaryEntropy08).margin(1e-12));
  }

  SECTION("only the diagonal of the state matters") {
    Rng rng(1303);
    for (int trial = 0; trial < 20; ++trial) {
      const int d = 2 + static_cast<int>(rng.below(4));
      const auto ch = SchurChannel::from_matrix(
          random_correlation(d, 1 + static_cast<int>(rng.below(d)), rng));
      const auto rho = DensityMatrix::validate(random_density(d, rng));
      CHECK(std::abs(entropy_exchange(ch, rho) -
                     entropy_exchange(ch, dephase_limit(rho))) < 1e-12);
    }
  }

  SECTION("log of the rank is an upper bound") {
    Rng rng(1304);
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 2 + static_cast<int>(rng.below(4));
      const auto ch = SchurChannel::from_matrix(
          random_correlation(d, 1 + static_cast<int>(rng.below(d)), rng));
      const auto rho = DensityMatrix::validate(random_density(d, rng));
      CHECK(entropy_exchange(ch, rho) <=
            std::log2(static_cast<double>(ch.correlation().rank())) + 1e-9);
    }
  }

  SECTION("weaker coherence damping exchanges strictly less") {
    double previous = 2.0;
    for (int step = 0; step <= 9; ++step) {
      const double c = 0.1 * step;
      const auto ch = SchurChannel::from_matrix(qubit_correlation(c));
      const double s = entropy_exchange(ch, maximally_mixed(2));
      CHECK(s < previous);
      previous = s;
    }
  }

  SECTION("state dimension must match") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    CHECK(code_of([&] { entropy_exchange(ch, maximally_mixed(3)); }) ==
          ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("all three entropy routes agree", "[entropy]") {
  SECTION("through the canonical environment") {
    Rng rng(1305);
    for (int trial = 0; trial < 200; ++trial) {
      const int d = 2 + static_cast<int>(rng.below(4));
      const auto ch = SchurChannel::from_matrix(
          random_correlation(d, 1 + static_cast<int>(rng.below(d)), rng));
      const auto rho = DensityMatrix::validate(random_density(d, rng));
      const auto model = DilationModel::build(ch);
      CHECK(std::abs(entropy_exchange(ch, rho) -
                     entropy_exchange_via_dilation(model, rho)) < 1e-9);
    }
  }

  SECTION("full dephasing of the mixed state saturates log d") {
    for (int d = 2; d <= 5; ++d) {
      const auto model = DilationModel::build(
          SchurChannel::from_matrix(Matrix::Identity(d, d)));
      CHECK(entropy_exchange_via_dilation(model, maximally_mixed(d)) ==
            Catch::Approx(std::log2(static_cast<double>(d))).margin(1e-10));
    }
  }

  SECTION("any dilation of the same channel gives the same entropy") {
    Rng rng(1306);
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 2 + static_cast<int>(rng.below(3));
      const auto dec = random_planted_decomposition(
          d, 2 + static_cast<int>(rng.below(3)), rng);
      const auto ch = SchurChannel::from_matrix(dec.reconstruct());
      const auto rho = DensityMatrix::validate(random_density(d, rng));
      const double canonical =
          entropy_exchange_via_dilation(DilationModel::build(ch), rho);
      const double aligned = entropy_exchange_via_dilation(
          DilationModel::from_decomposition(dec), rho);
      CHECK(std::abs(canonical - aligned) < 1e-9);
      CHECK(std::abs(canonical - entropy_exchange(ch, rho)) < 1e-9);
    }
  }

  SECTION("through a random-unitary decomposition") {
    Rng rng(1307);
    for (int trial = 0; trial < 200; ++trial) {
      const int d = 2 + static_cast<int>(rng.below(3));
      const auto dec = random_planted_decomposition(
          d, 2 + static_cast<int>(rng.below(3)), rng);
      const auto ch = SchurChannel::from_matrix(dec.reconstruct());
      const auto rho = DensityMatrix::validate(random_density(d, rng));
      CHECK(std::abs(entropy_exchange(ch, rho) -
                     entropy_exchange_ru(dec, rho)) < 1e-9);
    }
  }

  SECTION("a single unitary exchanges nothing") {
    const auto ch = SchurChannel::from_matrix(Matrix::Ones(2, 2));
    const auto dec = ru_decompose_qubit(ch);
    REQUIRE(dec.terms() == 1);
    CHECK(entropy_exchange_ru(dec, maximally_mixed(2)) ==
          Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("dimension mismatches are rejected") {
    const auto dec =
        ru_decompose_qubit(SchurChannel::from_matrix(qubit_correlation(0.6)));
    CHECK(code_of([&] { entropy_exchange_ru(dec, maximally_mixed(3)); }) ==
          ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("classical record bounds the exchange", "[entropy]") {
  SECTION("the qubit record is tight at the mixed state") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    const auto dec = ru_decompose_qubit(ch);
    const auto report = check_bounds(ch, maximally_mixed(2), &dec);
    REQUIRE(report.h_p.has_value());
    REQUIRE(report.bound_gap.has_value());
    CHECK(*report.h_p == Catch::Approx(kBinaryEntropy08).margin(1e-12));
    CHECK(std::abs(*report.bound_gap) < 1e-9);
    CHECK(orthogonality_check(dec));
  }

  SECTION("the lopsided qutrit pays a strict premium") {
    const auto ch = SchurChannel::from_matrix(strict_gap_qutrit());
    const auto search = ru_decompose_search(ch);
    REQUIRE(search.outcome == SearchOutcome::Success);
    const auto report =
        check_bounds(ch, maximally_mixed(3), &*search.decomposition);
    REQUIRE(report.bound_gap.has_value());
    CHECK(*report.bound_gap > 0.01);
    CHECK_FALSE(orthogonality_check(*search.decomposition));
    CHECK(entropy_exchange_ru(*search.decomposition, maximally_mixed(3)) ==
          Catch::Approx(report.s_ex).margin(1e-9));
  }

  SECTION("the identity channel reports zeros across the board") {
    const auto ch = SchurChannel::from_matrix(Matrix::Ones(2, 2));
    const auto dec = ru_decompose_qubit(ch);
    const auto report = check_bounds(ch, maximally_mixed(2), &dec);
    CHECK(report.s_ex == Catch::Approx(0.0).margin(1e-10));
    CHECK(report.entropy_production == Catch::Approx(0.0).margin(1e-10));
    CHECK(*report.h_p == Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("both inequalities hold across random pairs") {
    Rng rng(1308);
    for (int trial = 0; trial < 100; ++trial) {
      const int d = 2 + static_cast<int>(rng.below(3));
      const auto dec = random_planted_decomposition(
          d, 2 + static_cast<int>(rng.below(3)), rng);
      const auto ch = SchurChannel::from_matrix(dec.reconstruct());
      const auto rho = DensityMatrix::validate(random_density(d, rng));
      const auto report = check_bounds(ch, rho, &dec);
      CHECK(report.entropy_production <= report.s_ex + 1e-9);
      CHECK(*report.bound_gap >= -1e-9);
    }
  }

  SECTION("without a decomposition the record fields stay empty") {
    const auto ch = SchurChannel::from_matrix(extremal_rank2_d4());
    const auto report = check_bounds(ch, maximally_mixed(4));
    CHECK_FALSE(report.h_p.has_value());
    CHECK_FALSE(report.bound_gap.has_value());
    CHECK(report.entropy_production <= report.s_ex + 1e-9);
  }

  SECTION("a decomposition of the wrong channel is refused") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    auto dec = ru_decompose_qubit(ch);
    dec.weights(0) = 0.75;
    dec.weights(1) = 0.25;
    CHECK(code_of([&] { check_bounds(ch, maximally_mixed(2), &dec); }) ==
          ErrorCode::DecompositionMismatch);

    const auto other =
        ru_decompose_qubit(SchurChannel::from_matrix(qubit_correlation(0.5)));
    CHECK(code_of([&] {
            check_bounds(SchurChannel::from_matrix(strict_gap_qutrit()),
                         maximally_mixed(3), &other);
          }) == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("decohered reference frame", "[entropy]") {
  SECTION("a point mass carries no information to lose") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    RealVector p(2);
    p << 1.0, 0.0;
    const auto report = reference_frame_state(ch, p);
    CHECK(report.info_before_bits == Catch::Approx(0.0).margin(1e-12));
    CHECK(report.info_after_bits == Catch::Approx(0.0).margin(1e-10));
  }

  SECTION("the identity channel preserves all correlation") {
    const auto ch = SchurChannel::from_matrix(Matrix::Ones(3, 3));
    RealVector p(3);
    p << 0.5, 0.3, 0.2;
    const auto report = reference_frame_state(ch, p);
    const double h = shannon_entropy(p);
    CHECK(report.info_before_bits == Catch::Approx(2.0 * h).margin(1e-12));
    CHECK(report.info_after_bits == Catch::Approx(2.0 * h).margin(1e-9));
  }

  SECTION("the 0.6 qubit destroys exactly the exchanged entropy") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    RealVector p(2);
    p << 0.5, 0.5;
    const auto report = reference_frame_state(ch, p);
    CHECK(report.info_before_bits == Catch::Approx(2.0).margin(1e-12));
    CHECK(report.info_after_bits ==
          Catch::Approx(2.0 - kBinaryEntropy08).margin(1e-10));

    // The drop equals the entropy exchange on diag(p).
    const auto rho = DensityMatrix::trusted(p.asDiagonal().toDenseMatrix()
                                                .cast<Complex>());
    CHECK(report.info_before_bits - report.info_after_bits ==
          Catch::Approx(entropy_exchange(ch, rho)).margin(1e-10));
  }

  SECTION("both marginals stay diagonal with the given weights") {
    Rng rng(1309);
    const auto ch = SchurChannel::from_matrix(random_correlation(3, 2, rng));
    RealVector p(3);
    p << 0.6, 0.3, 0.1;
    const auto report = reference_frame_state(ch, p);
    CHECK(report.joint.trace().real() == Catch::Approx(1.0).margin(1e-12));

    const Matrix expected = p.asDiagonal().toDenseMatrix().cast<Complex>();
    CHECK((first_marginal(report.joint, 3) - expected).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK((second_marginal(report.joint, 3) - expected).cwiseAbs().maxCoeff() <
          1e-10);
  }

  SECTION("invalid probability vectors are rejected") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    RealVector wrong_length(3);
    wrong_length << 0.5, 0.3, 0.2;
    CHECK(code_of([&] { reference_frame_state(ch, wrong_length); }) ==
          ErrorCode::InvalidProbabilityVector);

    RealVector negative(2);
    negative << 1.2, -0.2;
    CHECK(code_of([&] { reference_frame_state(ch, negative); }) ==
          ErrorCode::InvalidProbabilityVector);

    RealVector off_sum(2);
    off_sum << 0.7, 0.2;
    CHECK(code_of([&] { reference_frame_state(ch, off_sum); }) ==
          ErrorCode::InvalidProbabilityVector);
  }
}
