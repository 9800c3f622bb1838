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
#include <vector>

#include "core/dilation.hpp"
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

// Joint states are laid out system-major: block (k, l) of size r x r holds
// rho_kl |e_k><e_l|.
Matrix trace_out_env(const Matrix& joint, int d, int r) {
  Matrix out(d, d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      out(k, l) = joint.block(k * r, l * r, r, r).trace();
    }
  }
  return out;
}

Matrix trace_out_sys(const Matrix& joint, int d, int r) {
  Matrix out = Matrix::Zero(r, r);
  for (int k = 0; k < d; ++k) out += joint.block(k * r, k * r, r, r);
  return out;
}

DensityMatrix maximally_mixed(int d) {
  return DensityMatrix::trusted(Matrix::Identity(d, d) / d);
}

DensityMatrix basis_state(int d, int j) {
  Matrix rho = Matrix::Zero(d, d);
  rho(j, j) = 1.0;
  return DensityMatrix::trusted(std::move(rho));
}

}  // namespace

TEST_CASE("canonical environment vectors", "[dilation]") {
  SECTION("full dephasing uses an orthonormal environment") {
    const auto model =
        DilationModel::build(SchurChannel::from_matrix(Matrix::Identity(2, 2)));
    REQUIRE(model.sys_dim() == 2);
    REQUIRE(model.env_dim() == 2);
    CHECK((model.gram() - Matrix::Identity(2, 2)).norm() < 1e-12);
  }

  SECTION("the identity channel needs a single environment dimension") {
    const auto model =
        DilationModel::build(SchurChannel::from_matrix(Matrix::Ones(3, 3)));
    REQUIRE(model.env_dim() == 1);
    for (const Vector& e : model.env_vectors()) {
      CHECK(std::abs(e(0) - Complex(1.0, 0.0)) < 1e-12);
    }
  }

  SECTION("the 0.6 qubit factors through the plane") {
    const auto model =
        DilationModel::build(SchurChannel::from_matrix(qubit_correlation(0.6)));
    REQUIRE(model.env_dim() == 2);
    const Vector& e0 = model.env_vectors()[0];
    const Vector& e1 = model.env_vectors()[1];
    CHECK(std::abs(e0(0) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(e0(1)) < 1e-12);
    CHECK(std::abs(e1(0) - Complex(0.6, 0.0)) < 1e-12);
    CHECK(std::abs(e1(1) - Complex(0.8, 0.0)) < 1e-12);
  }

  SECTION("the Gram matrix reproduces the correlation matrix") {
    Rng rng(1201);
    for (int trial = 0; trial < 100; ++trial) {
      const int d = 2 + static_cast<int>(rng.below(4));
      const auto ch = SchurChannel::from_matrix(
          random_correlation(d, 1 + static_cast<int>(rng.below(d)), rng));
      const auto model = DilationModel::build(ch);
      CHECK(model.env_dim() == ch.correlation().rank());
      CHECK((model.gram() - ch.xi()).cwiseAbs().maxCoeff() < 1e-10);
      for (const Vector& e : model.env_vectors()) {
        CHECK(e.norm() == Catch::Approx(1.0).margin(1e-10));
      }
    }
  }

  SECTION("the isometry satisfies V dagger V = identity") {
    Rng rng(1202);
    for (int trial = 0; trial < 20; ++trial) {
      const int d = 2 + static_cast<int>(rng.below(4));
      const auto ch = SchurChannel::from_matrix(
          random_correlation(d, 1 + static_cast<int>(rng.below(d)), rng));
      const Matrix v = DilationModel::build(ch).isometry();
      CHECK((v.adjoint() * v - Matrix::Identity(d, d)).norm() < 1e-10);
    }
  }
}

TEST_CASE("tracing out the environment gives back the channel", "[dilation]") {
  Rng rng(1203);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(4));
    const auto ch = SchurChannel::from_matrix(
        random_correlation(d, 1 + static_cast<int>(rng.below(d)), rng));
    const auto model = DilationModel::build(ch);
    const auto rho = DensityMatrix::validate(random_density(d, rng));

    const Matrix direct = ch.apply_schrodinger(rho).matrix();
    CHECK((model.apply(rho).matrix() - direct).cwiseAbs().maxCoeff() < 1e-10);

    const Matrix joint = model.joint_state(rho);
    const int r = model.env_dim();
    CHECK(joint.trace().real() == Catch::Approx(1.0).margin(1e-9));
    CHECK((trace_out_env(joint, d, r) - direct).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((trace_out_sys(joint, d, r) - model.env_reduced_state(rho))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }

  SECTION("dimension mismatches are rejected") {
    const auto model =
        DilationModel::build(SchurChannel::from_matrix(qubit_correlation(0.6)));
    const auto rho = maximally_mixed(3);
    CHECK(code_of([&] { model.apply(rho); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { model.joint_state(rho); }) ==
          ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { model.env_reduced_state(rho); }) ==
          ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("environment entropy for hand-checkable states", "[dilation]") {
  SECTION("basis states leave the environment pure") {
    Rng rng(1204);
    const auto ch = SchurChannel::from_matrix(random_correlation(4, 3, rng));
    const auto model = DilationModel::build(ch);
    for (int j = 0; j < 4; ++j) {
      const Matrix sigma = model.env_reduced_state(basis_state(4, j));
      CHECK(von_neumann_entropy(sigma) == Catch::Approx(0.0).margin(1e-10));
    }
  }

  SECTION("full dephasing of the mixed state fills the environment") {
    for (int d = 2; d <= 5; ++d) {
      const auto model =
          DilationModel::build(SchurChannel::from_matrix(Matrix::Identity(d, d)));
      const Matrix sigma = model.env_reduced_state(maximally_mixed(d));
      CHECK(von_neumann_entropy(sigma) ==
            Catch::Approx(std::log2(static_cast<double>(d))).margin(1e-10));
    }
  }

  SECTION("the 0.6 qubit picks up a binary entropy") {
    const auto model =
        DilationModel::build(SchurChannel::from_matrix(qubit_correlation(0.6)));
    const Matrix sigma = model.env_reduced_state(maximally_mixed(2));
    CHECK(von_neumann_entropy(sigma) ==
          Catch::Approx(kBinaryEntropy08).margin(1e-12));
  }
}

TEST_CASE("decomposition-aligned environment", "[dilation]") {
  const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
  const auto dec = ru_decompose_qubit(ch);
  const auto model = DilationModel::from_decomposition(dec);

  SECTION("one environment dimension per term, Gram equals xi") {
    REQUIRE(model.env_dim() == dec.terms());
    CHECK((model.gram() - ch.xi()).cwiseAbs().maxCoeff() < 1e-12);
  }

  SECTION("component moduli carry the weights, independent of k") {
    for (const Vector& e : model.env_vectors()) {
      for (int i = 0; i < dec.terms(); ++i) {
        CHECK(std::abs(e(i)) ==
              Catch::Approx(std::sqrt(dec.weights(i))).margin(1e-12));
      }
    }
  }

  SECTION("computational outcomes have probability p for every input") {
    Rng rng(1205);
    for (int trial = 0; trial < 10; ++trial) {
      const auto rho = DensityMatrix::validate(random_density(2, rng));
      const Matrix sigma = model.env_reduced_state(rho);
      for (int i = 0; i < dec.terms(); ++i) {
        CHECK(sigma(i, i).real() ==
              Catch::Approx(dec.weights(i)).margin(1e-12));
      }
    }
  }
}

TEST_CASE("feedback recovery with a known decomposition", "[dilation][recovery]") {
  SECTION("the identity channel needs no correction and records nothing") {
    const auto ch = SchurChannel::from_matrix(Matrix::Ones(2, 2));
    const auto dec = ru_decompose_qubit(ch);
    REQUIRE(dec.terms() == 1);
    const auto report =
        simulate_feedback_recovery(ch, dec, maximally_mixed(2), 0, 1);
    CHECK(report.worst_case_fidelity >= 1.0 - 1e-12);
    CHECK(report.classical_info_bits == Catch::Approx(0.0).margin(1e-12));
    CHECK(report.outcome_probabilities.size() == 1);
  }

  SECTION("qubit recovery is perfect and the record is a binary entropy") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    const auto dec = ru_decompose_qubit(ch);
    Rng rng(1206);
    const auto rho = DensityMatrix::validate(random_density(2, rng));
    const auto report = simulate_feedback_recovery(ch, dec, rho, 0, 42);
    CHECK(report.worst_case_fidelity >= 1.0 - 1e-9);
    CHECK(report.average_entanglement_fidelity ==
          Catch::Approx(1.0).margin(1e-9));
    CHECK(report.outcome_probabilities(0) == Catch::Approx(0.8).margin(1e-12));
    CHECK(report.outcome_probabilities(1) == Catch::Approx(0.2).margin(1e-12));
    CHECK(report.classical_info_bits ==
          Catch::Approx(kBinaryEntropy08).margin(1e-12));
    CHECK(report.empirical_frequencies.size() == 0);
    CHECK(report.outcome_counts.empty());

    // The corrections undo the implied unitaries.
    REQUIRE(static_cast<int>(report.corrections.size()) == dec.terms());
    for (int i = 0; i < dec.terms(); ++i) {
      const Matrix u = dec.implied_unitary(i);
      CHECK((report.corrections[i] * u - Matrix::Identity(2, 2)).norm() <
            1e-12);
    }
  }

  SECTION("a searched qutrit decomposition recovers just as well") {
    const auto ch = SchurChannel::from_matrix(strict_gap_qutrit());
    const auto search = ru_decompose_search(ch);
    REQUIRE(search.outcome == SearchOutcome::Success);
    Rng rng(1207);
    const auto rho = DensityMatrix::validate(random_density(3, rng));
    const auto report =
        simulate_feedback_recovery(ch, *search.decomposition, rho, 0, 7);
    CHECK(report.worst_case_fidelity >= 1.0 - 1e-7);
  }

  SECTION("recovery is perfect across random planted channels and states") {
    Rng rng(1208);
    double worst = 1.0;
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 2 + static_cast<int>(rng.below(3));
      const auto dec = random_planted_decomposition(
          d, 2 + static_cast<int>(rng.below(3)), rng);
      const auto ch = SchurChannel::from_matrix(dec.reconstruct());
      const auto rho = DensityMatrix::validate(random_density(d, rng));
      const auto report = simulate_feedback_recovery(ch, dec, rho, 0, 3);
      worst = std::min(worst, report.worst_case_fidelity);
    }
    CHECK(worst >= 1.0 - 1e-8);
  }

  SECTION("sampled frequencies track the exact probabilities") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    const auto dec = ru_decompose_qubit(ch);
    const std::int64_t shots = 10000;
    const auto report =
        simulate_feedback_recovery(ch, dec, maximally_mixed(2), shots, 909);
    REQUIRE(report.outcome_counts.size() == 2);
    CHECK(report.outcome_counts[0] + report.outcome_counts[1] == shots);
    const double bound = 5.0 / std::sqrt(static_cast<double>(shots));
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(report.empirical_frequencies(i) -
                     report.outcome_probabilities(i)) < bound);
    }
    CHECK(report.shots == shots);
    CHECK(report.seed == 909);

    const auto again =
        simulate_feedback_recovery(ch, dec, maximally_mixed(2), shots, 909);
    CHECK(again.outcome_counts == report.outcome_counts);
  }

  SECTION("a decomposition of the wrong channel is refused") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    auto dec = ru_decompose_qubit(ch);
    dec.weights(0) = 0.75;
    dec.weights(1) = 0.25;
    CHECK(code_of([&] {
            simulate_feedback_recovery(ch, dec, maximally_mixed(2), 0, 1);
          }) == ErrorCode::DecompositionMismatch);

    const auto good = ru_decompose_qubit(ch);
    CHECK(code_of([&] {
            simulate_feedback_recovery(ch, good, maximally_mixed(3), 0, 1);
          }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([&] {
            simulate_feedback_recovery(ch, good, maximally_mixed(2), -1, 1);
          }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("measured recovery on the canonical environment",
          "[dilation][recovery]") {
  SECTION("the identity channel is recovered exactly") {
    const auto ch = SchurChannel::from_matrix(Matrix::Ones(3, 3));
    const auto report = optimize_recovery_measurement(ch, 0, 2, 5);
    CHECK(report.average_entanglement_fidelity ==
          Catch::Approx(1.0).margin(1e-12));
    CHECK(report.measurement.resolution_defect() < 1e-10);
  }

  SECTION("a decomposable qubit is recovered through the warm start") {
    const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
    const auto report = optimize_recovery_measurement(ch, 0, 4, 11);
    CHECK(report.average_entanglement_fidelity >= 1.0 - 1e-6);
    CHECK(report.average_entanglement_fidelity <= 1.0 + 1e-12);
    CHECK(report.worst_case_fidelity >= 1.0 - 1e-6);
    CHECK(report.measurement.outcomes() == 2);
    CHECK(report.measurement.resolution_defect() < 1e-10);
  }

  SECTION("no measurement defeats the extreme rank-two channel") {
    const auto ch = SchurChannel::from_matrix(extremal_rank2_d4());
    const auto report = optimize_recovery_measurement(ch, 4, 32, 17);
    CHECK(report.average_entanglement_fidelity < 1.0 - 1e-3);
    CHECK(report.average_entanglement_fidelity > 0.9);
    CHECK(report.average_entanglement_fidelity <= 1.0 + 1e-12);
    CHECK(report.measurement.resolution_defect() < 1e-10);
    CHECK(report.outcome_probabilities.sum() ==
          Catch::Approx(1.0).margin(1e-9));
  }

  SECTION("more restarts never hurt at a fixed seed") {
    const auto ch = SchurChannel::from_matrix(extremal_rank2_d4());
    const double f4 =
        optimize_recovery_measurement(ch, 4, 4, 23).average_entanglement_fidelity;
    const double f16 =
        optimize_recovery_measurement(ch, 4, 16, 23).average_entanglement_fidelity;
    const double f64 =
        optimize_recovery_measurement(ch, 4, 64, 23).average_entanglement_fidelity;
    CHECK(f4 <= f16 + 1e-15);
    CHECK(f16 <= f64 + 1e-15);
  }

  SECTION("invalid requests are rejected") {
    const auto ch = SchurChannel::from_matrix(extremal_rank2_d4());
    CHECK(code_of([&] { optimize_recovery_measurement(ch, 1, 4, 1); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] { optimize_recovery_measurement(ch, 4, -1, 1); }) ==
          ErrorCode::InvalidArgument);
    // No warm start exists here, so zero restarts leave nothing to try.
    CHECK(code_of([&] { optimize_recovery_measurement(ch, 4, 0, 1); }) ==
          ErrorCode::InvalidArgument);
  }
}

TEST_CASE("iterated decoherence with a tally-only correction",
          "[dilation][recovery]") {
  const auto ch = SchurChannel::from_matrix(qubit_correlation(0.6));
  const auto dec = ru_decompose_qubit(ch);

  SECTION("five rounds undo exactly") {
    Rng rng(1209);
    const auto rho = DensityMatrix::validate(random_density(2, rng));
    const auto report = iterated_recovery(ch, dec, 5, rho, 31);
    CHECK(report.worst_case_fidelity >= 1.0 - 1e-8);
    std::int64_t total = 0;
    for (const auto c : report.outcome_counts) total += c;
    CHECK(total == 5);
    CHECK(report.shots == 5);
  }

  SECTION("zero rounds are a no-op") {
    const auto report = iterated_recovery(ch, dec, 0, maximally_mixed(2), 31);
    CHECK(report.worst_case_fidelity >= 1.0 - 1e-12);
    CHECK(report.empirical_frequencies.size() == 0);
    for (const auto c : report.outcome_counts) CHECK(c == 0);
  }

  SECTION("a searched qutrit decomposition survives three rounds") {
    const auto qch = SchurChannel::from_matrix(strict_gap_qutrit());
    const auto search = ru_decompose_search(qch);
    REQUIRE(search.outcome == SearchOutcome::Success);
    Rng rng(1210);
    const auto rho = DensityMatrix::validate(random_density(3, rng));
    const auto report =
        iterated_recovery(qch, *search.decomposition, 3, rho, 77);
    CHECK(report.worst_case_fidelity >= 1.0 - 1e-7);
  }

  SECTION("the tally determines the correction, not the order") {
    const Matrix direct =
        dec.implied_unitary(0).adjoint() * dec.implied_unitary(1).adjoint();
    const Matrix from_counts = correction_for_counts(dec, {1, 1});
    CHECK((direct - from_counts).cwiseAbs().maxCoeff() < 1e-15);
  }

  SECTION("bad tallies are rejected") {
    CHECK(code_of([&] { correction_for_counts(dec, {1, 2, 3}); }) ==
          ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { correction_for_counts(dec, {1, -2}); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] {
            iterated_recovery(ch, dec, -1, maximally_mixed(2), 1);
          }) == ErrorCode::InvalidArgument);
  }
}
