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

#include "core/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <utility>

#include "core/entropy.hpp"
#include "core/reference.hpp"

namespace decolab {

namespace {

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return std::string(buf);
}

// Collects the first failure and lets the criterion keep its summary
// statistics; details stay deterministic because every number fed into them
// is derived from the seed alone.
struct Check {
  bool ok = true;
  std::string first_failure;

  void require(bool condition, const std::string& message) {
    if (!condition && ok) {
      ok = false;
      first_failure = message;
    }
  }
};

Matrix random_observable(int dim, Rng& rng) {
  Matrix obs(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      obs(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  return obs;
}

// Criterion 1: the canonical Kraus set and the entrywise action are the same
// map, in both pictures, and the two pictures are mutually adjoint.
CriterionResult check_schur_kraus(Rng rng) {
  Check check;
  double max_dev = 0.0;
  int channels = 0;

  for (int d = 2; d <= 6; ++d) {
    for (int trial = 0; trial < 100; ++trial) {
      const int rank = 1 + static_cast<int>(rng.below(d));
      const SchurChannel ch =
          SchurChannel::from_matrix(random_correlation(d, rank, rng));
      const KrausSet kraus = canonical_kraus(ch);
      check.require(kraus.count() == ch.correlation().rank(),
                    fmt("Kraus count %d != rank %d at d=%d", kraus.count(),
                        ch.correlation().rank(), d));

      const Matrix obs = random_observable(d, rng);
      const Matrix heis = ch.apply_heisenberg(obs);
      const double dev_h =
          (kraus_apply_heisenberg(kraus, obs) - heis).cwiseAbs().maxCoeff();

      const DensityMatrix rho = DensityMatrix::validate(random_density(d, rng));
      const Matrix schro = ch.apply_schrodinger(rho).matrix();
      const double dev_s =
          (kraus_apply_schrodinger(kraus, rho.matrix()) - schro)
              .cwiseAbs()
              .maxCoeff();

      const Complex lhs = (heis * rho.matrix()).trace();
      const Complex rhs = (obs * schro).trace();
      const double dev_adj = std::abs(lhs - rhs);

      max_dev = std::max({max_dev, dev_h, dev_s, dev_adj});
      ++channels;
    }
  }
  check.require(max_dev <= 1e-10,
                fmt("action mismatch %.3e exceeds 1e-10", max_dev));

  CriterionResult result;
  result.id = "schur-kraus";
  result.name = "Kraus and entrywise actions agree in both pictures";
  result.pass = check.ok;
  result.details =
      check.ok ? fmt("%d channels, max deviation %.3e", channels, max_dev)
               : check.first_failure;
  return result;
}

// Criterion 2: qubit feedback recovery is exact, and the classical record
// entropy equals the exchange entropy of the mixed state.
CriterionResult check_qubit_recovery(Rng rng) {
  Check check;
  double min_fidelity = 1.0;
  double max_entropy_dev = 0.0;

  for (int trial = 0; trial < 200; ++trial) {
    const Complex c =
        std::polar(rng.uniform(), rng.uniform(0.0, 2.0 * std::numbers::pi));
    const SchurChannel ch = SchurChannel::from_matrix(qubit_correlation(c));

    const SearchResult search = ru_decompose_search(ch);
    check.require(search.outcome == SearchOutcome::Success,
                  fmt("qubit search failed on trial %d", trial));
    if (search.outcome != SearchOutcome::Success) continue;

    const DensityMatrix rho =
        DensityMatrix::validate(random_pure_density(2, rng));
    const RecoveryReport report = simulate_feedback_recovery(
        ch, *search.decomposition, rho, 0, rng.next_u64());
    min_fidelity = std::min(min_fidelity, report.worst_case_fidelity);

    const double h_p = shannon_entropy(search.decomposition->weights);
    const double s_mixed = von_neumann_entropy(ch.xi() / 2.0);
    max_entropy_dev = std::max(max_entropy_dev, std::abs(h_p - s_mixed));
  }

  check.require(min_fidelity >= 1.0 - 1e-9,
                fmt("recovery fidelity dropped to %.12f", min_fidelity));
  check.require(max_entropy_dev <= 1e-9,
                fmt("H(p) vs exchange entropy deviation %.3e", max_entropy_dev));

  CriterionResult result;
  result.id = "qubit-recovery";
  result.name = "Qubit feedback recovery is perfect, H(p) matches S_ex";
  result.pass = check.ok;
  result.details = check.ok
                       ? fmt("200 channels, min fidelity %.12f, max entropy "
                             "deviation %.3e",
                             min_fidelity, max_entropy_dev)
                       : check.first_failure;
  return result;
}

// Criterion 3: the rank-two qutrit with spectrum (2,1,0) admits a
// decomposition, recovery out of it is perfect, and the classical record
// strictly exceeds the exchange entropy.
CriterionResult check_qutrit_gap(Rng rng) {
  Check check;
  const SchurChannel ch = SchurChannel::from_matrix(strict_gap_qutrit());

  SearchConfig config;
  config.seed = rng.next_u64();
  const SearchResult search = ru_decompose_search(ch, config);
  check.require(search.outcome == SearchOutcome::Success,
                fmt("search ended in %s",
                    search.outcome == SearchOutcome::NotRandomUnitary
                        ? "NotRandomUnitary"
                        : "Inconclusive"));

  double fidelity = 0.0;
  double gap = 0.0;
  double residual = search.residual;
  if (search.outcome == SearchOutcome::Success) {
    check.require(residual <= 1e-8,
                  fmt("residual %.3e exceeds 1e-8", residual));

    const DensityMatrix rho =
        DensityMatrix::validate(random_pure_density(3, rng));
    const RecoveryReport report = simulate_feedback_recovery(
        ch, *search.decomposition, rho, 0, rng.next_u64());
    fidelity = report.worst_case_fidelity;
    check.require(fidelity >= 1.0 - 1e-7,
                  fmt("recovery fidelity %.12f below 1 - 1e-7", fidelity));

    const double h_p = shannon_entropy(search.decomposition->weights);
    gap = h_p - von_neumann_entropy(ch.xi() / 3.0);
    check.require(gap > 0.01,
                  fmt("information gap %.6f not above 0.01 bits", gap));
  }

  CriterionResult result;
  result.id = "qutrit-gap-recovery";
  result.name = "Lopsided qutrit: decomposition, perfect recovery, strict gap";
  result.pass = check.ok;
  result.details =
      check.ok ? fmt("residual %.3e, fidelity %.12f, gap %.6f bits", residual,
                     fidelity, gap)
               : check.first_failure;
  return result;
}

// Criterion 4: the extreme rank-two channel at d=4 is certified not random
// unitary and every measured recovery protocol stays visibly below 1.
CriterionResult check_extremal_impossibility(Rng rng) {
  Check check;
  const SchurChannel ch = SchurChannel::from_matrix(extremal_rank2_d4());

  const ExtremalityCertificate cert = extremality_test(ch);
  check.require(cert.verdict == ExtremalityVerdict::Extremal,
                "channel not certified extremal");
  check.require(cert.kraus_rank == 2,
                fmt("Kraus rank %d, expected 2", cert.kraus_rank));
  check.require(cert.not_random_unitary,
                "certificate does not exclude unitary mixtures");

  const RecoveryReport report =
      optimize_recovery_measurement(ch, 4, 256, rng.next_u64());
  const double fidelity = report.average_entanglement_fidelity;
  check.require(fidelity < 1.0 - 1e-3,
                fmt("optimized fidelity %.6f reaches 1 - 1e-3", fidelity));

  CriterionResult result;
  result.id = "extremal-impossibility";
  result.name = "Extreme rank-2 channel at d=4 defeats measured recovery";
  result.pass = check.ok;
  result.details = check.ok
                       ? fmt("certified with rank %d, best protocol fidelity "
                             "%.6f",
                             cert.kraus_rank, fidelity)
                       : check.first_failure;
  return result;
}

// Criterion 5: the spectral, dilation, and decomposition routes to the
// exchange entropy agree.
CriterionResult check_entropy_routes(Rng rng) {
  Check check;
  double max_spread = 0.0;

  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(4));
    const int rank = 1 + static_cast<int>(rng.below(d));
    const SchurChannel ch =
        SchurChannel::from_matrix(random_correlation(d, rank, rng));
    const DensityMatrix rho = DensityMatrix::validate(random_density(d, rng));

    const double direct = entropy_exchange(ch, rho);
    const double via_env =
        entropy_exchange_via_dilation(DilationModel::build(ch), rho);
    max_spread = std::max(max_spread, std::abs(direct - via_env));
  }

  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(4));
    const int terms = 2 + static_cast<int>(rng.below(d));
    const RandomUnitaryDecomposition dec =
        random_planted_decomposition(d, terms, rng);
    const SchurChannel ch = SchurChannel::from_matrix(dec.reconstruct());
    const DensityMatrix rho = DensityMatrix::validate(random_density(d, rng));

    const double direct = entropy_exchange(ch, rho);
    const double via_env =
        entropy_exchange_via_dilation(DilationModel::build(ch), rho);
    const double via_dec = entropy_exchange_ru(dec, rho);
    max_spread = std::max({max_spread, std::abs(direct - via_env),
                           std::abs(direct - via_dec)});
  }

  check.require(max_spread <= 1e-9,
                fmt("route disagreement %.3e exceeds 1e-9", max_spread));

  CriterionResult result;
  result.id = "entropy-routes";
  result.name = "Three entropy-exchange routes agree";
  result.pass = check.ok;
  result.details = check.ok
                       ? fmt("400 instances, max disagreement %.3e", max_spread)
                       : check.first_failure;
  return result;
}

RandomUnitaryDecomposition fourier_decomposition(int d, Rng& rng) {
  RealVector weights(d);
  std::vector<PhaseVector> phases;
  for (int j = 0; j < d; ++j) {
    weights(j) = rng.uniform(0.2, 1.0);
    PhaseVector pv;
    pv.phases = RealVector(d);
    for (int k = 0; k < d; ++k) {
      pv.phases(k) = wrap_two_pi(2.0 * std::numbers::pi * j * k / d);
    }
    phases.push_back(std::move(pv));
  }
  return make_decomposition(weights, phases);
}

// Criterion 6: entropy production never exceeds the exchange entropy, the
// classical record never falls below it, and at the maximally mixed state
// equality holds exactly for orthogonal unitaries and fails for the
// constructed non-orthogonal pair.
CriterionResult check_entropy_bounds(Rng rng) {
  Check check;
  double max_production_excess = -1.0;
  double min_gap = 1.0;

  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(4));
    const int terms = 2 + static_cast<int>(rng.below(d + 1));
    const RandomUnitaryDecomposition dec =
        random_planted_decomposition(d, terms, rng);
    const SchurChannel ch = SchurChannel::from_matrix(dec.reconstruct());
    const DensityMatrix rho = DensityMatrix::validate(random_density(d, rng));

    const InfoReport report = check_bounds(ch, rho, &dec);
    max_production_excess =
        std::max(max_production_excess, report.entropy_production - report.s_ex);
    min_gap = std::min(min_gap, *report.bound_gap);
  }
  check.require(max_production_excess <= 1e-9,
                fmt("entropy production exceeds exchange by %.3e",
                    max_production_excess));
  check.require(min_gap >= -1e-9,
                fmt("classical record fell below exchange by %.3e", -min_gap));

  // Orthogonal unitaries, maximally mixed input: the gap closes exactly.
  double max_orthogonal_gap = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Complex c =
        std::polar(rng.uniform(), rng.uniform(0.0, 2.0 * std::numbers::pi));
    const SchurChannel ch = SchurChannel::from_matrix(qubit_correlation(c));
    const RandomUnitaryDecomposition dec = ru_decompose_qubit(ch);
    if (dec.terms() < 2) continue;
    check.require(orthogonality_check(dec),
                  "qubit decomposition not orthogonal");
    const DensityMatrix mixed =
        DensityMatrix::validate(Matrix::Identity(2, 2) / 2.0);
    const InfoReport report = check_bounds(ch, mixed, &dec);
    max_orthogonal_gap =
        std::max(max_orthogonal_gap, std::abs(*report.bound_gap));
  }
  for (int d = 3; d <= 5; ++d) {
    const RandomUnitaryDecomposition dec = fourier_decomposition(d, rng);
    check.require(orthogonality_check(dec),
                  fmt("Fourier decomposition at d=%d not orthogonal", d));
    const SchurChannel ch = SchurChannel::from_matrix(dec.reconstruct());
    const DensityMatrix mixed = DensityMatrix::validate(
        Matrix::Identity(d, d) / static_cast<double>(d));
    const InfoReport report = check_bounds(ch, mixed, &dec);
    max_orthogonal_gap =
        std::max(max_orthogonal_gap, std::abs(*report.bound_gap));
  }
  check.require(max_orthogonal_gap <= 1e-9,
                fmt("orthogonal case gap %.3e not closed", max_orthogonal_gap));

  // Non-orthogonal pair on the qutrit: the same two phase vectors whose
  // overlap is i, so the record stays strictly above the exchange.
  RealVector half(2);
  half << 0.5, 0.5;
  std::vector<PhaseVector> pair(2);
  pair[0].phases = RealVector(3);
  pair[0].phases << 0.0, 1.5 * std::numbers::pi, 1.75 * std::numbers::pi;
  pair[1].phases = RealVector(3);
  pair[1].phases << 0.0, 0.5 * std::numbers::pi, 0.25 * std::numbers::pi;
  const RandomUnitaryDecomposition skew = make_decomposition(half, pair);
  check.require(!orthogonality_check(skew),
                "constructed pair unexpectedly orthogonal");
  const SchurChannel skew_ch = SchurChannel::from_matrix(skew.reconstruct());
  const DensityMatrix mixed3 =
      DensityMatrix::validate(Matrix::Identity(3, 3) / 3.0);
  const InfoReport skew_report = check_bounds(skew_ch, mixed3, &skew);
  check.require(*skew_report.bound_gap > 1e-6,
                fmt("non-orthogonal gap %.3e not strict", *skew_report.bound_gap));

  CriterionResult result;
  result.id = "entropy-bounds";
  result.name = "Entropy bounds hold; equality exactly at orthogonality";
  result.pass = check.ok;
  result.details =
      check.ok ? fmt("bounds slack %.3e / %.3e, orthogonal gap %.3e, skew gap "
                     "%.6f bits",
                     max_production_excess, min_gap, max_orthogonal_gap,
                     *skew_report.bound_gap)
               : check.first_failure;
  return result;
}

// Criterion 7: coherences decay as |xi_lk|^n, composition commutes bitwise,
// and the iterated-recovery correction depends on the outcome tally only.
CriterionResult check_decay_commutation(Rng rng) {
  Check check;
  double max_decay_dev = 0.0;

  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(4));
    const Matrix base = random_correlation(d, d, rng);
    const Matrix strict =
        0.65 * base + 0.35 * Matrix::Identity(d, d);
    const SchurChannel ch = SchurChannel::from_matrix(strict);
    const DensityMatrix rho = DensityMatrix::validate(random_density(d, rng));

    for (int n = 0; n <= 20; ++n) {
      const Matrix out = iterate(ch, n).apply_schrodinger(rho).matrix();
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          const double predicted =
              std::pow(std::abs(ch.xi()(l, k)), n) *
              std::abs(rho.matrix()(k, l));
          max_decay_dev =
              std::max(max_decay_dev, std::abs(std::abs(out(k, l)) - predicted));
        }
      }
    }

    const SchurChannel other = SchurChannel::from_matrix(
        0.65 * random_correlation(d, d, rng) + 0.35 * Matrix::Identity(d, d));
    const double commute_dev =
        (compose(ch, other).xi() - compose(other, ch).xi())
            .cwiseAbs()
            .maxCoeff();
    check.require(commute_dev == 0.0,
                  fmt("composition order changed the result by %.3e",
                      commute_dev));
  }
  check.require(max_decay_dev <= 1e-10,
                fmt("decay law deviation %.3e exceeds 1e-10", max_decay_dev));

  // Tally invariance: two orderings of the same outcome multiset give the
  // bitwise identical correction operator.
  const RandomUnitaryDecomposition dec = random_planted_decomposition(3, 3, rng);
  const SchurChannel ch = SchurChannel::from_matrix(dec.reconstruct());
  std::vector<std::int64_t> counts(dec.terms(), 0);
  std::vector<int> sequence;
  for (int step = 0; step < 40; ++step) {
    const int pick = static_cast<int>(rng.below(dec.terms()));
    ++counts[pick];
    sequence.push_back(pick);
  }
  const Matrix correction = correction_for_counts(dec, counts);
  for (int shuffle = 0; shuffle < 5; ++shuffle) {
    for (int i = static_cast<int>(sequence.size()) - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.below(i + 1));
      std::swap(sequence[i], sequence[j]);
    }
    std::vector<std::int64_t> tally(dec.terms(), 0);
    for (const int pick : sequence) ++tally[pick];
    const Matrix again = correction_for_counts(dec, tally);
    const double dev = (again - correction).cwiseAbs().maxCoeff();
    check.require(dev == 0.0,
                  fmt("shuffled tally changed the correction by %.3e", dev));
  }

  const DensityMatrix rho3 = DensityMatrix::validate(random_density(3, rng));
  const RecoveryReport iterated =
      iterated_recovery(ch, dec, 40, rho3, rng.next_u64());
  check.require(iterated.worst_case_fidelity >= 1.0 - 1e-9,
                fmt("iterated recovery fidelity %.12f",
                    iterated.worst_case_fidelity));

  CriterionResult result;
  result.id = "decay-commutation";
  result.name = "Decay law, commuting composition, tally-only correction";
  result.pass = check.ok;
  result.details =
      check.ok ? fmt("max decay deviation %.3e, iterated fidelity %.12f",
                     max_decay_dev, iterated.worst_case_fidelity)
               : check.first_failure;
  return result;
}

// Criterion 8: extremality certificates never violate the rank bound
// r^2 <= d, and the stronger flag appears only on extremal verdicts with
// at least two Kraus operators.
CriterionResult check_rank_bound(Rng rng) {
  Check check;
  int extremal_count = 0;
  int channels = 0;

  for (int d = 2; d <= 6; ++d) {
    for (int trial = 0; trial < 200; ++trial) {
      const int rank = 1 + static_cast<int>(rng.below(d));
      const SchurChannel ch =
          SchurChannel::from_matrix(random_correlation(d, rank, rng));
      const ExtremalityCertificate cert = extremality_test(ch);
      ++channels;

      if (cert.verdict == ExtremalityVerdict::Extremal) {
        ++extremal_count;
        check.require(cert.kraus_rank * cert.kraus_rank <= d,
                      fmt("extremal certificate with rank %d at d=%d",
                          cert.kraus_rank, d));
      }
      if (cert.not_random_unitary) {
        check.require(cert.verdict == ExtremalityVerdict::Extremal &&
                          cert.kraus_rank >= 2,
                      "exclusion flag on a non-extremal or unitary channel");
      }
    }
  }

  CriterionResult result;
  result.id = "rank-bound";
  result.name = "No extremality certificate violates the rank bound";
  result.pass = check.ok;
  result.details = check.ok ? fmt("%d channels, %d extremal certificates",
                                  channels, extremal_count)
                            : check.first_failure;
  return result;
}

template <typename Fn>
CriterionResult run_guarded(Fn&& fn, Rng rng, const char* id) {
  try {
    return fn(std::move(rng));
  } catch (const Error& e) {
    CriterionResult result;
    result.id = id;
    result.name = id;
    result.pass = false;
    result.details = fmt("error %s: %s", error_code_name(e.code()), e.what());
    return result;
  } catch (const std::exception& e) {
    CriterionResult result;
    result.id = id;
    result.name = id;
    result.pass = false;
    result.details = fmt("exception: %s", e.what());
    return result;
  }
}

}  // namespace

std::vector<CriterionResult> run_reference_suite(std::uint64_t seed) {
  const Rng master(seed);
  std::vector<CriterionResult> results;
  results.push_back(
      run_guarded(check_schur_kraus, master.stream(1), "schur-kraus"));
  results.push_back(
      run_guarded(check_qubit_recovery, master.stream(2), "qubit-recovery"));
  results.push_back(
      run_guarded(check_qutrit_gap, master.stream(3), "qutrit-gap-recovery"));
  results.push_back(run_guarded(check_extremal_impossibility, master.stream(4),
                                "extremal-impossibility"));
  results.push_back(
      run_guarded(check_entropy_routes, master.stream(5), "entropy-routes"));
  results.push_back(
      run_guarded(check_entropy_bounds, master.stream(6), "entropy-bounds"));
  results.push_back(run_guarded(check_decay_commutation, master.stream(7),
                                "decay-commutation"));
  results.push_back(
      run_guarded(check_rank_bound, master.stream(8), "rank-bound"));
  return results;
}

}  // namespace decolab
