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

#include "decolab/decolab.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "core/decompose.hpp"
#include "core/dilation.hpp"
#include "core/entropy.hpp"
#include "core/reference.hpp"
#include "core/suite.hpp"

using decolab::Complex;
using decolab::Error;
using decolab::ErrorCode;
using decolab::Matrix;
using decolab::RealVector;

// Handle types carry exactly one core object; the C surface owns them.
struct decolab_channel {
  decolab::SchurChannel impl;
};
struct decolab_decomposition {
  decolab::RandomUnitaryDecomposition impl;
};
struct decolab_search_result {
  decolab::SearchResult impl;
};
struct decolab_dilation {
  decolab::DilationModel impl;
};
struct decolab_recovery {
  decolab::RecoveryReport impl;
};
struct decolab_suite_result {
  std::vector<decolab::CriterionResult> impl;
};

namespace {

thread_local std::string g_last_error;

decolab_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return DECOLAB_INVALID_ARGUMENT;
    case ErrorCode::NotHermitian:
      return DECOLAB_NOT_HERMITIAN;
    case ErrorCode::NotPSD:
      return DECOLAB_NOT_PSD;
    case ErrorCode::DiagonalNotUnit:
      return DECOLAB_DIAGONAL_NOT_UNIT;
    case ErrorCode::NotNormalized:
      return DECOLAB_NOT_NORMALIZED;
    case ErrorCode::DimensionMismatch:
      return DECOLAB_DIMENSION_MISMATCH;
    case ErrorCode::ProjectorsNotOrthogonal:
      return DECOLAB_PROJECTORS_NOT_ORTHOGONAL;
    case ErrorCode::ProjectorsIncomplete:
      return DECOLAB_PROJECTORS_INCOMPLETE;
    case ErrorCode::InvalidProbabilityVector:
      return DECOLAB_INVALID_PROBABILITY_VECTOR;
    case ErrorCode::DecompositionMismatch:
      return DECOLAB_DECOMPOSITION_MISMATCH;
    case ErrorCode::Internal:
      return DECOLAB_INTERNAL_ERROR;
  }
  return DECOLAB_INTERNAL_ERROR;
}

// Run a callable, translating every escape route into a status code.
template <typename Fn>
decolab_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return DECOLAB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "allocation failed";
    return DECOLAB_ALLOC_FAILURE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DECOLAB_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown failure";
    return DECOLAB_INTERNAL_ERROR;
  }
}

void require(const void* ptr, const char* what) {
  if (ptr == nullptr) {
    decolab::fail(ErrorCode::InvalidArgument,
                  std::string(what) + " must not be NULL");
  }
}

Matrix read_matrix(int rows, int cols, const double* buf) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int at = 2 * (i * cols + j);
      m(i, j) = Complex(buf[at], buf[at + 1]);
    }
  }
  return m;
}

void write_matrix(const Matrix& m, double* buf) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int at = 2 * (i * cols + j);
      buf[at] = m(i, j).real();
      buf[at + 1] = m(i, j).imag();
    }
  }
}

decolab::DensityMatrix read_state(int dim, const double* rho) {
  require(rho, "rho");
  return decolab::DensityMatrix::validate(read_matrix(dim, dim, rho));
}

void fill_certificate(const decolab::ExtremalityCertificate& cert,
                      decolab_extremality_report* out) {
  out->kraus_rank = cert.kraus_rank;
  out->gram_rank = cert.gram_rank;
  out->is_extremal =
      cert.verdict == decolab::ExtremalityVerdict::Extremal ? 1 : 0;
  out->not_random_unitary = cert.not_random_unitary ? 1 : 0;
  out->singular_count = static_cast<int>(cert.singular_values.size());
  out->tolerance = cert.tolerance;
}

}  // namespace

// ---------------------------------------------------------------------------
// Status and version
// ---------------------------------------------------------------------------

const char* decolab_last_error(void) { return g_last_error.c_str(); }

const char* decolab_status_name(decolab_status status) {
  switch (status) {
    case DECOLAB_OK:
      return "ok";
    case DECOLAB_INVALID_ARGUMENT:
      return "invalid-argument";
    case DECOLAB_NOT_HERMITIAN:
      return "not-hermitian";
    case DECOLAB_NOT_PSD:
      return "not-psd";
    case DECOLAB_DIAGONAL_NOT_UNIT:
      return "diagonal-not-unit";
    case DECOLAB_NOT_NORMALIZED:
      return "not-normalized";
    case DECOLAB_DIMENSION_MISMATCH:
      return "dimension-mismatch";
    case DECOLAB_PROJECTORS_NOT_ORTHOGONAL:
      return "projectors-not-orthogonal";
    case DECOLAB_PROJECTORS_INCOMPLETE:
      return "projectors-incomplete";
    case DECOLAB_INVALID_PROBABILITY_VECTOR:
      return "invalid-probability-vector";
    case DECOLAB_DECOMPOSITION_MISMATCH:
      return "decomposition-mismatch";
    case DECOLAB_ALLOC_FAILURE:
      return "alloc-failure";
    case DECOLAB_INTERNAL_ERROR:
      return "internal-error";
  }
  return "unknown";
}

const char* decolab_version(void) { return "0.1.0"; }

// ---------------------------------------------------------------------------
// Channels
// ---------------------------------------------------------------------------

decolab_status decolab_channel_create(int dim, const double* xi,
                                      decolab_channel** out) {
  return guarded([&] {
    require(xi, "xi");
    require(out, "out");
    auto ch = decolab::SchurChannel::from_matrix(read_matrix(dim, dim, xi));
    *out = new decolab_channel{std::move(ch)};
  });
}

void decolab_channel_destroy(decolab_channel* ch) { delete ch; }

int decolab_channel_dim(const decolab_channel* ch) { return ch->impl.dim(); }

int decolab_channel_rank(const decolab_channel* ch) {
  return ch->impl.correlation().rank();
}

int decolab_channel_is_strict(const decolab_channel* ch) {
  return ch->impl.strict() ? 1 : 0;
}

decolab_status decolab_channel_matrix(const decolab_channel* ch, double* xi) {
  return guarded([&] {
    require(ch, "ch");
    require(xi, "xi");
    write_matrix(ch->impl.xi(), xi);
  });
}

decolab_status decolab_channel_apply_schrodinger(const decolab_channel* ch,
                                                 const double* rho,
                                                 double* out) {
  return guarded([&] {
    require(ch, "ch");
    require(out, "out");
    const auto state = read_state(ch->impl.dim(), rho);
    write_matrix(ch->impl.apply_schrodinger(state).matrix(), out);
  });
}

decolab_status decolab_channel_apply_heisenberg(const decolab_channel* ch,
                                                const double* obs,
                                                double* out) {
  return guarded([&] {
    require(ch, "ch");
    require(obs, "obs");
    require(out, "out");
    const int d = ch->impl.dim();
    write_matrix(ch->impl.apply_heisenberg(read_matrix(d, d, obs)), out);
  });
}

decolab_status decolab_channel_iterate(const decolab_channel* ch, int64_t n,
                                       decolab_channel** out) {
  return guarded([&] {
    require(ch, "ch");
    require(out, "out");
    *out = new decolab_channel{decolab::iterate(ch->impl, n)};
  });
}

decolab_status decolab_channel_compose(const decolab_channel* a,
                                       const decolab_channel* b,
                                       decolab_channel** out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = new decolab_channel{decolab::compose(a->impl, b->impl)};
  });
}

decolab_status decolab_dephase_limit(int dim, const double* rho, double* out) {
  return guarded([&] {
    require(out, "out");
    const auto state = read_state(dim, rho);
    write_matrix(decolab::dephase_limit(state).matrix(), out);
  });
}

int decolab_channel_kraus_count(const decolab_channel* ch) {
  return ch->impl.correlation().rank();
}

decolab_status decolab_channel_kraus(const decolab_channel* ch, int index,
                                     double* op) {
  return guarded([&] {
    require(ch, "ch");
    require(op, "op");
    const auto kraus = decolab::canonical_kraus(ch->impl);
    if (index < 0 || index >= kraus.count()) {
      decolab::fail(ErrorCode::InvalidArgument,
                    "Kraus index " + std::to_string(index) +
                        " out of range [0, " + std::to_string(kraus.count()) +
                        ")");
    }
    write_matrix(kraus.operators[index], op);
  });
}

// ---------------------------------------------------------------------------
// Extremality
// ---------------------------------------------------------------------------

decolab_status decolab_channel_extremality(const decolab_channel* ch,
                                           double tol,
                                           decolab_extremality_report* out) {
  return guarded([&] {
    require(ch, "ch");
    require(out, "out");
    const auto cert = tol > 0.0 ? decolab::extremality_test(ch->impl, tol)
                                : decolab::extremality_test(ch->impl);
    fill_certificate(cert, out);
  });
}

decolab_status decolab_channel_extremality_singular_values(
    const decolab_channel* ch, double tol, double* sv) {
  return guarded([&] {
    require(ch, "ch");
    require(sv, "sv");
    const auto cert = tol > 0.0 ? decolab::extremality_test(ch->impl, tol)
                                : decolab::extremality_test(ch->impl);
    for (Eigen::Index i = 0; i < cert.singular_values.size(); ++i) {
      sv[i] = cert.singular_values(i);
    }
  });
}

// ---------------------------------------------------------------------------
// Decompositions
// ---------------------------------------------------------------------------

decolab_status decolab_decomposition_create(int dim, int terms,
                                            const double* weights,
                                            const double* phases,
                                            decolab_decomposition** out) {
  return guarded([&] {
    require(weights, "weights");
    require(phases, "phases");
    require(out, "out");
    if (dim < 2 || terms < 1) {
      decolab::fail(ErrorCode::InvalidArgument,
                    "need dim >= 2 and at least one term");
    }
    RealVector w(terms);
    std::vector<decolab::PhaseVector> pvs;
    pvs.reserve(terms);
    for (int i = 0; i < terms; ++i) {
      w(i) = weights[i];
      RealVector row(dim);
      for (int k = 0; k < dim; ++k) row(k) = phases[i * dim + k];
      pvs.push_back(decolab::PhaseVector{std::move(row)});
    }
    *out = new decolab_decomposition{decolab::make_decomposition(w, pvs)};
  });
}

void decolab_decomposition_destroy(decolab_decomposition* dec) { delete dec; }

int decolab_decomposition_terms(const decolab_decomposition* dec) {
  return dec->impl.terms();
}

int decolab_decomposition_dim(const decolab_decomposition* dec) {
  return dec->impl.dim();
}

decolab_status decolab_decomposition_weights(const decolab_decomposition* dec,
                                             double* weights) {
  return guarded([&] {
    require(dec, "dec");
    require(weights, "weights");
    for (int i = 0; i < dec->impl.terms(); ++i) weights[i] = dec->impl.weights(i);
  });
}

decolab_status decolab_decomposition_phases(const decolab_decomposition* dec,
                                            double* phases) {
  return guarded([&] {
    require(dec, "dec");
    require(phases, "phases");
    const int d = dec->impl.dim();
    for (int i = 0; i < dec->impl.terms(); ++i) {
      for (int k = 0; k < d; ++k) {
        phases[i * d + k] = dec->impl.phase_vectors[i].phases(k);
      }
    }
  });
}

decolab_status decolab_decomposition_reconstruct(
    const decolab_decomposition* dec, double* xi) {
  return guarded([&] {
    require(dec, "dec");
    require(xi, "xi");
    write_matrix(dec->impl.reconstruct(), xi);
  });
}

decolab_status decolab_decomposition_residual(const decolab_decomposition* dec,
                                              const decolab_channel* ch,
                                              double* out) {
  return guarded([&] {
    require(dec, "dec");
    require(ch, "ch");
    require(out, "out");
    *out = decolab::verify_decomposition(dec->impl, ch->impl).residual;
  });
}

decolab_status decolab_decomposition_shannon_bits(
    const decolab_decomposition* dec, double* out) {
  return guarded([&] {
    require(dec, "dec");
    require(out, "out");
    *out = decolab::shannon_entropy(dec->impl.weights);
  });
}

int decolab_decomposition_orthogonal(const decolab_decomposition* dec,
                                     double tol) {
  const bool ok = tol > 0.0 ? decolab::orthogonality_check(dec->impl, tol)
                            : decolab::orthogonality_check(dec->impl);
  return ok ? 1 : 0;
}

decolab_status decolab_decompose_qubit(const decolab_channel* ch,
                                       decolab_decomposition** out) {
  return guarded([&] {
    require(ch, "ch");
    require(out, "out");
    *out = new decolab_decomposition{decolab::ru_decompose_qubit(ch->impl)};
  });
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

void decolab_search_config_default(decolab_search_config* cfg) {
  if (cfg == nullptr) return;
  const decolab::SearchConfig defaults;
  cfg->residual_tol = defaults.residual_tol;
  cfg->min_weight = defaults.min_weight;
  cfg->starts = defaults.starts;
  cfg->max_terms = defaults.max_terms;
  cfg->seed = defaults.seed;
}

decolab_status decolab_decompose_search(const decolab_channel* ch,
                                        const decolab_search_config* cfg,
                                        decolab_search_result** out) {
  return guarded([&] {
    require(ch, "ch");
    require(out, "out");
    decolab::SearchConfig config;
    if (cfg != nullptr) {
      if (cfg->residual_tol > 0.0) config.residual_tol = cfg->residual_tol;
      if (cfg->min_weight > 0.0) config.min_weight = cfg->min_weight;
      if (cfg->starts > 0) config.starts = cfg->starts;
      if (cfg->max_terms > 0) config.max_terms = cfg->max_terms;
      config.seed = cfg->seed;
    }
    *out = new decolab_search_result{
        decolab::ru_decompose_search(ch->impl, config)};
  });
}

void decolab_search_result_destroy(decolab_search_result* res) { delete res; }

decolab_search_outcome decolab_search_result_outcome(
    const decolab_search_result* res) {
  switch (res->impl.outcome) {
    case decolab::SearchOutcome::Success:
      return DECOLAB_SEARCH_SUCCESS;
    case decolab::SearchOutcome::NotRandomUnitary:
      return DECOLAB_SEARCH_NOT_RANDOM_UNITARY;
    case decolab::SearchOutcome::Inconclusive:
      break;
  }
  return DECOLAB_SEARCH_INCONCLUSIVE;
}

double decolab_search_result_residual(const decolab_search_result* res) {
  return res->impl.residual;
}

const char* decolab_search_result_detail(const decolab_search_result* res) {
  return res->impl.detail.c_str();
}

decolab_status decolab_search_result_decomposition(
    const decolab_search_result* res, decolab_decomposition** out) {
  return guarded([&] {
    require(res, "res");
    require(out, "out");
    if (!res->impl.decomposition.has_value()) {
      decolab::fail(ErrorCode::InvalidArgument,
                    "the search result carries no decomposition");
    }
    *out = new decolab_decomposition{*res->impl.decomposition};
  });
}

decolab_status decolab_search_result_certificate(
    const decolab_search_result* res, decolab_extremality_report* out) {
  return guarded([&] {
    require(res, "res");
    require(out, "out");
    if (!res->impl.certificate.has_value()) {
      decolab::fail(ErrorCode::InvalidArgument,
                    "the search result carries no extremality certificate");
    }
    fill_certificate(*res->impl.certificate, out);
  });
}

// ---------------------------------------------------------------------------
// Dilations
// ---------------------------------------------------------------------------

decolab_status decolab_dilation_create(const decolab_channel* ch,
                                       decolab_dilation** out) {
  return guarded([&] {
    require(ch, "ch");
    require(out, "out");
    *out = new decolab_dilation{decolab::DilationModel::build(ch->impl)};
  });
}

decolab_status decolab_dilation_from_decomposition(
    const decolab_decomposition* dec, decolab_dilation** out) {
  return guarded([&] {
    require(dec, "dec");
    require(out, "out");
    *out = new decolab_dilation{
        decolab::DilationModel::from_decomposition(dec->impl)};
  });
}

void decolab_dilation_destroy(decolab_dilation* model) { delete model; }

int decolab_dilation_sys_dim(const decolab_dilation* model) {
  return model->impl.sys_dim();
}

int decolab_dilation_env_dim(const decolab_dilation* model) {
  return model->impl.env_dim();
}

decolab_status decolab_dilation_gram(const decolab_dilation* model,
                                     double* gram) {
  return guarded([&] {
    require(model, "model");
    require(gram, "gram");
    write_matrix(model->impl.gram(), gram);
  });
}

decolab_status decolab_dilation_isometry(const decolab_dilation* model,
                                         double* v) {
  return guarded([&] {
    require(model, "model");
    require(v, "v");
    write_matrix(model->impl.isometry(), v);
  });
}

decolab_status decolab_dilation_apply(const decolab_dilation* model,
                                      const double* rho, double* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    const auto state = read_state(model->impl.sys_dim(), rho);
    write_matrix(model->impl.apply(state).matrix(), out);
  });
}

decolab_status decolab_dilation_env_state(const decolab_dilation* model,
                                          const double* rho, double* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    const auto state = read_state(model->impl.sys_dim(), rho);
    write_matrix(model->impl.env_reduced_state(state), out);
  });
}

// ---------------------------------------------------------------------------
// Recovery protocols
// ---------------------------------------------------------------------------

decolab_status decolab_recover_feedback(const decolab_channel* ch,
                                        const decolab_decomposition* dec,
                                        const double* rho, int64_t shots,
                                        uint64_t seed, decolab_recovery** out) {
  return guarded([&] {
    require(ch, "ch");
    require(dec, "dec");
    require(out, "out");
    const auto state = read_state(ch->impl.dim(), rho);
    *out = new decolab_recovery{decolab::simulate_feedback_recovery(
        ch->impl, dec->impl, state, shots, seed)};
  });
}

decolab_status decolab_recover_optimize(const decolab_channel* ch,
                                        int outcomes, int restarts,
                                        uint64_t seed, decolab_recovery** out) {
  return guarded([&] {
    require(ch, "ch");
    require(out, "out");
    *out = new decolab_recovery{decolab::optimize_recovery_measurement(
        ch->impl, outcomes, restarts, seed)};
  });
}

decolab_status decolab_recover_iterated(const decolab_channel* ch,
                                        const decolab_decomposition* dec,
                                        int64_t steps, const double* rho,
                                        uint64_t seed, decolab_recovery** out) {
  return guarded([&] {
    require(ch, "ch");
    require(dec, "dec");
    require(out, "out");
    const auto state = read_state(ch->impl.dim(), rho);
    *out = new decolab_recovery{decolab::iterated_recovery(
        ch->impl, dec->impl, steps, state, seed)};
  });
}

void decolab_recovery_destroy(decolab_recovery* rec) { delete rec; }

int decolab_recovery_outcomes(const decolab_recovery* rec) {
  return rec->impl.measurement.outcomes();
}

int decolab_recovery_measurement_dim(const decolab_recovery* rec) {
  return rec->impl.measurement.outcome_vectors.empty()
             ? 0
             : static_cast<int>(rec->impl.measurement.outcome_vectors.front()
                                    .size());
}

double decolab_recovery_worst_fidelity(const decolab_recovery* rec) {
  return rec->impl.worst_case_fidelity;
}

double decolab_recovery_average_fidelity(const decolab_recovery* rec) {
  return rec->impl.average_entanglement_fidelity;
}

double decolab_recovery_info_bits(const decolab_recovery* rec) {
  return rec->impl.classical_info_bits;
}

double decolab_recovery_resolution_defect(const decolab_recovery* rec) {
  return rec->impl.measurement.resolution_defect();
}

decolab_status decolab_recovery_probabilities(const decolab_recovery* rec,
                                              double* p) {
  return guarded([&] {
    require(rec, "rec");
    require(p, "p");
    for (Eigen::Index i = 0; i < rec->impl.outcome_probabilities.size(); ++i) {
      p[i] = rec->impl.outcome_probabilities(i);
    }
  });
}

decolab_status decolab_recovery_counts(const decolab_recovery* rec,
                                       int64_t* counts) {
  return guarded([&] {
    require(rec, "rec");
    require(counts, "counts");
    if (rec->impl.outcome_counts.empty()) {
      decolab::fail(ErrorCode::InvalidArgument,
                    "the report carries no sampled counts (shots = 0)");
    }
    for (std::size_t i = 0; i < rec->impl.outcome_counts.size(); ++i) {
      counts[i] = rec->impl.outcome_counts[i];
    }
  });
}

decolab_status decolab_recovery_frequencies(const decolab_recovery* rec,
                                            double* f) {
  return guarded([&] {
    require(rec, "rec");
    require(f, "f");
    if (rec->impl.empirical_frequencies.size() == 0) {
      decolab::fail(ErrorCode::InvalidArgument,
                    "the report carries no sampled frequencies (shots = 0)");
    }
    for (Eigen::Index i = 0; i < rec->impl.empirical_frequencies.size(); ++i) {
      f[i] = rec->impl.empirical_frequencies(i);
    }
  });
}

decolab_status decolab_recovery_measurement_vector(const decolab_recovery* rec,
                                                   int index, double* mu) {
  return guarded([&] {
    require(rec, "rec");
    require(mu, "mu");
    const auto& vectors = rec->impl.measurement.outcome_vectors;
    if (index < 0 || index >= static_cast<int>(vectors.size())) {
      decolab::fail(ErrorCode::InvalidArgument,
                    "measurement index out of range");
    }
    const decolab::Vector& v = vectors[index];
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      mu[2 * i] = v(i).real();
      mu[2 * i + 1] = v(i).imag();
    }
  });
}

decolab_status decolab_recovery_correction(const decolab_recovery* rec,
                                           int index, double* u) {
  return guarded([&] {
    require(rec, "rec");
    require(u, "u");
    if (index < 0 || index >= static_cast<int>(rec->impl.corrections.size())) {
      decolab::fail(ErrorCode::InvalidArgument,
                    "correction index out of range");
    }
    write_matrix(rec->impl.corrections[index], u);
  });
}

// ---------------------------------------------------------------------------
// Entropy accounting
// ---------------------------------------------------------------------------

decolab_status decolab_entropy_exchange(const decolab_channel* ch,
                                        const double* rho, double* out) {
  return guarded([&] {
    require(ch, "ch");
    require(out, "out");
    const auto state = read_state(ch->impl.dim(), rho);
    *out = decolab::entropy_exchange(ch->impl, state);
  });
}

decolab_status decolab_entropy_exchange_ru(const decolab_decomposition* dec,
                                           const double* rho, double* out) {
  return guarded([&] {
    require(dec, "dec");
    require(out, "out");
    const auto state = read_state(dec->impl.dim(), rho);
    *out = decolab::entropy_exchange_ru(dec->impl, state);
  });
}

decolab_status decolab_check_bounds(const decolab_channel* ch,
                                    const double* rho,
                                    const decolab_decomposition* dec,
                                    decolab_info_report* out) {
  return guarded([&] {
    require(ch, "ch");
    require(out, "out");
    const auto state = read_state(ch->impl.dim(), rho);
    const auto report = decolab::check_bounds(
        ch->impl, state, dec == nullptr ? nullptr : &dec->impl);
    out->s_ex = report.s_ex;
    out->entropy_production = report.entropy_production;
    out->has_record = report.h_p.has_value() ? 1 : 0;
    out->h_p = report.h_p.value_or(0.0);
    out->bound_gap = report.bound_gap.value_or(0.0);
  });
}

decolab_status decolab_reference_frame(const decolab_channel* ch,
                                       const double* p,
                                       double* joint,
                                       double* info_before_bits,
                                       double* info_after_bits) {
  return guarded([&] {
    require(ch, "ch");
    require(p, "p");
    require(info_before_bits, "info_before_bits");
    require(info_after_bits, "info_after_bits");
    const int d = ch->impl.dim();
    RealVector weights(d);
    for (int i = 0; i < d; ++i) weights(i) = p[i];
    const auto report = decolab::reference_frame_state(ch->impl, weights);
    if (joint != nullptr) write_matrix(report.joint, joint);
    *info_before_bits = report.info_before_bits;
    *info_after_bits = report.info_after_bits;
  });
}

// ---------------------------------------------------------------------------
// Plain-state utilities
// ---------------------------------------------------------------------------

decolab_status decolab_state_validate(int dim, const double* rho) {
  return guarded([&] { read_state(dim, rho); });
}

decolab_status decolab_von_neumann_entropy(int dim, const double* rho,
                                           double* out) {
  return guarded([&] {
    require(rho, "rho");
    require(out, "out");
    *out = decolab::von_neumann_entropy(read_matrix(dim, dim, rho));
  });
}

decolab_status decolab_shannon_entropy(int n, const double* p, double* out) {
  return guarded([&] {
    require(p, "p");
    require(out, "out");
    RealVector weights(n);
    for (int i = 0; i < n; ++i) weights(i) = p[i];
    *out = decolab::shannon_entropy(weights);
  });
}

decolab_status decolab_state_fidelity(int dim, const double* a,
                                      const double* b, double* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = decolab::state_fidelity(read_matrix(dim, dim, a),
                                   read_matrix(dim, dim, b));
  });
}

decolab_status decolab_reference_matrix(const char* name, int* dim,
                                        double* xi) {
  return guarded([&] {
    require(name, "name");
    require(dim, "dim");
    Matrix m;
    if (std::strcmp(name, "extremal-rank2-d4") == 0) {
      m = decolab::extremal_rank2_d4();
    } else if (std::strcmp(name, "strict-gap-qutrit") == 0) {
      m = decolab::strict_gap_qutrit();
    } else {
      decolab::fail(ErrorCode::InvalidArgument,
                    std::string("unknown reference matrix \"") + name + "\"");
    }
    const int d = static_cast<int>(m.rows());
    if (xi == nullptr) {
      *dim = d;
      return;
    }
    if (*dim != d) {
      decolab::fail(ErrorCode::DimensionMismatch,
                    "buffer dimension " + std::to_string(*dim) +
                        " does not match reference dimension " +
                        std::to_string(d));
    }
    write_matrix(m, xi);
  });
}

// ---------------------------------------------------------------------------
// Reference criteria suite
// ---------------------------------------------------------------------------

decolab_status decolab_suite_run(uint64_t seed, decolab_suite_result** out) {
  return guarded([&] {
    require(out, "out");
    *out = new decolab_suite_result{decolab::run_reference_suite(seed)};
  });
}

void decolab_suite_result_destroy(decolab_suite_result* res) { delete res; }

int decolab_suite_count(const decolab_suite_result* res) {
  return static_cast<int>(res->impl.size());
}

const char* decolab_suite_id(const decolab_suite_result* res, int index) {
  return res->impl[index].id.c_str();
}

const char* decolab_suite_name(const decolab_suite_result* res, int index) {
  return res->impl[index].name.c_str();
}

int decolab_suite_passed(const decolab_suite_result* res, int index) {
  return res->impl[index].pass ? 1 : 0;
}

const char* decolab_suite_details(const decolab_suite_result* res, int index) {
  return res->impl[index].details.c_str();
}
