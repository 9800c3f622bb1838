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

// decolab command-line front end.  Talks to the library exclusively through
// the public C interface; all report emission and matrix file I/O lives here.
//
// Exit codes: 0 success, 1 validation or parse error, 2 when the requested
// operation is provably impossible (an extremality certificate).  Reports are
// deterministic for a fixed (input, seed, version) triple: no timestamps, no
// environment echoes beyond the resolved seed.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <decolab/decolab.h>

namespace {

using nlohmann::ordered_json;

// Seed used when neither --seed nor DECOLAB_SEED is given.  Fixed so that
// repeated runs of the same command line are byte-identical.
constexpr std::uint64_t kDefaultSeed = 20260819ULL;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitImpossible = 2;

[[noreturn]] void die(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(kExitError);
}

// Escalate a library failure into exit 1 with the status name and the
// thread-local detail message.
void check(decolab_status status) {
  if (status != DECOLAB_OK) {
    die(std::string(decolab_status_name(status)) + ": " +
        decolab_last_error());
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/* ---------------------------------------------------------------------- */
/* Matrix files                                                            */
/* ---------------------------------------------------------------------- */

// A complex square matrix as the C interface wants it: row-major, entry
// (i, j) at buf[2*(i*dim + j)] (real part) and buf[2*(i*dim + j) + 1]
// (imaginary part).
struct MatrixFile {
  int dim = 0;
  std::vector<double> buf;
};

nlohmann::json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) die("cannot open file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    // e.what() carries the byte position of the failure.
    die(path + ": " + e.what());
  }
}

MatrixFile load_matrix(const std::string& path) {
  const nlohmann::json j = parse_json_file(path);
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
    die(path + ": expected an object with \"dim\" and \"entries\"");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<std::int64_t>() < 1 ||
      j["dim"].get<std::int64_t>() > 4096) {
    die(path + ": \"dim\" must be a positive integer");
  }
  const int d = j["dim"].get<int>();
  const auto& rows = j["entries"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != d) {
    die(path + ": \"entries\" must be an array of " + std::to_string(d) +
        " rows");
  }
  MatrixFile m;
  m.dim = d;
  m.buf.assign(static_cast<std::size_t>(2) * d * d, 0.0);
  for (int i = 0; i < d; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != d) {
      die(path + ": entries[" + std::to_string(i) + "] must be an array of " +
          std::to_string(d) + " [re, im] pairs");
    }
    for (int k = 0; k < d; ++k) {
      const auto& cell = row[k];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
          !cell[1].is_number()) {
        die(path + ": entries[" + std::to_string(i) + "][" +
            std::to_string(k) + "] must be a [re, im] pair");
      }
      const double re = cell[0].get<double>();
      const double im = cell[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) {
        die(path + ": entries[" + std::to_string(i) + "][" +
            std::to_string(k) + "] must be finite");
      }
      m.buf[2 * (i * d + k)] = re;
      m.buf[2 * (i * d + k) + 1] = im;
    }
  }
  return m;
}

ordered_json entries_json(int rows, int cols, const double* buf) {
  ordered_json entries = ordered_json::array();
  for (int i = 0; i < rows; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < cols; ++j) {
      row.push_back({buf[2 * (i * cols + j)], buf[2 * (i * cols + j) + 1]});
    }
    entries.push_back(std::move(row));
  }
  return entries;
}

ordered_json matrix_json(int dim, const double* buf) {
  ordered_json j;
  j["dim"] = dim;
  j["entries"] = entries_json(dim, dim, buf);
  return j;
}

ordered_json rect_json(int rows, int cols, const double* buf) {
  ordered_json j;
  j["rows"] = rows;
  j["cols"] = cols;
  j["entries"] = entries_json(rows, cols, buf);
  return j;
}

/* ---------------------------------------------------------------------- */
/* Handle wrappers                                                         */
/* ---------------------------------------------------------------------- */

struct Channel {
  decolab_channel* h = nullptr;
  ~Channel() { decolab_channel_destroy(h); }
};
struct Decomposition {
  decolab_decomposition* h = nullptr;
  ~Decomposition() { decolab_decomposition_destroy(h); }
};
struct SearchResult {
  decolab_search_result* h = nullptr;
  ~SearchResult() { decolab_search_result_destroy(h); }
};
struct Dilation {
  decolab_dilation* h = nullptr;
  ~Dilation() { decolab_dilation_destroy(h); }
};
struct Recovery {
  decolab_recovery* h = nullptr;
  ~Recovery() { decolab_recovery_destroy(h); }
};
struct SuiteResult {
  decolab_suite_result* h = nullptr;
  ~SuiteResult() { decolab_suite_result_destroy(h); }
};

void make_channel(const MatrixFile& xi, Channel& ch) {
  check(decolab_channel_create(xi.dim, xi.buf.data(), &ch.h));
}

// The C interface sizes every buffer from the channel handle, so a state file
// of the wrong dimension must be rejected here, before any library call reads
// past the end of a smaller buffer.
void require_dim(const MatrixFile& m, int dim, const std::string& path) {
  if (m.dim != dim) {
    die("dimension-mismatch: " + path + " is " + std::to_string(m.dim) + " x " +
        std::to_string(m.dim) + " but the channel dimension is " +
        std::to_string(dim));
  }
}

// Either the file at `path` or, when the path is empty, the maximally mixed
// state of the channel's dimension.
MatrixFile resolve_state(const std::string& path, int dim) {
  if (!path.empty()) {
    MatrixFile m = load_matrix(path);
    require_dim(m, dim, path);
    return m;
  }
  MatrixFile m;
  m.dim = dim;
  m.buf.assign(static_cast<std::size_t>(2) * dim * dim, 0.0);
  for (int i = 0; i < dim; ++i) m.buf[2 * (i * dim + i)] = 1.0 / dim;
  return m;
}

ordered_json report_head(const char* command) {
  ordered_json rep;
  rep["command"] = command;
  rep["version"] = decolab_version();
  return rep;
}

void emit(const ordered_json& rep) { std::cout << rep.dump(2) << "\n"; }

ordered_json certificate_json(const decolab_extremality_report& cert) {
  ordered_json j;
  j["kraus_rank"] = cert.kraus_rank;
  j["gram_rank"] = cert.gram_rank;
  j["extremal"] = cert.is_extremal != 0;
  j["not_random_unitary"] = cert.not_random_unitary != 0;
  j["tolerance"] = cert.tolerance;
  return j;
}

ordered_json decomposition_json(const decolab_decomposition* dec) {
  const int terms = decolab_decomposition_terms(dec);
  const int dim = decolab_decomposition_dim(dec);
  std::vector<double> w(terms);
  std::vector<double> ph(static_cast<std::size_t>(terms) * dim);
  check(decolab_decomposition_weights(dec, w.data()));
  check(decolab_decomposition_phases(dec, ph.data()));
  double bits = 0.0;
  check(decolab_decomposition_shannon_bits(dec, &bits));

  ordered_json j;
  j["terms"] = terms;
  j["dim"] = dim;
  j["weights"] = w;
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < terms; ++i) {
    rows.push_back(std::vector<double>(ph.begin() + i * dim,
                                       ph.begin() + (i + 1) * dim));
  }
  j["phases"] = std::move(rows);
  j["shannon_bits"] = bits;
  j["orthogonal"] = decolab_decomposition_orthogonal(dec, 0.0) != 0;
  return j;
}

// Shared search step for decompose/recover/iterate-recover/bounds.
void run_search(const Channel& ch, double tol, int starts, std::uint64_t seed,
                decolab_search_config& cfg, SearchResult& res) {
  decolab_search_config_default(&cfg);
  if (tol > 0.0) cfg.residual_tol = tol;
  if (starts > 0) cfg.starts = starts;
  cfg.seed = seed;
  check(decolab_decompose_search(ch.h, &cfg, &res.h));
}

ordered_json search_config_json(const decolab_search_config& cfg) {
  ordered_json j;
  j["residual_tol"] = cfg.residual_tol;
  j["min_weight"] = cfg.min_weight;
  j["starts"] = cfg.starts;
  j["max_terms"] = cfg.max_terms;
  return j;
}

const char* outcome_name(decolab_search_outcome outcome) {
  switch (outcome) {
    case DECOLAB_SEARCH_SUCCESS:
      return "success";
    case DECOLAB_SEARCH_NOT_RANDOM_UNITARY:
      return "not-random-unitary";
    default:
      return "inconclusive";
  }
}

/* ---------------------------------------------------------------------- */
/* Subcommands                                                             */
/* ---------------------------------------------------------------------- */

int cmd_validate(const std::string& xi_path) {
  const MatrixFile xi = load_matrix(xi_path);
  Channel ch;
  make_channel(xi, ch);

  const int d = decolab_channel_dim(ch.h);
  std::vector<double> snapped(static_cast<std::size_t>(2) * d * d);
  check(decolab_channel_matrix(ch.h, snapped.data()));

  ordered_json rep = report_head("validate");
  rep["inputs"] = {{"xi", xi_path}};
  rep["dim"] = d;
  rep["kraus_rank"] = decolab_channel_rank(ch.h);
  const bool strict = decolab_channel_is_strict(ch.h) != 0;
  rep["strict"] = strict;
  rep["verdict"] = strict ? "strict decoherence" : "non-strict decoherence";
  rep["correlation_matrix"] = matrix_json(d, snapped.data());
  emit(rep);
  return kExitOk;
}

int cmd_kraus(const std::string& xi_path) {
  const MatrixFile xi = load_matrix(xi_path);
  Channel ch;
  make_channel(xi, ch);

  const int d = decolab_channel_dim(ch.h);
  const int count = decolab_channel_kraus_count(ch.h);
  ordered_json ops = ordered_json::array();
  std::vector<double> buf(static_cast<std::size_t>(2) * d * d);
  for (int i = 0; i < count; ++i) {
    check(decolab_channel_kraus(ch.h, i, buf.data()));
    ops.push_back(matrix_json(d, buf.data()));
  }

  ordered_json rep = report_head("kraus");
  rep["inputs"] = {{"xi", xi_path}};
  rep["dim"] = d;
  rep["count"] = count;
  rep["operators"] = std::move(ops);
  emit(rep);
  return kExitOk;
}

int cmd_extremal(const std::string& xi_path, double tol) {
  const MatrixFile xi = load_matrix(xi_path);
  Channel ch;
  make_channel(xi, ch);

  decolab_extremality_report report;
  check(decolab_channel_extremality(ch.h, tol, &report));
  std::vector<double> sv(static_cast<std::size_t>(report.singular_count));
  check(decolab_channel_extremality_singular_values(ch.h, tol, sv.data()));

  ordered_json rep = report_head("extremal");
  rep["inputs"] = {{"xi", xi_path}};
  rep["dim"] = decolab_channel_dim(ch.h);
  rep["kraus_rank"] = report.kraus_rank;
  rep["gram_rank"] = report.gram_rank;
  rep["extremal"] = report.is_extremal != 0;
  rep["not_random_unitary"] = report.not_random_unitary != 0;
  rep["tolerance"] = report.tolerance;
  rep["singular_values"] = sv;
  emit(rep);
  return kExitOk;
}

int cmd_decompose(const std::string& xi_path, double tol, int starts,
                  std::uint64_t seed) {
  const MatrixFile xi = load_matrix(xi_path);
  Channel ch;
  make_channel(xi, ch);

  decolab_search_config cfg;
  SearchResult res;
  run_search(ch, tol, starts, seed, cfg, res);
  const decolab_search_outcome outcome = decolab_search_result_outcome(res.h);

  ordered_json rep = report_head("decompose");
  rep["inputs"] = {{"xi", xi_path}};
  rep["seed"] = seed;
  rep["config"] = search_config_json(cfg);
  rep["outcome"] = outcome_name(outcome);
  rep["detail"] = decolab_search_result_detail(res.h);
  rep["residual"] = decolab_search_result_residual(res.h);

  if (outcome == DECOLAB_SEARCH_SUCCESS) {
    Decomposition dec;
    check(decolab_search_result_decomposition(res.h, &dec.h));
    rep["decomposition"] = decomposition_json(dec.h);
    emit(rep);
    return kExitOk;
  }
  if (outcome == DECOLAB_SEARCH_NOT_RANDOM_UNITARY) {
    decolab_extremality_report cert;
    check(decolab_search_result_certificate(res.h, &cert));
    rep["certificate"] = certificate_json(cert);
    emit(rep);
    return kExitImpossible;
  }
  rep["note"] =
      "no decomposition found within the search budget; "
      "existence is undecided";
  emit(rep);
  return kExitOk;
}

int cmd_dilate(const std::string& xi_path, const std::string& state_path) {
  const MatrixFile xi = load_matrix(xi_path);
  Channel ch;
  make_channel(xi, ch);

  Dilation model;
  check(decolab_dilation_create(ch.h, &model.h));
  const int d = decolab_dilation_sys_dim(model.h);
  const int r = decolab_dilation_env_dim(model.h);

  std::vector<double> gram(static_cast<std::size_t>(2) * r * r);
  check(decolab_dilation_gram(model.h, gram.data()));
  std::vector<double> isometry(static_cast<std::size_t>(2) * d * r * d);
  check(decolab_dilation_isometry(model.h, isometry.data()));

  ordered_json rep = report_head("dilate");
  rep["inputs"] = {{"xi", xi_path},
                   {"state", state_path.empty() ? "maximally-mixed"
                                                : state_path}};
  rep["sys_dim"] = d;
  rep["env_dim"] = r;
  rep["environment_gram"] = matrix_json(r, gram.data());
  rep["isometry"] = rect_json(d * r, d, isometry.data());

  const MatrixFile rho = resolve_state(state_path, d);
  std::vector<double> env(static_cast<std::size_t>(2) * r * r);
  check(decolab_dilation_env_state(model.h, rho.buf.data(), env.data()));
  double bits = 0.0;
  check(decolab_von_neumann_entropy(r, env.data(), &bits));
  rep["environment_state"] = matrix_json(r, env.data());
  rep["environment_entropy_bits"] = bits;
  emit(rep);
  return kExitOk;
}

void put_recovery_samples(ordered_json& rep, const Recovery& rec,
                          std::int64_t shots) {
  const int outcomes = decolab_recovery_outcomes(rec.h);
  std::vector<double> p(static_cast<std::size_t>(outcomes));
  check(decolab_recovery_probabilities(rec.h, p.data()));
  rep["probabilities"] = p;
  if (shots > 0) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(outcomes));
    std::vector<double> freq(static_cast<std::size_t>(outcomes));
    check(decolab_recovery_counts(rec.h, counts.data()));
    check(decolab_recovery_frequencies(rec.h, freq.data()));
    rep["counts"] = counts;
    rep["frequencies"] = freq;
  }
}

int cmd_recover(const std::string& xi_path, const std::string& state_path,
                std::int64_t shots, int restarts, double tol,
                std::uint64_t seed) {
  const MatrixFile xi = load_matrix(xi_path);
  Channel ch;
  make_channel(xi, ch);
  const MatrixFile rho = resolve_state(state_path, decolab_channel_dim(ch.h));

  decolab_search_config cfg;
  SearchResult res;
  run_search(ch, tol, 0, seed, cfg, res);
  const decolab_search_outcome outcome = decolab_search_result_outcome(res.h);

  ordered_json rep = report_head("recover");
  rep["inputs"] = {{"xi", xi_path},
                   {"state", state_path.empty() ? "maximally-mixed"
                                                : state_path}};
  rep["seed"] = seed;
  rep["config"] = search_config_json(cfg);
  rep["search_outcome"] = outcome_name(outcome);
  rep["search_detail"] = decolab_search_result_detail(res.h);
  rep["search_residual"] = decolab_search_result_residual(res.h);

  if (outcome == DECOLAB_SEARCH_SUCCESS) {
    Decomposition dec;
    check(decolab_search_result_decomposition(res.h, &dec.h));
    Recovery rec;
    check(decolab_recover_feedback(ch.h, dec.h, rho.buf.data(), shots, seed,
                                   &rec.h));
    rep["outcome"] = "recovered";
    rep["worst_fidelity"] = decolab_recovery_worst_fidelity(rec.h);
    rep["average_fidelity"] = decolab_recovery_average_fidelity(rec.h);
    rep["info_bits"] = decolab_recovery_info_bits(rec.h);
    rep["resolution_defect"] = decolab_recovery_resolution_defect(rec.h);
    rep["shots"] = shots;
    put_recovery_samples(rep, rec, shots);
    emit(rep);
    return kExitOk;
  }

  if (outcome == DECOLAB_SEARCH_NOT_RANDOM_UNITARY) {
    decolab_extremality_report cert;
    check(decolab_search_result_certificate(res.h, &cert));
    rep["outcome"] = "impossible";
    rep["certificate"] = certificate_json(cert);

    // Best measure-and-correct protocol anyway, to quantify the shortfall.
    Recovery rec;
    check(decolab_recover_optimize(ch.h, 0, restarts, seed, &rec.h));
    ordered_json best;
    best["restarts"] = restarts;
    best["outcomes"] = decolab_recovery_outcomes(rec.h);
    best["average_fidelity"] = decolab_recovery_average_fidelity(rec.h);
    best["worst_fidelity"] = decolab_recovery_worst_fidelity(rec.h);
    best["resolution_defect"] = decolab_recovery_resolution_defect(rec.h);
    rep["best_measured_recovery"] = std::move(best);
    emit(rep);
    return kExitImpossible;
  }

  rep["outcome"] = "inconclusive";
  rep["note"] =
      "no decomposition found within the search budget; "
      "recovery is undecided";
  emit(rep);
  return kExitOk;
}

int cmd_iterate_recover(const std::string& xi_path,
                        const std::string& state_path, std::int64_t steps,
                        double tol, std::uint64_t seed) {
  const MatrixFile xi = load_matrix(xi_path);
  Channel ch;
  make_channel(xi, ch);
  const MatrixFile rho = resolve_state(state_path, decolab_channel_dim(ch.h));

  decolab_search_config cfg;
  SearchResult res;
  run_search(ch, tol, 0, seed, cfg, res);
  const decolab_search_outcome outcome = decolab_search_result_outcome(res.h);

  ordered_json rep = report_head("iterate-recover");
  rep["inputs"] = {{"xi", xi_path},
                   {"state", state_path.empty() ? "maximally-mixed"
                                                : state_path}};
  rep["seed"] = seed;
  rep["steps"] = steps;
  rep["search_outcome"] = outcome_name(outcome);
  rep["search_detail"] = decolab_search_result_detail(res.h);

  if (outcome == DECOLAB_SEARCH_SUCCESS) {
    Decomposition dec;
    check(decolab_search_result_decomposition(res.h, &dec.h));
    Recovery rec;
    check(decolab_recover_iterated(ch.h, dec.h, steps, rho.buf.data(), seed,
                                   &rec.h));
    rep["outcome"] = "recovered";
    rep["worst_fidelity"] = decolab_recovery_worst_fidelity(rec.h);
    rep["average_fidelity"] = decolab_recovery_average_fidelity(rec.h);
    put_recovery_samples(rep, rec, steps);
    emit(rep);
    return kExitOk;
  }

  if (outcome == DECOLAB_SEARCH_NOT_RANDOM_UNITARY) {
    decolab_extremality_report cert;
    check(decolab_search_result_certificate(res.h, &cert));
    rep["outcome"] = "impossible";
    rep["certificate"] = certificate_json(cert);
    emit(rep);
    return kExitImpossible;
  }

  rep["outcome"] = "inconclusive";
  rep["note"] =
      "no decomposition found within the search budget; "
      "recovery is undecided";
  emit(rep);
  return kExitOk;
}

int cmd_entropy(const std::string& xi_path, const std::string& state_path) {
  const MatrixFile xi = load_matrix(xi_path);
  Channel ch;
  make_channel(xi, ch);
  const int d = decolab_channel_dim(ch.h);
  const MatrixFile rho = resolve_state(state_path, d);

  double s_ex = 0.0;
  check(decolab_entropy_exchange(ch.h, rho.buf.data(), &s_ex));
  double s_in = 0.0;
  check(decolab_von_neumann_entropy(d, rho.buf.data(), &s_in));
  std::vector<double> out(static_cast<std::size_t>(2) * d * d);
  check(decolab_channel_apply_schrodinger(ch.h, rho.buf.data(), out.data()));
  double s_out = 0.0;
  check(decolab_von_neumann_entropy(d, out.data(), &s_out));

  ordered_json rep = report_head("entropy");
  rep["inputs"] = {{"xi", xi_path},
                   {"state", state_path.empty() ? "maximally-mixed"
                                                : state_path}};
  rep["dim"] = d;
  rep["entropy_exchange_bits"] = s_ex;
  rep["state_entropy_bits"] = s_in;
  rep["output_entropy_bits"] = s_out;
  emit(rep);
  return kExitOk;
}

int cmd_bounds(const std::string& xi_path, const std::string& state_path,
               double tol, std::uint64_t seed) {
  const MatrixFile xi = load_matrix(xi_path);
  Channel ch;
  make_channel(xi, ch);
  const MatrixFile rho = resolve_state(state_path, decolab_channel_dim(ch.h));

  decolab_search_config cfg;
  SearchResult res;
  run_search(ch, tol, 0, seed, cfg, res);
  const bool found =
      decolab_search_result_outcome(res.h) == DECOLAB_SEARCH_SUCCESS;
  Decomposition dec;
  if (found) check(decolab_search_result_decomposition(res.h, &dec.h));

  decolab_info_report info;
  check(decolab_check_bounds(ch.h, rho.buf.data(), found ? dec.h : nullptr,
                             &info));

  ordered_json rep = report_head("bounds");
  rep["inputs"] = {{"xi", xi_path},
                   {"state", state_path.empty() ? "maximally-mixed"
                                                : state_path}};
  rep["seed"] = seed;
  rep["search_outcome"] =
      outcome_name(decolab_search_result_outcome(res.h));
  rep["entropy_exchange_bits"] = info.s_ex;
  rep["entropy_production_bits"] = info.entropy_production;
  rep["production_within_exchange"] =
      info.entropy_production <= info.s_ex + 1e-9;
  rep["has_record"] = info.has_record != 0;
  if (info.has_record != 0) {
    rep["record_bits"] = info.h_p;
    rep["bound_gap_bits"] = info.bound_gap;
    rep["record_orthogonal"] = decolab_decomposition_orthogonal(dec.h, 0.0) != 0;
  }
  emit(rep);
  return kExitOk;
}

int cmd_decay(const std::string& xi_path, const std::string& state_path,
              std::int64_t steps, bool as_json) {
  const MatrixFile xi = load_matrix(xi_path);
  Channel ch;
  make_channel(xi, ch);
  const int d = decolab_channel_dim(ch.h);
  const MatrixFile rho0 = load_matrix(state_path);
  require_dim(rho0, d, state_path);

  std::vector<double> snapped(static_cast<std::size_t>(2) * d * d);
  check(decolab_channel_matrix(ch.h, snapped.data()));

  const auto abs_at = [d](const std::vector<double>& buf, int i, int j) {
    return std::hypot(buf[2 * (i * d + j)], buf[2 * (i * d + j) + 1]);
  };

  std::vector<double> rho = rho0.buf;
  ordered_json rows = ordered_json::array();
  double max_deviation = 0.0;
  std::string csv = "n,k,l,coherence,envelope\n";
  for (std::int64_t n = 1; n <= steps; ++n) {
    check(decolab_channel_apply_schrodinger(ch.h, rho.data(), rho.data()));
    for (int k = 0; k < d; ++k) {
      for (int l = 0; l < d; ++l) {
        if (k == l) continue;
        const double observed = abs_at(rho, k, l);
        const double envelope =
            std::pow(abs_at(snapped, l, k), static_cast<double>(n)) *
            abs_at(rho0.buf, k, l);
        max_deviation = std::max(max_deviation, std::abs(observed - envelope));
        if (as_json) {
          rows.push_back({{"n", n},
                          {"k", k},
                          {"l", l},
                          {"coherence", observed},
                          {"envelope", envelope}});
        } else {
          csv += std::to_string(n) + "," + std::to_string(k) + "," +
                 std::to_string(l) + "," + format_double(observed) + "," +
                 format_double(envelope) + "\n";
        }
      }
    }
  }

  if (as_json) {
    ordered_json rep = report_head("decay");
    rep["inputs"] = {{"xi", xi_path}, {"state", state_path}};
    rep["steps"] = steps;
    rep["rows"] = std::move(rows);
    rep["max_deviation"] = max_deviation;
    emit(rep);
  } else {
    std::cout << csv;
  }
  return kExitOk;
}

// The embedded reference criteria, in suite order, for reporting rows as
// skipped without running them.
constexpr std::array<std::pair<const char*, const char*>, 8> kCriteria = {{
    {"schur-kraus", "Kraus and entrywise actions agree in both pictures"},
    {"qubit-recovery", "Qubit feedback recovery is perfect, H(p) matches S_ex"},
    {"qutrit-gap-recovery",
     "Lopsided qutrit: decomposition, perfect recovery, strict gap"},
    {"extremal-impossibility",
     "Extreme rank-2 channel at d=4 defeats measured recovery"},
    {"entropy-routes", "Three entropy-exchange routes agree"},
    {"entropy-bounds", "Entropy bounds hold; equality exactly at orthogonality"},
    {"decay-commutation",
     "Decay law, commuting composition, tally-only correction"},
    {"rank-bound", "No extremality certificate violates the rank bound"},
}};

int cmd_suite(const std::string& xi_path, std::uint64_t seed) {
  ordered_json rep = report_head("suite");
  rep["inputs"] = {{"xi", xi_path.empty() ? ordered_json(nullptr)
                                          : ordered_json(xi_path)}};
  rep["seed"] = seed;
  ordered_json criteria = ordered_json::array();
  bool all_passed = true;

  if (!xi_path.empty()) {
    // Stage 0: the supplied matrix must itself be a valid channel.  On
    // failure the embedded criteria are reported as skipped, not run.
    const MatrixFile xi = load_matrix(xi_path);
    decolab_channel* probe = nullptr;
    const decolab_status st =
        decolab_channel_create(xi.dim, xi.buf.data(), &probe);
    ordered_json stage;
    stage["id"] = "validation";
    stage["name"] = "Supplied correlation matrix is a valid channel";
    if (st == DECOLAB_OK) {
      stage["status"] = "passed";
      stage["details"] = "dim " + std::to_string(decolab_channel_dim(probe)) +
                         ", rank " +
                         std::to_string(decolab_channel_rank(probe)) +
                         (decolab_channel_is_strict(probe) ? ", strict"
                                                           : ", non-strict");
      decolab_channel_destroy(probe);
      criteria.push_back(std::move(stage));
    } else {
      stage["status"] = "failed";
      stage["details"] = std::string(decolab_status_name(st)) + ": " +
                         decolab_last_error();
      criteria.push_back(std::move(stage));
      for (const auto& [id, name] : kCriteria) {
        criteria.push_back(
            {{"id", id}, {"name", name}, {"status", "skipped"}});
      }
      rep["criteria"] = std::move(criteria);
      rep["passed"] = false;
      emit(rep);
      return kExitError;
    }
  }

  SuiteResult res;
  check(decolab_suite_run(seed, &res.h));
  for (int i = 0; i < decolab_suite_count(res.h); ++i) {
    const bool passed = decolab_suite_passed(res.h, i) != 0;
    all_passed = all_passed && passed;
    criteria.push_back({{"id", decolab_suite_id(res.h, i)},
                        {"name", decolab_suite_name(res.h, i)},
                        {"status", passed ? "passed" : "failed"},
                        {"details", decolab_suite_details(res.h, i)}});
  }
  rep["criteria"] = std::move(criteria);
  rep["passed"] = all_passed;
  emit(rep);
  return all_passed ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "decolab: decoherence channels as entrywise (Schur) maps.\n"
      "Validates correlation matrices, searches random-unitary\n"
      "decompositions, builds environment models, simulates recovery\n"
      "protocols, and accounts the classical information cost."};
  app.require_subcommand(1);
  app.set_version_flag("--version", decolab_version());

  // Shared option storage; each subcommand registers only the flags it uses.
  std::string xi_path;
  std::string state_path;
  double tol = 0.0;
  std::uint64_t seed = kDefaultSeed;
  std::int64_t shots = 0;
  std::int64_t steps = 0;
  int restarts = 0;
  bool flag_json = false;
  bool flag_csv = false;

  const auto add_xi = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--xi", xi_path,
                                "Correlation matrix file "
                                "({\"dim\": d, \"entries\": [[[re, im], ...]]})");
    if (required) opt->required();
  };
  const auto add_state = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option(
        "--state", state_path,
        "Density matrix file (defaults to the maximally mixed state)");
    if (required) opt->required();
  };
  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed,
                    "Random seed (falls back to DECOLAB_SEED, then to " +
                        std::to_string(kDefaultSeed) + ")")
        ->envname("DECOLAB_SEED");
  };
  const auto add_tol = [&](CLI::App* sub, const char* what) {
    sub->add_option("--tol", tol, what)->check(CLI::NonNegativeNumber);
  };
  const auto add_json = [&](CLI::App* sub) {
    sub->add_flag("--json", flag_json, "Emit the report as JSON (default)");
  };

  auto* validate = app.add_subcommand(
      "validate", "Check a correlation matrix and classify the channel");
  add_xi(validate, true);
  add_json(validate);

  auto* kraus = app.add_subcommand(
      "kraus", "Canonical diagonal Kraus operators of the channel");
  add_xi(kraus, true);
  add_json(kraus);

  auto* extremal = app.add_subcommand(
      "extremal", "Extremality test on the canonical Kraus family");
  add_xi(extremal, true);
  add_tol(extremal, "Rank tolerance (0 selects the library default)");
  add_json(extremal);

  auto* decompose = app.add_subcommand(
      "decompose", "Search a random-unitary decomposition of the channel");
  add_xi(decompose, true);
  add_tol(decompose, "Search residual tolerance (0 selects the default)");
  decompose->add_option("--restarts", restarts,
                        "Multi-start budget for the search (0 = default)")
      ->check(CLI::NonNegativeNumber);
  add_seed(decompose);
  add_json(decompose);

  auto* dilate = app.add_subcommand(
      "dilate", "Single-environment dilation of the channel");
  add_xi(dilate, true);
  add_state(dilate, false);
  add_json(dilate);

  auto* recover = app.add_subcommand(
      "recover",
      "Decide recoverability; simulate heralded feedback or certify "
      "impossibility (exit 2)");
  add_xi(recover, true);
  add_state(recover, false);
  recover->add_option("--shots", shots, "Sampled measurement shots")
      ->check(CLI::NonNegativeNumber);
  recover
      ->add_option("--restarts", restarts,
                   "Optimizer restarts for the best measured recovery on "
                   "the impossible branch")
      ->check(CLI::NonNegativeNumber);
  add_tol(recover, "Search residual tolerance (0 selects the default)");
  add_seed(recover);
  add_json(recover);

  auto* iterate = app.add_subcommand(
      "iterate-recover",
      "Repeated decoherence rounds with one tally-only correction");
  add_xi(iterate, true);
  add_state(iterate, false);
  iterate->add_option("--steps", steps, "Decoherence rounds (default 5)")
      ->check(CLI::NonNegativeNumber);
  add_tol(iterate, "Search residual tolerance (0 selects the default)");
  add_seed(iterate);
  add_json(iterate);

  auto* entropy = app.add_subcommand(
      "entropy", "Entropy exchange of the channel on a state");
  add_xi(entropy, true);
  add_state(entropy, false);
  add_json(entropy);

  auto* bounds = app.add_subcommand(
      "bounds", "Entropy production and classical-record bounds");
  add_xi(bounds, true);
  add_state(bounds, false);
  add_tol(bounds, "Search residual tolerance (0 selects the default)");
  add_seed(bounds);
  add_json(bounds);

  auto* decay = app.add_subcommand(
      "decay", "Per-coherence decay table under repeated application");
  add_xi(decay, true);
  add_state(decay, true);
  decay->add_option("--steps", steps, "Number of applications (default 10)")
      ->check(CLI::PositiveNumber);
  auto* decay_json =
      decay->add_flag("--json", flag_json, "Emit rows as a JSON report");
  auto* decay_csv =
      decay->add_flag("--csv", flag_csv, "Emit CSV rows (default)");
  decay_json->excludes(decay_csv);
  decay_csv->excludes(decay_json);

  auto* suite = app.add_subcommand(
      "suite",
      "Run the embedded reference criteria; optional --xi is validated "
      "first and failures skip the rest");
  add_xi(suite, false);
  add_seed(suite);
  add_json(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  if (*validate) return cmd_validate(xi_path);
  if (*kraus) return cmd_kraus(xi_path);
  if (*extremal) return cmd_extremal(xi_path, tol);
  if (*decompose) return cmd_decompose(xi_path, tol, restarts, seed);
  if (*dilate) return cmd_dilate(xi_path, state_path);
  if (*recover) {
    return cmd_recover(xi_path, state_path, shots,
                       restarts > 0 ? restarts : 8, tol, seed);
  }
  if (*iterate) {
    return cmd_iterate_recover(xi_path, state_path,
                               iterate->count("--steps") ? steps : 5, tol,
                               seed);
  }
  if (*entropy) return cmd_entropy(xi_path, state_path);
  if (*bounds) return cmd_bounds(xi_path, state_path, tol, seed);
  if (*decay) {
    return cmd_decay(xi_path, state_path, decay->count("--steps") ? steps : 10,
                     flag_json);
  }
  if (*suite) return cmd_suite(xi_path, seed);
  return kExitError;  // unreachable: a subcommand is required
}
