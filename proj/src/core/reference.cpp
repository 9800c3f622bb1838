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

#include "core/reference.hpp"

#include <cmath>
#include <numbers>

namespace decolab {

namespace {

Matrix gram_of(const std::vector<Vector>& vectors) {
  const int d = static_cast<int>(vectors.size());
  Matrix g(d, d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      g(k, l) = vectors[k].dot(vectors[l]);
    }
  }
  return g;
}

}  // namespace

Matrix qubit_correlation(Complex c) {
  Matrix xi(2, 2);
  xi << Complex(1.0, 0.0), c, std::conj(c), Complex(1.0, 0.0);
  return xi;
}

Matrix extremal_rank2_d4() {
  const double s = 1.0 / std::numbers::sqrt2;
  std::vector<Vector> env(4, Vector(2));
  env[0] << Complex(1.0, 0.0), Complex(0.0, 0.0);
  env[1] << Complex(0.0, 0.0), Complex(1.0, 0.0);
  env[2] << Complex(s, 0.0), Complex(s, 0.0);
  env[3] << Complex(s, 0.0), Complex(0.0, s);
  return gram_of(env);
}

Matrix strict_gap_qutrit() {
  const double s = 1.0 / std::numbers::sqrt2;
  Matrix xi(3, 3);
  xi << Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(s, 0.0),
      Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(s, 0.0),
      Complex(s, 0.0), Complex(s, 0.0), Complex(1.0, 0.0);
  return xi;
}

Matrix random_correlation(int dim, int rank, Rng& rng) {
  if (dim < 2 || rank < 1 || rank > dim) {
    fail(ErrorCode::InvalidArgument,
         "random correlation matrix needs dim >= 2 and 1 <= rank <= dim");
  }
  std::vector<Vector> vectors;
  vectors.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    Vector v(rank);
    for (int j = 0; j < rank; ++j) {
      v(j) = Complex(rng.gaussian(), rng.gaussian());
    }
    vectors.push_back(v / v.norm());
  }
  Matrix g = gram_of(vectors);
  g.diagonal().setConstant(Complex(1.0, 0.0));
  return g;
}

Matrix random_density(int dim, Rng& rng) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return detail::hermitian_part(rho);
}

Matrix random_pure_density(int dim, Rng& rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    v(i) = Complex(rng.gaussian(), rng.gaussian());
  }
  v /= v.norm();
  return v * v.adjoint();
}

RandomUnitaryDecomposition random_planted_decomposition(int dim, int terms,
                                                        Rng& rng) {
  if (dim < 2 || terms < 1) {
    fail(ErrorCode::InvalidArgument,
         "planted decomposition needs dim >= 2 and terms >= 1");
  }
  RealVector w(terms);
  for (int i = 0; i < terms; ++i) w(i) = 0.15 + rng.uniform();

  std::vector<PhaseVector> pvs;
  pvs.reserve(terms);
  for (int i = 0; i < terms; ++i) {
    PhaseVector pv;
    pv.phases = RealVector::Zero(dim);
    for (int k = 1; k < dim; ++k) {
      pv.phases(k) = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    pvs.push_back(std::move(pv));
  }
  return make_decomposition(w, pvs);
}

}  // namespace decolab
