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

#pragma once

#include <Eigen/Dense>
#include <functional>

namespace decolab {

struct SimplexOptions {
  int max_iterations = 400;
  double x_tol = 1e-10;
  double f_tol = 1e-12;
  double initial_step = 0.5;
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

/** Derivative-free Nelder-Mead minimization.  Fully deterministic for a
    given objective and start point. */
SimplexResult minimize_simplex(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const SimplexOptions& options = {});

/**
 * Nonnegative least squares in normal-equation form: minimize
 * w† H w - 2 b† w over w >= 0, for symmetric PSD H (Lawson-Hanson active
 * set).  Small dense problems only.
 */
Eigen::VectorXd nnls_gram(const Eigen::MatrixXd& h, const Eigen::VectorXd& b);

}  // namespace decolab
