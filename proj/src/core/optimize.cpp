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

#include "core/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace decolab {

SimplexResult minimize_simplex(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const SimplexOptions& options) {
  const int n = static_cast<int>(start.size());
  if (n == 0) return {start, objective(start), 0};

  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  std::vector<Eigen::VectorXd> points(n + 1, start);
  std::vector<double> values(n + 1);
  for (int i = 0; i < n; ++i) points[i + 1](i) += options.initial_step;
  for (int i = 0; i <= n; ++i) values[i] = objective(points[i]);

  std::vector<int> order(n + 1);
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
    const int best = order[0];
    const int worst = order[n];
    const int second_worst = order[n - 1];

    double spread = 0.0;
    for (int i = 1; i <= n; ++i) {
      spread = std::max(
          spread, (points[order[i]] - points[best]).cwiseAbs().maxCoeff());
    }
    if (spread <= options.x_tol &&
        std::abs(values[worst] - values[best]) <= options.f_tol) {
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += points[i];
    }
    centroid /= n;

    const Eigen::VectorXd reflected =
        centroid + kReflect * (centroid - points[worst]);
    const double f_reflected = objective(reflected);

    if (f_reflected < values[best]) {
      const Eigen::VectorXd expanded =
          centroid + kExpand * (reflected - centroid);
      const double f_expanded = objective(expanded);
      if (f_expanded < f_reflected) {
        points[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        points[worst] = reflected;
        values[worst] = f_reflected;
      }
    } else if (f_reflected < values[second_worst]) {
      points[worst] = reflected;
      values[worst] = f_reflected;
    } else {
      const bool outside = f_reflected < values[worst];
      const Eigen::VectorXd contracted =
          outside
              ? Eigen::VectorXd(centroid + kContract * (reflected - centroid))
              : Eigen::VectorXd(centroid -
                                kContract * (centroid - points[worst]));
      const double f_contracted = objective(contracted);
      if (f_contracted < std::min(f_reflected, values[worst])) {
        points[worst] = contracted;
        values[worst] = f_contracted;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          points[i] = points[best] + kShrink * (points[i] - points[best]);
          values[i] = objective(points[i]);
        }
      }
    }
  }

  const int best = static_cast<int>(
      std::min_element(values.begin(), values.end()) - values.begin());
  return {points[best], values[best], iter};
}

Eigen::VectorXd nnls_gram(const Eigen::MatrixXd& h, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(b.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  std::vector<bool> active(n, true);  // active = pinned at zero

  // Lawson-Hanson: grow the passive set along the most positive gradient of
  // the dual, solving the unconstrained subproblem on the passive set and
  // backtracking when a coordinate would cross zero.
  const int max_outer = 3 * n + 10;
  for (int outer = 0; outer < max_outer; ++outer) {
    const Eigen::VectorXd gradient = b - h * w;
    int candidate = -1;
    double best_grad = 1e-12;
    for (int i = 0; i < n; ++i) {
      if (active[i] && gradient(i) > best_grad) {
        best_grad = gradient(i);
        candidate = i;
      }
    }
    if (candidate < 0) break;
    active[candidate] = false;

    for (int inner = 0; inner < max_outer; ++inner) {
      std::vector<int> passive;
      for (int i = 0; i < n; ++i) {
        if (!active[i]) passive.push_back(i);
      }
      if (passive.empty()) break;

      const int p = static_cast<int>(passive.size());
      Eigen::MatrixXd hp(p, p);
      Eigen::VectorXd bp(p);
      for (int i = 0; i < p; ++i) {
        bp(i) = b(passive[i]);
        for (int j = 0; j < p; ++j) hp(i, j) = h(passive[i], passive[j]);
      }
      // Tiny ridge keeps degenerate Gram blocks solvable.
      hp.diagonal().array() += 1e-13 * (1.0 + hp.diagonal().maxCoeff());
      const Eigen::VectorXd solution = hp.ldlt().solve(bp);

      if (solution.minCoeff() > 0.0) {
        w.setZero();
        for (int i = 0; i < p; ++i) w(passive[i]) = solution(i);
        break;
      }

      // Step from w toward the subproblem solution until the first
      // coordinate hits zero; pin it and re-solve.
      double alpha = 1.0;
      for (int i = 0; i < p; ++i) {
        if (solution(i) <= 0.0) {
          const double current = w(passive[i]);
          if (current - solution(i) > 1e-300) {
            alpha = std::min(alpha, current / (current - solution(i)));
          } else {
            alpha = 0.0;
          }
        }
      }
      for (int i = 0; i < p; ++i) {
        const int idx = passive[i];
        w(idx) += alpha * (solution(i) - w(idx));
        if (w(idx) <= 1e-14) {
          w(idx) = 0.0;
          active[idx] = true;
        }
      }
    }
  }
  return w;
}

}  // namespace decolab
