// Copyright 2026 The qrb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrb/levenberg_marquardt.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrb {

LmResult levenberg_marquardt(const ResidualFunction& fn, Eigen::VectorXd start, std::size_t n_residuals,
                             const LmOptions& options) {
  const auto n = start.size();
  LmResult res;
  res.params = std::move(start);
  res.residuals.resize(static_cast<Eigen::Index>(n_residuals));
  res.jacobian.resize(static_cast<Eigen::Index>(n_residuals), n);
  fn(res.params, res.residuals, res.jacobian);
  res.chi2 = res.residuals.squaredNorm();
  if (!std::isfinite(res.chi2)) {
    res.message = "non-finite residuals at start";
    return res;
  }

  double lambda = 1e-3;
  double nu = 2.0;
  Eigen::VectorXd trial_r(res.residuals.size());
  Eigen::MatrixXd trial_j(res.jacobian.rows(), res.jacobian.cols());

  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    if (res.chi2 == 0.0) {
      res.converged = true;
      res.message = "exact fit";
      return res;
    }
    const Eigen::MatrixXd a = res.jacobian.transpose() * res.jacobian;
    const Eigen::VectorXd g = res.jacobian.transpose() * res.residuals;
    if (g.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
      res.converged = true;
      res.message = "gradient below tolerance";
      return res;
    }
    Eigen::VectorXd scale = a.diagonal();
    const double floor = std::max(scale.maxCoeff() * 1e-14, std::numeric_limits<double>::min());
    scale = scale.cwiseMax(floor);

    const Eigen::MatrixXd damped = a + lambda * Eigen::MatrixXd(scale.asDiagonal());
    const Eigen::VectorXd h = damped.ldlt().solve(-g);
    if (!h.allFinite()) {
      lambda *= nu;
      nu *= 2.0;
      continue;
    }
    if (h.norm() <= options.step_tolerance * (res.params.norm() + options.step_tolerance)) {
      res.converged = true;
      res.message = "step below tolerance";
      return res;
    }
    const Eigen::VectorXd trial = res.params + h;
    fn(trial, trial_r, trial_j);
    const double trial_chi2 = trial_r.squaredNorm();
    const double predicted = h.dot(lambda * scale.cwiseProduct(h) - g);
    const double actual = res.chi2 - trial_chi2;
    const double rho = predicted > 0.0 ? actual / predicted : -1.0;
    if (std::isfinite(trial_chi2) && actual > 0.0) {
      res.params = trial;
      res.residuals.swap(trial_r);
      res.jacobian.swap(trial_j);
      const double previous = res.chi2;
      res.chi2 = trial_chi2;
      const double t = 2.0 * std::clamp(rho, 0.0, 1.0) - 1.0;
      lambda *= std::max(1.0 / 3.0, 1.0 - t * t * t);
      nu = 2.0;
      if (actual <= options.chi2_tolerance * previous) {
        res.converged = true;
        res.message = "chi2 change below tolerance";
        return res;
      }
    } else {
      lambda *= nu;
      nu *= 2.0;
      if (!std::isfinite(lambda) || lambda > 1e300) {
        // No downhill step exists at any damping: a local minimum to
        // machine precision.
        res.converged = true;
        res.message = "no further decrease possible";
        return res;
      }
    }
  }
  res.message = "iteration limit reached";
  return res;
}

Eigen::MatrixXd normal_covariance(const Eigen::MatrixXd& jacobian) {
  const auto n = jacobian.cols();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? s(0) * 1e-13 * static_cast<double>(std::max<Eigen::Index>(jacobian.rows(), n)) : 0.0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const Eigen::VectorXd v = svd.matrixV().col(i);
    if (s(i) > cutoff) {
      cov += v * v.transpose() / (s(i) * s(i));
    } else {
      for (Eigen::Index k = 0; k < n; ++k) {
        if (std::abs(v(k)) > 1e-12) cov(k, k) = std::numeric_limits<double>::infinity();
      }
    }
  }
  return cov;
}

}  // namespace qrb
