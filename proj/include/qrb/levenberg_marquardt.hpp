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

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <string>

namespace qrb {

/// Fills the residual vector r (already weighted) and its Jacobian J at p.
using ResidualFunction = std::function<void(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& J)>;

struct LmOptions {
  int max_iterations = 1000;
  double step_tolerance = 1e-15;   ///< relative
  double chi2_tolerance = 1e-16;   ///< relative decrease
  double gradient_tolerance = 1e-300;
};

struct LmResult {
  Eigen::VectorXd params;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd jacobian;
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Levenberg-Marquardt with Marquardt (diagonal) scaling and the Nielsen
/// damping update.
LmResult levenberg_marquardt(const ResidualFunction& fn, Eigen::VectorXd start, std::size_t n_residuals,
                             const LmOptions& options = {});

/// (J^T J)^-1 via a rank-revealing decomposition; rank-deficient directions
/// get infinite variance.
Eigen::MatrixXd normal_covariance(const Eigen::MatrixXd& jacobian);

}  // namespace qrb
