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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrb {

/// One point of an averaged RB curve.
struct DecayPoint {
  double length = 0.0;
  double fidelity = 0.0;
  double std_error = 0.0;
};

/// Average fidelity after `length` randomized gates:
///   F = 1/2 + 1/2 (1 - d_if) (1 - d)^length
double rb_model(double length, double d_if, double d);

/// Average error per randomized gate, d / 2. Throws outside [0, 1].
double error_per_gate(double d);

struct DecayFit {
  double d_if = 0.0;
  double d = 0.0;
  double e_g = 0.0;
  double d_if_error = 0.0;
  double d_error = 0.0;
  double e_g_error = 0.0;
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();  ///< (d_if, d)
  double chi2 = 0.0;
  int dof = 0;
  std::size_t n_points = 0;
  bool weighted = false;  ///< false when some std_error was zero
  bool bounded = false;   ///< unconstrained optimum left [0,1]; refit via logit transform
  bool converged = false;
  int iterations = 0;
  std::string message;
};

/// Least-squares fit of rb_model. With `weighted`, weights are 1/std_error^2
/// and the covariance is absolute; otherwise (or if any std_error is zero)
/// unit weights are used and the covariance is scaled by chi2/dof.
/// Throws std::invalid_argument for fewer than 3 distinct lengths or
/// fidelities outside [0, 1].
DecayFit fit_rb_decay(std::span<const DecayPoint> points, bool weighted = true);

enum class SweepModel { kGaussian, kExponential, kSinusoid, kDampedSinusoid };
enum class Envelope { kExponential, kGaussian };

std::string model_name(SweepModel model);

struct DataPoint {
  double x = 0.0;
  double y = 0.0;
  double sigma = 0.0;  ///< zero means unknown
};

/// Parameter sets:
///   gaussian          offset + amplitude exp(-(x - center)^2 / (2 width^2))
///   exponential       amplitude exp(-x / tau) + offset
///   sinusoid          offset + amplitude cos(2 pi frequency x + phase)
///   damped sinusoid   offset + amplitude env(x) cos(2 pi frequency x + phase),
///                     env = exp(-x / tau) or exp(-x^2 / (2 tau^2))
struct SweepFit {
  SweepModel model = SweepModel::kGaussian;
  Envelope envelope = Envelope::kExponential;
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<double> errors;
  Eigen::MatrixXd covariance;
  double chi2 = 0.0;
  int dof = 0;
  std::size_t n_points = 0;
  bool converged = false;
  bool identifiable = true;
  std::vector<std::string> flags;

  /// Throws std::out_of_range for an unknown name.
  double value(std::string_view name) const;
  double error(std::string_view name) const;
  bool ok() const { return converged && identifiable; }
};

SweepFit fit_gaussian(std::span<const DataPoint> points);
SweepFit fit_exponential(std::span<const DataPoint> points);
SweepFit fit_sinusoid(std::span<const DataPoint> points);
SweepFit fit_damped_sinusoid(std::span<const DataPoint> points, Envelope envelope);
SweepFit fit_sweep(std::span<const DataPoint> points, SweepModel model, Envelope envelope = Envelope::kExponential);

}  // namespace qrb
