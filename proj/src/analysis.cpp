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

#include "qrb/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>

#include "qrb/levenberg_marquardt.hpp"

namespace qrb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

struct Weights {
  Eigen::VectorXd sqrt_w;
  bool absolute = false;
};

template <typename Sigma>
Weights make_weights(std::size_t n, Sigma sigma, bool use) {
  Weights w;
  w.sqrt_w = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  bool all_positive = use;
  for (std::size_t i = 0; i < n && all_positive; ++i) all_positive = sigma(i) > 0.0 && std::isfinite(sigma(i));
  if (all_positive) {
    for (std::size_t i = 0; i < n; ++i) w.sqrt_w(static_cast<Eigen::Index>(i)) = 1.0 / sigma(i);
    w.absolute = true;
  }
  return w;
}

Eigen::MatrixXd scaled_covariance(const Eigen::MatrixXd& jacobian, double chi2, int dof, bool absolute) {
  Eigen::MatrixXd cov = normal_covariance(jacobian);
  if (!absolute) cov *= dof > 0 ? chi2 / dof : 0.0;
  return cov;
}

// --- RB decay -------------------------------------------------------------

void rb_residuals(std::span<const DecayPoint> pts, const Weights& w, double d_if, double d, Eigen::VectorXd& r,
                  Eigen::MatrixXd& j) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double l = pts[i].length;
    const double q = std::pow(1.0 - d, l);
    const double s = w.sqrt_w(k);
    r(k) = s * (0.5 + 0.5 * (1.0 - d_if) * q - pts[i].fidelity);
    j(k, 0) = -s * 0.5 * q;
    j(k, 1) = l == 0.0 ? 0.0 : -s * 0.5 * (1.0 - d_if) * l * std::pow(1.0 - d, l - 1.0);
  }
}

Eigen::Vector2d rb_initial_guess(std::span<const DecayPoint> pts) {
  // Weighted log-linear fit of ln(2F - 1) = ln(1 - d_if) + l ln(1 - d).
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (const auto& p : pts) {
    const double y = 2.0 * p.fidelity - 1.0;
    if (y <= 0.0) continue;
    const double w = y * y;
    const double ly = std::log(y);
    sw += w;
    sx += w * p.length;
    sy += w * ly;
    sxx += w * p.length * p.length;
    sxy += w * p.length * ly;
    ++used;
  }
  const double det = sw * sxx - sx * sx;
  if (used < 2 || det <= 0.0) return {0.0, 1e-3};
  const double slope = (sw * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / sw;
  return {1.0 - std::exp(intercept), 1.0 - std::exp(slope)};
}

}  // namespace

double rb_model(double length, double d_if, double d) {
  return 0.5 + 0.5 * (1.0 - d_if) * std::pow(1.0 - d, length);
}

double error_per_gate(double d) {
  if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("error_per_gate: d must be in [0, 1]");
  return 0.5 * d;
}

DecayFit fit_rb_decay(std::span<const DecayPoint> points, bool weighted) {
  std::set<double> lengths;
  for (const auto& p : points) {
    if (!std::isfinite(p.length) || !std::isfinite(p.fidelity) || !std::isfinite(p.std_error)) {
      throw std::invalid_argument("fit_rb_decay: non-finite input");
    }
    if (p.fidelity < -1e-12 || p.fidelity > 1.0 + 1e-12) {
      throw std::invalid_argument("fit_rb_decay: fidelity outside [0, 1]");
    }
    lengths.insert(p.length);
  }
  if (lengths.size() < 3) throw std::invalid_argument("fit_rb_decay: need at least 3 distinct lengths");

  const std::size_t n = points.size();
  const Weights w = make_weights(n, [&](std::size_t i) { return points[i].std_error; }, weighted);

  DecayFit fit;
  fit.n_points = n;
  fit.dof = static_cast<int>(n) - 2;
  fit.weighted = w.absolute;

  auto natural = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
    rb_residuals(points, w, p(0), p(1), r, j);
  };
  LmResult lm = levenberg_marquardt(natural, rb_initial_guess(points), n);
  double d_if = lm.params(0);
  double d = lm.params(1);

  const bool inside = d_if >= 0.0 && d_if <= 1.0 && d >= 0.0 && d <= 1.0;
  if (!inside || !lm.converged) {
    // Constrained refit in logit coordinates.
    auto transformed = [&](const Eigen::VectorXd& u, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
      const double a = logistic(u(0));
      const double b = logistic(u(1));
      rb_residuals(points, w, a, b, r, j);
      j.col(0) *= a * (1.0 - a);
      j.col(1) *= b * (1.0 - b);
    };
    const double eps = 1e-9;
    Eigen::VectorXd u0(2);
    u0 << logit(std::clamp(d_if, eps, 1.0 - eps)), logit(std::clamp(d, eps, 1.0 - eps));
    lm = levenberg_marquardt(transformed, u0, n);
    d_if = logistic(lm.params(0));
    d = logistic(lm.params(1));
    fit.bounded = true;
  }

  Eigen::VectorXd r(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd j(static_cast<Eigen::Index>(n), 2);
  rb_residuals(points, w, d_if, d, r, j);
  fit.d_if = d_if;
  fit.d = d;
  fit.e_g = error_per_gate(d);
  fit.chi2 = r.squaredNorm();
  fit.covariance = scaled_covariance(j, fit.chi2, fit.dof, w.absolute);
  fit.d_if_error = std::sqrt(fit.covariance(0, 0));
  fit.d_error = std::sqrt(fit.covariance(1, 1));
  fit.e_g_error = 0.5 * fit.d_error;
  fit.converged = lm.converged;
  fit.iterations = lm.iterations;
  fit.message = lm.message;
  return fit;
}

// --- Sweep models ---------------------------------------------------------

std::string model_name(SweepModel model) {
  switch (model) {
    case SweepModel::kGaussian:
      return "gaussian";
    case SweepModel::kExponential:
      return "exponential";
    case SweepModel::kSinusoid:
      return "sinusoid";
    case SweepModel::kDampedSinusoid:
      return "damped_sinusoid";
  }
  return "unknown";
}

double SweepFit::value(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  throw std::out_of_range("SweepFit: no parameter named " + std::string(name));
}

double SweepFit::error(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return errors[i];
  }
  throw std::out_of_range("SweepFit: no parameter named " + std::string(name));
}

namespace {

using GradRow = Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

/// f(x; p) and its gradient with respect to the internal parameters.
using ModelFn = std::function<double(double x, const Eigen::VectorXd& p, GradRow grad)>;

/// Maps internal parameters to reported values and the Jacobian of that map.
using ReportFn = std::function<void(const Eigen::VectorXd& p, Eigen::VectorXd& values, Eigen::MatrixXd& g)>;

struct Problem {
  std::span<const DataPoint> points;
  Weights weights;
  ModelFn model;

  ResidualFunction residuals() const {
    return [this](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double s = weights.sqrt_w(k);
        r(k) = s * (model(points[i].x, p, j.row(k)) - points[i].y);
        j.row(k) *= s;
      }
    };
  }

  LmResult solve(const Eigen::VectorXd& start) const { return levenberg_marquardt(residuals(), start, points.size()); }
};

Weights sweep_weights(std::span<const DataPoint> points) {
  return make_weights(points.size(), [&](std::size_t i) { return points[i].sigma; }, true);
}

void check_points(std::span<const DataPoint> points, std::size_t minimum, const char* who) {
  if (points.size() < minimum) {
    throw std::invalid_argument(std::string(who) + ": need at least " + std::to_string(minimum) + " points");
  }
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.sigma)) {
      throw std::invalid_argument(std::string(who) + ": non-finite input");
    }
  }
}

bool is_flat(std::span<const DataPoint> points) {
  double lo = points[0].y, hi = points[0].y, scale = 1.0;
  for (const auto& p : points) {
    lo = std::min(lo, p.y);
    hi = std::max(hi, p.y);
    scale = std::max(scale, std::abs(p.y));
  }
  return hi - lo <= 1e-12 * scale;
}

double mean_y(std::span<const DataPoint> points) {
  double s = 0.0;
  for (const auto& p : points) s += p.y;
  return s / static_cast<double>(points.size());
}

/// Weighted linear least squares y ~ basis * c; returns (c, rss).
std::pair<Eigen::VectorXd, double> linear_fit(const Eigen::MatrixXd& basis, std::span<const DataPoint> points,
                                              const Weights& w) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd a = basis;
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a.row(i) *= w.sqrt_w(i);
    y(i) = w.sqrt_w(i) * points[static_cast<std::size_t>(i)].y;
  }
  Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
  return {c, (a * c - y).squaredNorm()};
}

SweepFit finish(SweepModel model, std::vector<std::string> names, const Problem& problem, const LmResult& lm,
                const ReportFn& report) {
  SweepFit fit;
  fit.model = model;
  fit.names = std::move(names);
  fit.n_points = problem.points.size();
  fit.dof = static_cast<int>(fit.n_points) - static_cast<int>(lm.params.size());
  fit.chi2 = lm.chi2;
  fit.converged = lm.converged;
  if (!lm.converged) fit.flags.push_back("not converged: " + lm.message);

  const Eigen::MatrixXd cov_internal = scaled_covariance(lm.jacobian, lm.chi2, fit.dof, problem.weights.absolute);
  Eigen::VectorXd values;
  Eigen::MatrixXd g;
  report(lm.params, values, g);
  fit.covariance = g * cov_internal * g.transpose();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    fit.values.push_back(values(i));
    fit.errors.push_back(std::sqrt(std::max(0.0, fit.covariance(i, i))));
  }
  return fit;
}

SweepFit unidentifiable(SweepModel model, std::vector<std::string> names, std::span<const DataPoint> points,
                        const std::string& why) {
  SweepFit fit;
  fit.model = model;
  fit.n_points = points.size();
  fit.dof = static_cast<int>(points.size()) - static_cast<int>(names.size());
  fit.converged = true;
  fit.identifiable = false;
  fit.flags.push_back(why);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& name : names) {
    double v = nan;
    if (name == "offset") v = mean_y(points);
    if (name == "amplitude") v = 0.0;
    fit.values.push_back(v);
    fit.errors.push_back(nan);
  }
  fit.names = std::move(names);
  fit.covariance = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(fit.names.size()),
                                             static_cast<Eigen::Index>(fit.names.size()), nan);
  return fit;
}

double median_spacing(std::span<const DataPoint> points) {
  std::vector<double> xs;
  for (const auto& p : points) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  std::vector<double> gaps;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] > xs[i - 1]) gaps.push_back(xs[i] - xs[i - 1]);
  }
  if (gaps.empty()) return 0.0;
  std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2), gaps.end());
  return gaps[gaps.size() / 2];
}

std::pair<double, double> x_range(std::span<const DataPoint> points) {
  double lo = points[0].x, hi = points[0].x;
  for (const auto& p : points) {
    lo = std::min(lo, p.x);
    hi = std::max(hi, p.x);
  }
  return {lo, hi};
}

Eigen::VectorXd log_grid(double lo, double hi, int n) {
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) g(i) = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

}  // namespace

SweepFit fit_gaussian(std::span<const DataPoint> points) {
  check_points(points, 4, "fit_gaussian");
  std::vector<std::string> names{"offset", "amplitude", "center", "width"};
  if (is_flat(points)) return unidentifiable(SweepModel::kGaussian, names, points, "flat data: width unidentifiable");

  Problem problem{points, sweep_weights(points),
                  [](double x, const Eigen::VectorXd& p, GradRow grad) {
                    const double w = std::exp(p(3));
                    const double u = (x - p(2)) / w;
                    const double e = std::exp(-0.5 * u * u);
                    grad(0) = 1.0;
                    grad(1) = e;
                    grad(2) = p(1) * e * u / w;
                    grad(3) = p(1) * e * u * u;
                    return p(0) + p(1) * e;
                  }};

  // Peak/second-moment style start: floor at the far extreme, center at the
  // extremum, width from the half-height extent.
  std::vector<double> ys;
  for (const auto& p : points) ys.push_back(p.y);
  std::vector<double> sorted = ys;
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front(), hi = sorted.back(), med = sorted[sorted.size() / 2];
  const bool peak_up = hi - med >= med - lo;
  const double c0 = peak_up ? lo : hi;
  const double a0 = peak_up ? hi - lo : lo - hi;
  std::size_t i_peak = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if ((points[i].y - points[i_peak].y) * (peak_up ? 1.0 : -1.0) > 0.0) i_peak = i;
  }
  double xl = points[i_peak].x, xr = points[i_peak].x;
  for (const auto& p : points) {
    if ((p.y - c0) / a0 > 0.5) {
      xl = std::min(xl, p.x);
      xr = std::max(xr, p.x);
    }
  }
  const double spacing = std::max(median_spacing(points), 1e-300);
  const double w0 = std::max((xr - xl) / 2.3548, 0.5 * spacing);

  LmResult best;
  best.chi2 = std::numeric_limits<double>::infinity();
  for (double factor : {1.0, 0.5, 2.0}) {
    Eigen::VectorXd start(4);
    start << c0, a0, points[i_peak].x, std::log(w0 * factor);
    LmResult lm = problem.solve(start);
    if (std::isfinite(lm.chi2) && (lm.chi2 < best.chi2 || (!best.converged && lm.converged))) best = lm;
  }

  SweepFit fit = finish(SweepModel::kGaussian, names, problem, best,
                        [](const Eigen::VectorXd& p, Eigen::VectorXd& v, Eigen::MatrixXd& g) {
                          v = p;
                          v(3) = std::exp(p(3));
                          g = Eigen::MatrixXd::Identity(4, 4);
                          g(3, 3) = v(3);
                        });
  if (std::abs(fit.values[1]) <= 1e-12 * std::max(1.0, std::abs(fit.values[0]))) {
    fit.identifiable = false;
    fit.flags.push_back("amplitude ~ 0: width unidentifiable");
  }
  return fit;
}

SweepFit fit_exponential(std::span<const DataPoint> points) {
  check_points(points, 3, "fit_exponential");
  std::vector<std::string> names{"amplitude", "tau", "offset"};
  if (is_flat(points)) return unidentifiable(SweepModel::kExponential, names, points, "flat data: tau unidentifiable");

  Problem problem{points, sweep_weights(points),
                  [](double x, const Eigen::VectorXd& p, GradRow grad) {
                    const double tau = std::exp(p(1));
                    const double e = std::exp(-x / tau);
                    grad(0) = e;
                    grad(1) = p(0) * e * x / tau;
                    grad(2) = 1.0;
                    return p(0) * e + p(2);
                  }};

  // Variable projection over a log grid of tau picks the start.
  const auto [x_lo, x_hi] = x_range(points);
  const double span = std::max(x_hi - x_lo, 1e-300);
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::VectorXd start(3);
  double best_rss = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd taus = log_grid(span / 200.0, span * 200.0, 81);
  for (Eigen::Index t = 0; t < taus.size(); ++t) {
    Eigen::MatrixXd basis(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      basis(i, 0) = std::exp(-(points[static_cast<std::size_t>(i)].x - x_lo) / taus(t));
      basis(i, 1) = 1.0;
    }
    const auto [c, rss] = linear_fit(basis, points, problem.weights);
    if (rss < best_rss && c.allFinite()) {
      best_rss = rss;
      start << c(0) * std::exp(x_lo / taus(t)), std::log(taus(t)), c(1);
    }
  }
  const LmResult lm = problem.solve(start);
  return finish(SweepModel::kExponential, names, problem, lm,
                [](const Eigen::VectorXd& p, Eigen::VectorXd& v, Eigen::MatrixXd& g) {
                  v = p;
                  v(1) = std::exp(p(1));
                  g = Eigen::MatrixXd::Identity(3, 3);
                  g(1, 1) = v(1);
                });
}

namespace {

// Internal sinusoid parameters: (offset, a, b, frequency[, log tau]) with
// offset + env (a cos + b sin). Reported: offset, amplitude, frequency, phase[, tau].
void report_sinusoid(const Eigen::VectorXd& p, Eigen::VectorXd& v, Eigen::MatrixXd& g) {
  const auto n = p.size();
  const double a = p(1), b = p(2);
  const double amp = std::hypot(a, b);
  v.resize(n);
  v(0) = p(0);
  v(1) = amp;
  v(2) = p(3);
  v(3) = std::atan2(-b, a);
  g = Eigen::MatrixXd::Zero(n, n);
  g(0, 0) = 1.0;
  g(2, 3) = 1.0;
  if (amp > 0.0) {
    g(1, 1) = a / amp;
    g(1, 2) = b / amp;
    g(3, 1) = b / (amp * amp);
    g(3, 2) = -a / (amp * amp);
  }
  if (n == 5) {
    v(4) = std::exp(p(4));
    g(4, 4) = v(4);
  }
}

void flag_sinusoid(SweepFit& fit, std::span<const DataPoint> points) {
  const double amp = fit.value("amplitude");
  const double amp_err = fit.error("amplitude");
  if (amp <= 1e-9 * std::max(1.0, std::abs(fit.value("offset"))) || (amp_err > 0.0 && amp < 2.0 * amp_err)) {
    fit.identifiable = false;
    fit.flags.push_back("amplitude ~ 0: frequency unidentifiable");
  }
  const double spacing = median_spacing(points);
  if (spacing > 0.0 && std::abs(fit.value("frequency")) > 0.5 / spacing) {
    fit.identifiable = false;
    fit.flags.push_back("frequency above the Nyquist limit of the sampling");
  }
}

double periodogram_peak(std::span<const DataPoint> points, const Weights& w) {
  const auto [x_lo, x_hi] = x_range(points);
  const double span = x_hi - x_lo;
  const double spacing = median_spacing(points);
  if (span <= 0.0 || spacing <= 0.0) throw std::invalid_argument("sinusoid fit: need distinct x values");
  const double f_max = 0.5 / spacing;
  const double df = 1.0 / (10.0 * span);
  const auto n = static_cast<Eigen::Index>(points.size());
  double best_f = df, best_rss = std::numeric_limits<double>::infinity();
  for (double f = df; f <= f_max * (1.0 + 1e-12); f += df) {
    Eigen::MatrixXd basis(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ph = kTwoPi * f * points[static_cast<std::size_t>(i)].x;
      basis(i, 0) = 1.0;
      basis(i, 1) = std::cos(ph);
      basis(i, 2) = std::sin(ph);
    }
    const double rss = linear_fit(basis, points, w).second;
    if (rss < best_rss) {
      best_rss = rss;
      best_f = f;
    }
  }
  return best_f;
}

ModelFn sinusoid_model(std::optional<Envelope> envelope) {
  return [envelope](double x, const Eigen::VectorXd& p, GradRow grad) {
    const double ph = kTwoPi * p(3) * x;
    const double c = std::cos(ph), s = std::sin(ph);
    double env = 1.0, denv_ds = 0.0;
    if (envelope) {
      const double tau = std::exp(p(4));
      if (*envelope == Envelope::kExponential) {
        env = std::exp(-x / tau);
        denv_ds = env * x / tau;
      } else {
        env = std::exp(-0.5 * x * x / (tau * tau));
        denv_ds = env * x * x / (tau * tau);
      }
    }
    const double osc = p(1) * c + p(2) * s;
    grad(0) = 1.0;
    grad(1) = env * c;
    grad(2) = env * s;
    grad(3) = env * kTwoPi * x * (-p(1) * s + p(2) * c);
    if (envelope) grad(4) = denv_ds * osc;
    return p(0) + env * osc;
  };
}

}  // namespace

SweepFit fit_sinusoid(std::span<const DataPoint> points) {
  check_points(points, 5, "fit_sinusoid");
  std::vector<std::string> names{"offset", "amplitude", "frequency", "phase"};
  if (is_flat(points)) {
    return unidentifiable(SweepModel::kSinusoid, names, points, "amplitude ~ 0: frequency unidentifiable");
  }
  Problem problem{points, sweep_weights(points), sinusoid_model(std::nullopt)};
  const double f0 = periodogram_peak(points, problem.weights);
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd basis(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ph = kTwoPi * f0 * points[static_cast<std::size_t>(i)].x;
    basis.row(i) << 1.0, std::cos(ph), std::sin(ph);
  }
  const Eigen::VectorXd c = linear_fit(basis, points, problem.weights).first;
  Eigen::VectorXd start(4);
  start << c(0), c(1), c(2), f0;
  SweepFit fit = finish(SweepModel::kSinusoid, names, problem, problem.solve(start), report_sinusoid);
  flag_sinusoid(fit, points);
  return fit;
}

SweepFit fit_damped_sinusoid(std::span<const DataPoint> points, Envelope envelope) {
  check_points(points, 6, "fit_damped_sinusoid");
  std::vector<std::string> names{"offset", "amplitude", "frequency", "phase", "tau"};
  if (is_flat(points)) {
    auto fit = unidentifiable(SweepModel::kDampedSinusoid, names, points, "amplitude ~ 0: frequency unidentifiable");
    fit.envelope = envelope;
    return fit;
  }
  Problem problem{points, sweep_weights(points), sinusoid_model(envelope)};
  const double f0 = periodogram_peak(points, problem.weights);
  const auto [x_lo, x_hi] = x_range(points);
  const double span = std::max(x_hi - x_lo, std::abs(x_hi));
  const auto n = static_cast<Eigen::Index>(points.size());

  Eigen::VectorXd start(5);
  double best_rss = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd taus = log_grid(span / 50.0, span * 1000.0, 81);
  for (Eigen::Index t = 0; t < taus.size(); ++t) {
    Eigen::MatrixXd basis(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = points[static_cast<std::size_t>(i)].x;
      const double env = envelope == Envelope::kExponential ? std::exp(-x / taus(t))
                                                            : std::exp(-0.5 * x * x / (taus(t) * taus(t)));
      const double ph = kTwoPi * f0 * x;
      basis.row(i) << 1.0, env * std::cos(ph), env * std::sin(ph);
    }
    const auto [c, rss] = linear_fit(basis, points, problem.weights);
    if (rss < best_rss && c.allFinite()) {
      best_rss = rss;
      start << c(0), c(1), c(2), f0, std::log(taus(t));
    }
  }
  SweepFit fit = finish(SweepModel::kDampedSinusoid, names, problem, problem.solve(start), report_sinusoid);
  fit.envelope = envelope;
  flag_sinusoid(fit, points);
  return fit;
}

SweepFit fit_sweep(std::span<const DataPoint> points, SweepModel model, Envelope envelope) {
  switch (model) {
    case SweepModel::kGaussian:
      return fit_gaussian(points);
    case SweepModel::kExponential:
      return fit_exponential(points);
    case SweepModel::kSinusoid:
      return fit_sinusoid(points);
    case SweepModel::kDampedSinusoid:
      return fit_damped_sinusoid(points, envelope);
  }
  throw std::invalid_argument("fit_sweep: unknown model");
}

}  // namespace qrb
