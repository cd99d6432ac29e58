// Copyright 2026 The ioncav Authors
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

#include "ioncav/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "ioncav/constants.hpp"
#include "ioncav/error.hpp"

namespace ioncav::experiment {
namespace {

constexpr int kMaxIterations = 500;
constexpr double kGradientTol = 1e-10;
constexpr double kRelativeSsrTol = 1e-12;
constexpr double kStepTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

struct LorentzianSystem {
  Mat4 jtj = Mat4::Zero();
  Vec4 jtr = Vec4::Zero();
  double ssr = 0.0;
};

double sum_squares(std::span<const double> x, std::span<const double> y, const Vec4& p) {
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - lorentzian(x[i], p[0], p[1], p[2], p[3]);
    ssr += r * r;
  }
  return ssr;
}

LorentzianSystem linearize(std::span<const double> x, std::span<const double> y, const Vec4& p) {
  LorentzianSystem sys;
  const double c = p[0], h = p[1], a = p[2];
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = x[i] - c;
    const double d = u * u + h * h;
    Vec4 j;
    j[0] = a * h * h * 2.0 * u / (d * d);
    j[1] = a * 2.0 * h * u * u / (d * d);
    j[2] = h * h / d;
    j[3] = 1.0;
    const double r = y[i] - (p[3] + a * j[2]);
    sys.jtj += j * j.transpose();
    sys.jtr += j * r;
    sys.ssr += r * r;
  }
  return sys;
}

// MINPACK-style orthogonality test: every Jacobian column is (nearly)
// orthogonal to the residual vector.
bool gradient_small(const LorentzianSystem& sys, double y_scale, std::size_t n) {
  const double r_norm = std::sqrt(sys.ssr);
  if (r_norm <= 1e-13 * y_scale * std::sqrt(double(n))) return true;
  for (int k = 0; k < 4; ++k) {
    const double col = std::sqrt(sys.jtj(k, k));
    if (col == 0.0) continue;
    if (std::abs(sys.jtr[k]) > kGradientTol * col * r_norm) return false;
  }
  return true;
}

Vec4 seed_lorentzian(std::span<const double> x, std::span<const double> y) {
  const auto [min_it, max_it] = std::minmax_element(y.begin(), y.end());
  const std::size_t imax = static_cast<std::size_t>(max_it - y.begin());
  const double lo = *min_it;
  const double peak = *max_it - lo;
  const double half = lo + 0.5 * peak;

  auto crossing = [&](std::size_t a, std::size_t b) {
    // Linear interpolation of the half-level between samples a and b.
    const double t = (half - y[a]) / (y[b] - y[a]);
    return x[a] + t * (x[b] - x[a]);
  };
  double left = std::numeric_limits<double>::quiet_NaN();
  double right = left;
  for (std::size_t i = imax; i > 0; --i) {
    if (y[i - 1] <= half) {
      left = crossing(i - 1, i);
      break;
    }
  }
  for (std::size_t i = imax; i + 1 < y.size(); ++i) {
    if (y[i + 1] <= half) {
      right = crossing(i, i + 1);
      break;
    }
  }
  const double span = std::abs(x.back() - x.front());
  double hwhm;
  if (std::isfinite(left) && std::isfinite(right)) {
    hwhm = 0.5 * std::abs(right - left);
  } else if (std::isfinite(left)) {
    hwhm = std::abs(x[imax] - left);
  } else if (std::isfinite(right)) {
    hwhm = std::abs(right - x[imax]);
  } else {
    hwhm = 0.25 * span;
  }
  if (!(hwhm > 0.0)) hwhm = span / static_cast<double>(x.size());
  return {x[imax], hwhm, peak, lo};
}

FitResult pack_lorentzian(const Vec4& p, const Vec4& err, double rms, bool converged) {
  FitResult out;
  static constexpr const char* kNames[] = {"center", "hwhm", "peak", "offset"};
  for (int k = 0; k < 4; ++k) {
    out.params[kNames[k]] = k == 1 ? std::abs(p[k]) : p[k];
    out.param_errors[kNames[k]] = err[k];
  }
  out.residual_rms = rms;
  out.converged = converged;
  return out;
}

FitResult fit_lorentzian_scaled(std::span<const double> x, std::span<const double> y);

}  // namespace

double lorentzian(double x, double center, double hwhm, double peak, double offset) {
  const double u = x - center;
  return offset + peak * hwhm * hwhm / (u * u + hwhm * hwhm);
}

double sin2_model(double phi, double amplitude, double phase, double offset) {
  const double s = std::sin(phi + phase);
  return offset + amplitude * s * s;
}

FitResult fit_lorentzian(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("points", "x and y lengths differ");
  if (x.size() < 8) throw ValidationError("points", "Lorentzian fit needs at least 8 points");
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  if (!(*xmax > *xmin)) throw ValidationError("points", "x values are degenerate");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw ValidationError("points", "non-finite value");
  }

  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  const double y_scale = std::max({std::abs(*ymin), std::abs(*ymax), 1e-300});
  const Vec4 no_error = Vec4::Constant(kInf);
  if (*ymax - *ymin <= 1e-14 * y_scale) {
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    return pack_lorentzian({0.5 * (*xmin + *xmax), 0.5 * (*xmax - *xmin), 0.0, mean}, no_error, 0.0, false);
  }

  // Work on x and y mapped to order unity so the tolerances mean the same
  // thing whatever units the caller uses.
  const double x_mid = 0.5 * (*xmin + *xmax);
  const double x_half = 0.5 * (*xmax - *xmin);
  std::vector<double> xs(x.size()), ys(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xs[i] = (x[i] - x_mid) / x_half;
    ys[i] = y[i] / y_scale;
  }
  // A dip is fitted as a peak of the negated data.
  std::vector<double> sorted(ys);
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double sign = (median - *ymin / y_scale) > (*ymax / y_scale - median) ? -1.0 : 1.0;
  if (sign < 0.0) {
    for (double& v : ys) v = -v;
  }
  const FitResult unit = fit_lorentzian_scaled(xs, ys);
  FitResult out = unit;
  const auto rescale = [&](const std::string& name, double shift, double scale) {
    out.params[name] = shift + scale * unit.at(name);
    out.param_errors[name] = scale * unit.error(name);
  };
  rescale("center", x_mid, x_half);
  rescale("hwhm", 0.0, x_half);
  rescale("peak", 0.0, sign * y_scale);
  rescale("offset", 0.0, sign * y_scale);
  out.param_errors["peak"] = std::abs(out.param_errors["peak"]);
  out.param_errors["offset"] = std::abs(out.param_errors["offset"]);
  out.residual_rms = unit.residual_rms * y_scale;
  return out;
}

namespace {

FitResult fit_lorentzian_scaled(std::span<const double> x, std::span<const double> y) {
  const double y_scale = 1.0;
  const Vec4 no_error = Vec4::Constant(kInf);
  Vec4 p = seed_lorentzian(x, y);
  LorentzianSystem sys = linearize(x, y, p);
  double lambda = 1e-3;
  bool converged = gradient_small(sys, y_scale, x.size());
  for (int it = 0; it < kMaxIterations && !converged; ++it) {
    Mat4 a = sys.jtj;
    for (int k = 0; k < 4; ++k) a(k, k) += lambda * std::max(sys.jtj(k, k), 1e-300);
    const Vec4 step = a.ldlt().solve(sys.jtr);
    const Vec4 trial = p + step;
    const double trial_ssr = (trial.allFinite() && trial[1] != 0.0) ? sum_squares(x, y, trial) : kInf;
    // Reduction promised by the linearized model.
    const double predicted = step.dot(2.0 * sys.jtr - sys.jtj * step);
    if (trial_ssr > sys.ssr && predicted <= kRelativeSsrTol * sys.ssr) {
      converged = true;
      break;
    }
    if (trial_ssr <= sys.ssr) {
      const double old_ssr = sys.ssr;
      const bool small_step = (step.array().abs() <= kStepTol * (p.array().abs() + 1e-300)).all();
      p = trial;
      sys = linearize(x, y, p);
      lambda = std::max(lambda * 0.1, 1e-12);
      converged = gradient_small(sys, y_scale, x.size()) || small_step ||
                  (old_ssr - sys.ssr <= kRelativeSsrTol * old_ssr && lambda <= 1e-3);
    } else {
      lambda *= 10.0;
      if (lambda > 1e16) break;
    }
  }

  const std::size_t dof = x.size() > 4 ? x.size() - 4 : 1;
  const double rms = std::sqrt(sys.ssr / static_cast<double>(x.size()));
  Vec4 err = no_error;
  Eigen::FullPivLU<Mat4> lu(sys.jtj);
  if (lu.isInvertible()) {
    const Mat4 cov = lu.inverse() * (sys.ssr / static_cast<double>(dof));
    for (int k = 0; k < 4; ++k) err[k] = std::sqrt(std::max(cov(k, k), 0.0));
  } else {
    converged = false;
  }
  if (!p.allFinite()) converged = false;
  return pack_lorentzian(p, err, rms, converged);
}

}  // namespace

Sin2Fit fit_sin2(std::span<const double> phi, std::span<const double> y) {
  if (phi.size() != y.size()) throw ValidationError("points", "phi and y lengths differ");
  if (phi.size() < 3) throw ValidationError("points", "sin^2 fit needs at least 3 points");
  const Eigen::Index m = static_cast<Eigen::Index>(phi.size());
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(2.0 * phi[i]);
    design(i, 2) = std::sin(2.0 * phi[i]);
    rhs[i] = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) throw ValidationError("points", "phase samples do not determine a sin^2 model");
  const Eigen::Vector3d a = qr.solve(rhs);
  const Eigen::VectorXd resid = rhs - design * a;
  const double ssr = resid.squaredNorm();

  const double r = std::hypot(a[1], a[2]);
  const double amplitude = 2.0 * r;
  double phase = r > 0.0 ? 0.5 * std::atan2(a[2], -a[1]) : 0.0;
  if (phase < 0.0) phase += kPi;
  if (phase >= kPi) phase -= kPi;
  const double offset = a[0] - r;

  const double s2 = m > 3 ? ssr / static_cast<double>(m - 3) : 0.0;
  const Eigen::Matrix3d xtx = design.transpose() * design;
  const Eigen::Matrix3d cov = xtx.inverse() * s2;
  auto propagate = [&](const Eigen::Vector3d& grad) {
    return std::sqrt(std::max(grad.dot(cov * grad), 0.0));
  };

  Sin2Fit out;
  out.fit.params = {{"amplitude", amplitude}, {"phase", phase}, {"offset", offset}};
  const double r_safe = r > 0.0 ? r : kInf;
  out.fit.param_errors = {
      {"amplitude", propagate({0.0, 2.0 * a[1] / r_safe, 2.0 * a[2] / r_safe})},
      {"phase", r > 0.0 ? propagate({0.0, a[2] / (2.0 * r * r), -a[1] / (2.0 * r * r)}) : kInf},
      {"offset", propagate({1.0, -a[1] / r_safe, -a[2] / r_safe})},
  };
  out.fit.residual_rms = std::sqrt(ssr / static_cast<double>(m));
  out.fit.converged = std::isfinite(out.fit.residual_rms);
  if (a[0] > 0.0) {
    out.visibility = r / a[0];
    out.visibility_error = r > 0.0 ? propagate({-r / (a[0] * a[0]), a[1] / (r * a[0]), a[2] / (r * a[0])})
                                   : propagate({0.0, 0.0, 0.0});
  }
  return out;
}

}  // namespace ioncav::experiment
