#pragma once

#include <span>
#include <vector>

namespace qbl {

// Linear-interpolation quantiles on the sorted sample.
std::vector<double> quantiles(std::vector<double> values, std::span<const double> qs);
double quantile(std::vector<double> values, double q);

// Fit of median Pr(C_min) = a * exp(-b * n / p^(2/3)).
struct ScalingPoint {
  double n = 0.0;
  double p = 0.0;
  double median = 0.0;

  double x() const;  // n / p^(2/3)
};

struct ScalingFitAB {
  double a = 0.0;
  double b = 0.0;
  double a_se = 0.0;
  double b_se = 0.0;
  double residual_norm = 0.0;
};

// Nonlinear least squares initialized from the log-linear regression and
// refined by Levenberg-Marquardt; standard errors from the asymptotic
// covariance sigma^2 (J^T J)^-1.
ScalingFitAB fit_pcmin_scaling(std::span<const ScalingPoint> points);

// Ordinary least squares of y on x with intercept: y = c * x + d.
struct TemperatureLawCD {
  double c = 0.0;
  double d = 0.0;
  double c_se = 0.0;
  double d_se = 0.0;
  double residual_norm = 0.0;
};

TemperatureLawCD fit_line(std::span<const double> x, std::span<const double> y);

// Inversion of the scaling law: p = (b n / ln(a/target))^(3/2). Targets at or
// above the p -> infinity ceiling a are unattainable.
double layers_for_target(double n, double target, const ScalingFitAB& fit);

}  // namespace qbl
