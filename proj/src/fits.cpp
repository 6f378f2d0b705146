#include "qbl/fits.hpp"

#include <algorithm>
#include <cmath>

#include "qbl/error.hpp"

namespace qbl {

std::vector<double> quantiles(std::vector<double> values, std::span<const double> qs) {
  require(!values.empty(), ErrorKind::InvalidInput, "quantiles of an empty sample");
  for (const double q : qs) {
    require(0.0 <= q && q <= 1.0, ErrorKind::InvalidInput, "quantile probabilities must lie in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  out.reserve(qs.size());
  for (const double q : qs) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    out.push_back(values[lo] + frac * (values[hi] - values[lo]));
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  return quantiles(std::move(values), std::span<const double>{&q, 1})[0];
}

double ScalingPoint::x() const { return n / std::pow(p, 2.0 / 3.0); }

namespace {

// Solves the symmetric 2x2 system [[a00, a01], [a01, a11]] v = rhs.
bool solve_2x2(double a00, double a01, double a11, double r0, double r1, double& v0, double& v1) {
  const double det = a00 * a11 - a01 * a01;
  if (det == 0.0 || !std::isfinite(det)) return false;
  v0 = (r0 * a11 - r1 * a01) / det;
  v1 = (r1 * a00 - r0 * a01) / det;
  return true;
}

double scaling_ssr(std::span<const ScalingPoint> points, double a, double b) {
  double ssr = 0.0;
  for (const auto& pt : points) {
    const double r = a * std::exp(-b * pt.x()) - pt.median;
    ssr += r * r;
  }
  return ssr;
}

}  // namespace

ScalingFitAB fit_pcmin_scaling(std::span<const ScalingPoint> points) {
  require(points.size() >= 3, ErrorKind::InvalidInput,
          "scaling fit needs at least 3 points, got " + std::to_string(points.size()));
  for (const auto& pt : points) {
    require(pt.median > 0.0, ErrorKind::InvalidInput,
            "scaling fit requires positive medians");
    require(pt.p > 0.0 && pt.n > 0.0, ErrorKind::InvalidInput, "scaling fit requires n, p > 0");
  }

  // Log-linear initialization: ln(median) = ln a - b x.
  std::vector<double> xs, logs;
  xs.reserve(points.size());
  logs.reserve(points.size());
  for (const auto& pt : points) {
    xs.push_back(pt.x());
    logs.push_back(std::log(pt.median));
  }
  const TemperatureLawCD line = fit_line(xs, logs);
  double a = std::exp(line.d);
  double b = -line.c;

  // Levenberg-Marquardt refinement on (a, b).
  double lambda = 1e-3;
  double ssr = scaling_ssr(points, a, b);
  for (int it = 0; it < 200; ++it) {
    double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0, jtr0 = 0.0, jtr1 = 0.0;
    for (const auto& pt : points) {
      const double e = std::exp(-b * pt.x());
      const double r = a * e - pt.median;
      const double ja = e;
      const double jb = -a * pt.x() * e;
      jtj00 += ja * ja;
      jtj01 += ja * jb;
      jtj11 += jb * jb;
      jtr0 += ja * r;
      jtr1 += jb * r;
    }
    double da = 0.0, db = 0.0;
    if (!solve_2x2(jtj00 * (1.0 + lambda), jtj01, jtj11 * (1.0 + lambda), -jtr0, -jtr1, da, db)) {
      fail(ErrorKind::FitFailure, "singular Jacobian in the scaling fit");
    }
    const double a_new = a + da;
    const double b_new = b + db;
    const double ssr_new = scaling_ssr(points, a_new, b_new);
    if (ssr_new < ssr) {
      const bool tiny = std::abs(da) <= 1e-12 * std::max(1.0, std::abs(a)) &&
                        std::abs(db) <= 1e-12 * std::max(1.0, std::abs(b));
      a = a_new;
      b = b_new;
      ssr = ssr_new;
      lambda = std::max(lambda * 0.3, 1e-12);
      if (tiny) break;
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }

  ScalingFitAB fit;
  fit.a = a;
  fit.b = b;
  fit.residual_norm = std::sqrt(ssr);

  // Asymptotic standard errors from sigma^2 (J^T J)^-1 at the optimum.
  double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0;
  for (const auto& pt : points) {
    const double e = std::exp(-b * pt.x());
    const double ja = e;
    const double jb = -a * pt.x() * e;
    jtj00 += ja * ja;
    jtj01 += ja * jb;
    jtj11 += jb * jb;
  }
  const double det = jtj00 * jtj11 - jtj01 * jtj01;
  require(det > 0.0 && std::isfinite(det), ErrorKind::FitFailure,
          "singular Jacobian in the scaling fit");
  const std::size_t dof = points.size() > 2 ? points.size() - 2 : 1;
  const double sigma_sq = ssr / static_cast<double>(dof);
  fit.a_se = std::sqrt(sigma_sq * jtj11 / det);
  fit.b_se = std::sqrt(sigma_sq * jtj00 / det);
  return fit;
}

TemperatureLawCD fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorKind::InvalidInput, "x and y must have equal length");
  require(x.size() >= 3, ErrorKind::InvalidInput,
          "line fit needs at least 3 records, got " + std::to_string(x.size()));
  const double m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = m * sxx - sx * sx;
  require(det > 0.0, ErrorKind::FitFailure, "degenerate x values in the line fit");

  TemperatureLawCD fit;
  fit.c = (m * sxy - sx * sy) / det;
  fit.d = (sxx * sy - sx * sxy) / det;

  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.c * x[i] + fit.d);
    ssr += r * r;
  }
  fit.residual_norm = std::sqrt(ssr);
  const double dof = std::max(1.0, m - 2.0);
  const double sigma_sq = ssr / dof;
  fit.c_se = std::sqrt(sigma_sq * m / det);
  fit.d_se = std::sqrt(sigma_sq * sxx / det);
  return fit;
}

double layers_for_target(double n, double target, const ScalingFitAB& fit) {
  require(target > 0.0, ErrorKind::InvalidInput, "target probability must be positive");
  require(target < fit.a, ErrorKind::UnattainableTarget,
          "target exceeds the p->infinity ceiling a = " + std::to_string(fit.a));
  const double denom = std::log(fit.a / target);
  return std::pow(fit.b * n / denom, 1.5);
}

}  // namespace qbl
