#include "qbl/bfgs.hpp"

#include <cmath>

#include "qbl/error.hpp"

namespace qbl {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

bool all_finite(double value, const std::vector<double>& grad) {
  if (!std::isfinite(value)) return false;
  for (const double g : grad) {
    if (!std::isfinite(g)) return false;
  }
  return true;
}

}  // namespace

BfgsResult minimize_bfgs(const BfgsObjective& objective, std::vector<double> x0,
                         const BfgsOptions& opts) {
  const std::size_t dim = x0.size();
  BfgsResult res;
  res.x = std::move(x0);
  res.grad.assign(dim, 0.0);
  res.value = objective(res.x, &res.grad);
  require(all_finite(res.value, res.grad), ErrorKind::NumericalFailure,
          "non-finite objective or gradient at the initial point");

  // Inverse Hessian estimate, dense; dimension is 2p (tens at most).
  std::vector<double> hess(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) hess[i * dim + i] = 1.0;

  std::vector<double> direction(dim), x_new(dim), grad_new(dim), s(dim), y(dim), hy(dim);

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    res.iterations = iter;
    res.grad_norm = norm2(res.grad);
    if (res.grad_norm < opts.grad_tol) {
      res.converged = true;
      return res;
    }

    for (std::size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) acc += hess[i * dim + j] * res.grad[j];
      direction[i] = -acc;
    }
    double slope = dot(res.grad, direction);
    if (slope >= 0.0) {
      // Reset to steepest descent if the estimate lost positive definiteness.
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) hess[i * dim + j] = (i == j) ? 1.0 : 0.0;
        direction[i] = -res.grad[i];
      }
      slope = dot(res.grad, direction);
    }

    double step = 1.0;
    double value_new = res.value;
    bool accepted = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      for (std::size_t i = 0; i < dim; ++i) x_new[i] = res.x[i] + step * direction[i];
      value_new = objective(x_new, &grad_new);
      require(all_finite(value_new, grad_new), ErrorKind::NumericalFailure,
              "non-finite objective or gradient during line search (iteration " +
                  std::to_string(iter) + ")");
      if (value_new <= res.value + opts.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Step underflow: gradient is numerically flat along the ray.
      res.grad_norm = norm2(res.grad);
      res.converged = res.grad_norm < opts.grad_tol;
      return res;
    }

    for (std::size_t i = 0; i < dim; ++i) {
      s[i] = x_new[i] - res.x[i];
      y[i] = grad_new[i] - res.grad[i];
    }
    const double value_old = res.value;
    res.x = x_new;
    res.value = value_new;
    res.grad = grad_new;

    const double sy = dot(s, y);
    if (sy > 1e-12 * norm2(s) * norm2(y)) {
      // BFGS inverse update: H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T.
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) acc += hess[i * dim + j] * y[j];
        hy[i] = acc;
      }
      const double yhy = dot(y, hy);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          hess[i * dim + j] += rho * ((1.0 + rho * yhy) * s[i] * s[j] - hy[i] * s[j] - s[i] * hy[j]);
        }
      }
    }

    const double denom = std::max(1.0, std::abs(value_old));
    if (std::abs(value_old - res.value) < opts.cost_tol * denom) {
      res.iterations = iter + 1;
      res.grad_norm = norm2(res.grad);
      res.converged = true;
      return res;
    }
  }

  res.iterations = opts.max_iters;
  res.grad_norm = norm2(res.grad);
  res.converged = false;
  return res;
}

}  // namespace qbl
