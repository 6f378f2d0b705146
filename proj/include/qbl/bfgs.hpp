#pragma once

#include <functional>
#include <vector>

namespace qbl {

struct BfgsOptions {
  double grad_tol = 1e-6;      // exit when ||grad||_2 drops below
  double cost_tol = 1e-10;     // exit on relative cost change below
  int max_iters = 500;
  double armijo_c = 1e-4;
};

struct BfgsResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<double> grad;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Objective callback: returns f(x) and, when grad is non-null, fills the
// analytic gradient.
using BfgsObjective = std::function<double(const std::vector<double>& x, std::vector<double>* grad)>;

// Dense BFGS with backtracking Armijo line search. Updates that violate the
// curvature condition are skipped. Throws ErrorKind::NumericalFailure on a
// non-finite objective or gradient.
BfgsResult minimize_bfgs(const BfgsObjective& objective, std::vector<double> x0,
                         const BfgsOptions& opts = {});

}  // namespace qbl
