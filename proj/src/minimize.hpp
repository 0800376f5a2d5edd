#pragma once

#include <functional>
#include <vector>

namespace speclab::detail {

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
};

// Derivative-free local minimization (GSL Nelder-Mead simplex), starting at
// x0 with initial simplex edge lengths `step`.
MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                           const std::vector<double>& step, double size_tol = 1e-10, int max_iter = 2000);

}  // namespace speclab::detail
