#pragma once

#include <functional>

#include <Eigen/Dense>

namespace degpath {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  bool converged = false;
  int evaluations = 0;
};

struct NelderMeadOptions {
  double tolerance = 1e-8;  // simplex diameter threshold
  int max_iterations = 2000;
  double initial_step = 0.5;  // per-coordinate simplex offset (scaled by |x|+1)
};

/// Downhill simplex minimization. The objective may return +inf to reject a
/// point.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start,
                             const NelderMeadOptions& options = {});

}  // namespace degpath
