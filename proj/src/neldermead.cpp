#include "degpath/neldermead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace degpath {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start, const NelderMeadOptions& opt) {
  const int n = static_cast<int>(start.size());
  NelderMeadResult res;
  int evals = 0;
  auto f = [&](const Eigen::VectorXd& x) {
    ++evals;
    double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> simplex(n + 1, start);
  std::vector<double> fv(n + 1);
  for (int i = 0; i < n; ++i)
    simplex[i + 1][i] += opt.initial_step * (std::abs(start[i]) + 1.0);
  for (int i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

  std::vector<int> order(n + 1);
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], worst = order[n], second_worst = order[n - 1];

    double diameter = 0.0;
    for (int i = 1; i <= n; ++i)
      diameter = std::max(diameter, (simplex[order[i]] - simplex[best]).norm());
    if (diameter < opt.tolerance) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= static_cast<double>(n);

    Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    double fr = f(reflected);
    if (fr < fv[best]) {
      Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        fv[worst] = fe;
      } else {
        simplex[worst] = reflected;
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      simplex[worst] = reflected;
      fv[worst] = fr;
    } else {
      Eigen::VectorXd contracted = centroid + 0.5 * (simplex[worst] - centroid);
      double fc = f(contracted);
      if (fc < fv[worst]) {
        simplex[worst] = contracted;
        fv[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
          fv[i] = f(simplex[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  res.x = simplex[best];
  res.value = fv[best];
  res.evaluations = evals;
  return res;
}

}  // namespace degpath
