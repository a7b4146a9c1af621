#include "degpath/priors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "degpath/errors.hpp"

namespace degpath {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

ShapeKind shape_from_string(const std::string& s) {
  if (s == "increasing") return ShapeKind::increasing;
  if (s == "convex") return ShapeKind::convex;
  if (s == "unconstrained") return ShapeKind::unconstrained;
  throw ConfigError("unknown shape '" + s + "' (use increasing|convex|unconstrained)");
}

const char* to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::increasing: return "increasing";
    case ShapeKind::convex: return "convex";
    default: return "unconstrained";
  }
}

PriorConfig PriorConfig::defaults(int num_covariates) {
  PriorConfig c;
  c.ig_a.assign(num_covariates, 1.0);
  c.ig_b.assign(num_covariates, 0.005);
  return c;
}

void PriorConfig::validate(int num_covariates, int num_dcs) const {
  auto positive = [](const std::vector<double>& v) {
    for (double x : v)
      if (!(x > 0.0)) return false;
    return true;
  };
  if (static_cast<int>(ig_a.size()) != num_covariates ||
      static_cast<int>(ig_b.size()) != num_covariates)
    throw ConfigError("inverse-gamma hyperparameters need one entry per covariate");
  if (!positive(ig_a) || !positive(ig_b))
    throw ConfigError("inverse-gamma hyperparameters must be positive");
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(zeta >= 1.0)) throw ConfigError("zeta >= 1 required");
  if (!(cauchy_scale > 0.0)) throw ConfigError("cauchy scale must be positive");
  auto check_bounds = [&](const std::vector<std::pair<double, double>>& b, const char* name) {
    if (b.empty()) return;
    if (static_cast<int>(b.size()) != num_dcs)
      throw ConfigError(std::string(name) + " bounds need one pair per DC");
    for (auto [lo, hi] : b)
      if (!(lo < hi) || !(lo > 0.0))
        throw ConfigError(std::string(name) + " bounds must satisfy 0 < lower < upper");
  };
  check_bounds(alpha_bounds, "alpha");
  check_bounds(gamma_bounds, "gamma");
  if (!(beta1_halfnormal_scale >= 0.0))
    throw ConfigError("beta1 half-normal scale must be nonnegative");
  if (!sigma_l_bounds.empty() &&
      (sigma_l_bounds.size() != 1 || !(sigma_l_bounds[0].first < sigma_l_bounds[0].second)))
    throw ConfigError("sigma_l bounds must be a single (lower, upper) pair");
}

namespace priors {

double log_rw(const Eigen::VectorXd& u, double lambda2) {
  if (!(lambda2 > 0.0)) throw std::domain_error("lambda2 must be positive");
  const double n = static_cast<double>(u.size());
  return -0.5 * n * (kLog2Pi + std::log(lambda2)) - u.squaredNorm() / (2.0 * lambda2);
}

double log_truncnorm(const Eigen::VectorXd& u, double lambda2) {
  if (!(lambda2 > 0.0)) throw std::domain_error("lambda2 must be positive");
  if ((u.array() < 0.0).any())
    throw std::domain_error("truncated-normal increments must be nonnegative");
  const double n = static_cast<double>(u.size());
  return n * (M_LN2 - 0.5 * (kLog2Pi + std::log(lambda2))) -
         u.squaredNorm() / (2.0 * lambda2);
}

double log_scp(const Eigen::VectorXd& beta, double delta) {
  if (beta.size() < 3) throw std::invalid_argument("SCP needs at least 3 coefficients");
  if (delta == 0.0) throw std::domain_error("delta must be nonzero");
  double acc = 0.0;
  for (Eigen::Index q = 2; q < beta.size(); ++q) {
    double d = beta[q] - 2.0 * beta[q - 1] + beta[q - 2];
    if (d < 0.0) acc -= d * d;
  }
  return acc / (2.0 * delta * delta);
}

double log_invgamma(double x, double a, double b) {
  if (!(x > 0.0) || !(a > 0.0) || !(b > 0.0))
    throw std::domain_error("inverse-gamma requires positive x, a, b");
  return a * std::log(b) - std::lgamma(a) - (a + 1.0) * std::log(x) - b / x;
}

double log_halfcauchy(double x, double scale) {
  if (!(x >= 0.0) || !(scale > 0.0))
    throw std::domain_error("half-Cauchy requires x >= 0 and positive scale");
  double r = x / scale;
  return M_LN2 - std::log(M_PI) - std::log(scale) - std::log1p(r * r);
}

double log_halfnormal(double x, double scale) {
  if (!(x >= 0.0) || !(scale > 0.0))
    throw std::domain_error("half-normal requires x >= 0 and positive scale");
  return M_LN2 - 0.5 * kLog2Pi - std::log(scale) - x * x / (2.0 * scale * scale);
}

double log_lkj_chol(const Eigen::MatrixXd& corr_chol, double zeta) {
  const Eigen::Index J = corr_chol.rows();
  if (corr_chol.cols() != J) throw std::invalid_argument("factor must be square");
  for (Eigen::Index i = 0; i < J; ++i) {
    double row2 = corr_chol.row(i).head(i + 1).squaredNorm();
    if (std::abs(row2 - 1.0) > 1e-8)
      throw std::domain_error("not a correlation-matrix Cholesky factor (unit rows required)");
  }
  double acc = 0.0;
  for (Eigen::Index k = 1; k < J; ++k)
    acc += (static_cast<double>(J - k - 1) + 2.0 * zeta - 2.0) * std::log(corr_chol(k, k));
  return acc;
}

}  // namespace priors
}  // namespace degpath
