#pragma once

#include <vector>

#include <Eigen/Dense>

namespace degpath {

/// Shape assumption for one covariate's effect function, shared across DCs.
enum class ShapeKind { increasing, convex, unconstrained };

ShapeKind shape_from_string(const std::string& s);
const char* to_string(ShapeKind k);

/// Hyperparameters of the prior hierarchy.
struct PriorConfig {
  std::vector<double> ig_a;      // per covariate, inverse-gamma shape (default 1)
  std::vector<double> ig_b;      // per covariate, inverse-gamma scale (default 0.005)
  double eta = 0.05;             // half-normal scale for the convexity penalty width
  double zeta = 1.0;             // LKJ shape
  double cauchy_scale = 1.0;     // half-Cauchy scale for random-effect SDs
  // Post-diagnostic informative options; zero/empty keeps the flat defaults.
  double beta1_halfnormal_scale = 0.0;  // half-normal prior on each beta_jm1
  std::vector<std::pair<double, double>> alpha_bounds;
  std::vector<std::pair<double, double>> gamma_bounds;
  std::vector<std::pair<double, double>> sigma_l_bounds;  // on log sigma, one pair

  static PriorConfig defaults(int num_covariates);
  void validate(int num_covariates, int num_dcs) const;
};

namespace priors {

/// Independent N(0, lambda2) on each increment: the random-walk coefficient
/// prior. Full log density.
double log_rw(const Eigen::VectorXd& u, double lambda2);

/// Half-normal N_trunc(0, lambda2) with lower bound 0 on each increment.
/// Throws on negative entries.
double log_truncnorm(const Eigen::VectorXd& u, double lambda2);

/// Shape-constrained penalty on the coefficient vector: for each second
/// difference d_q = beta_q - 2 beta_{q-1} + beta_{q-2},
/// adds -d_q^2/(2 delta^2) when d_q < 0. Zero on the convex cone.
double log_scp(const Eigen::VectorXd& beta, double delta);

double log_invgamma(double x, double a, double b);

double log_halfcauchy(double x, double scale);

/// Half-normal on x >= 0 with scale parameter (SD of the parent normal).
double log_halfnormal(double x, double scale);

/// LKJ log density on the lower Cholesky factor of a correlation matrix,
/// up to an additive constant: sum_k (J - k + 2 zeta - 2) log L_kk (1-based k).
double log_lkj_chol(const Eigen::MatrixXd& corr_chol, double zeta);

}  // namespace priors
}  // namespace degpath
