#pragma once

#include <vector>

#include <Eigen/Dense>

#include "degpath/dataset.hpp"
#include "degpath/splines.hpp"

namespace degpath {

/// Complete parameter state of the path model on the natural scale.
struct ModelState {
  Eigen::VectorXd alpha;                            // J, > 0
  Eigen::VectorXd gamma;                            // J, > 0
  std::vector<std::vector<Eigen::VectorXd>> beta;   // [J][M], each length Q_m
  double sigma = 0.0;                               // measurement error SD
  Eigen::VectorXd sigma_w;                          // J random-effect SDs
  Eigen::MatrixXd corr_chol;                        // J x J lower factor of Omega
  Eigen::MatrixXd w;                                // I x J random effects

  int num_dcs() const { return static_cast<int>(alpha.size()); }

  /// Sigma = D Omega D^T with D = diag(sigma_w).
  Eigen::MatrixXd random_effect_cov() const;
  /// Lower Cholesky factor of Sigma.
  Eigen::MatrixXd random_effect_chol() const;
};

/// tau = sum_m G_m(t_k)^T beta_m: total discrete exposure at measurement k.
double total_cumulative_effect(const std::vector<CumulativeEffect>& g_per_covariate,
                               const std::vector<Eigen::VectorXd>& beta_per_covariate,
                               int k);

/// Mean path -alpha e^w / (1 + tau^{-1/gamma}), with D(tau) = 0 for tau <= 0.
/// Computed as -alpha e^w sigmoid(log(tau)/gamma), which saturates to the
/// asymptote -alpha e^w without overflow for large tau.
double degradation_mean(double tau, double alpha, double gamma, double w);

/// Fitted means for every (specimen, dc, measurement); row layout matches the
/// specimen's y matrix.
std::vector<Eigen::MatrixXd> predict_paths(const ModelState& state,
                                           const DegradationDataset& data,
                                           const std::vector<SplineBasis>& bases,
                                           bool clamp_covariates = false);

}  // namespace degpath
