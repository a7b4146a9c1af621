#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "degpath/dataset.hpp"
#include "degpath/pathmodel.hpp"
#include "degpath/priors.hpp"
#include "degpath/rng.hpp"
#include "degpath/splines.hpp"

namespace degpath {

/// Structural description of one fit: basis sizes, shape assignment per
/// covariate, correlated vs independent random effects, and the prior
/// hyperparameters.
struct ModelConfig {
  std::vector<int> q;             // basis size per covariate
  int degree = 3;
  std::vector<ShapeKind> shapes;  // per covariate
  bool correlated = true;
  PriorConfig prior;
};

/// Index map for the flat unconstrained parameter vector. Block order:
/// log alpha (J), log gamma (J), per (dc, covariate) coefficient blocks of
/// size Q_m (log beta_1 followed by Q_m - 1 increment parameters), sigma_l,
/// log lambda2 (M), log delta (one per convex covariate), log sigma_w (J),
/// atanh canonical partial correlations (J(J-1)/2, correlated model only),
/// then random effects w (specimen-major).
struct ParamLayout {
  int num_dcs = 0, num_covariates = 0, num_specimens = 0;
  std::vector<int> q;
  std::vector<ShapeKind> shapes;
  bool correlated = true;

  int off_log_alpha = 0;
  int off_log_gamma = 0;
  std::vector<std::vector<int>> off_coef;  // [j][m]
  int off_sigma_l = 0;
  int off_log_lambda2 = 0;
  std::vector<int> off_log_delta;  // per covariate, -1 unless convex
  int off_log_sigma_w = 0;
  int off_corr = -1;
  int off_w = 0;
  int dim = 0;

  static ParamLayout make(int num_dcs, int num_covariates, int num_specimens,
                          const std::vector<int>& q, const std::vector<ShapeKind>& shapes,
                          bool correlated);

  int w_index(int i, int j) const { return off_w + i * num_dcs + j; }
  int corr_count() const { return correlated ? num_dcs * (num_dcs - 1) / 2 : 0; }
};

/// Natural-scale parameters plus the sampled hyperparameters.
struct UnpackedState {
  ModelState state;
  Eigen::VectorXd lambda2;  // per covariate
  Eigen::VectorXd delta;    // per covariate; meaningful for convex shapes only
};

/// Joint log posterior of the hierarchy over the unconstrained vector, with
/// an exact hand-coded adjoint gradient. Immutable after construction; safe
/// for concurrent evaluation.
class Posterior {
 public:
  Posterior(const DegradationDataset& data, std::vector<SplineBasis> bases,
            ModelConfig config);

  /// Model with no observations: priors and transform Jacobians only.
  static Posterior prior_only(int num_dcs, int num_specimens,
                              std::vector<SplineBasis> bases, ModelConfig config);

  const ParamLayout& layout() const { return layout_; }
  int dim() const { return layout_.dim; }
  const std::vector<SplineBasis>& bases() const { return bases_; }
  const ModelConfig& config() const { return config_; }

  /// Log density (likelihood + random effects + priors + Jacobians). When
  /// grad is non-null it is resized and filled. Non-finite configurations
  /// return -infinity with a zero gradient.
  double log_density(const Eigen::VectorXd& v, Eigen::VectorXd* grad = nullptr) const;

  UnpackedState unpack(const Eigen::VectorXd& v) const;
  Eigen::VectorXd pack(const UnpackedState& u) const;

  /// Uniform[-1,1] start except random effects at zero.
  Eigen::VectorXd initial_point(Rng& rng) const;

  /// Natural-scale reporting: names and values, one entry per alpha_j,
  /// gamma_j, beta_jmq, sigma, lambda2_m, delta_m (convex), sigma_w_j,
  /// rho_jj' (zero in the independent model), and w_ij.
  std::vector<std::string> constrained_names() const;
  Eigen::VectorXd constrained_vector(const Eigen::VectorXd& v) const;

 private:
  Posterior() = default;
  void finish_setup();

  ModelConfig config_;
  std::vector<SplineBasis> bases_;
  ParamLayout layout_;
  long num_obs_ = 0;

  // Per specimen: y (n_i x J) and one cumulative-effect matrix per covariate.
  std::vector<Eigen::MatrixXd> y_;
  std::vector<std::vector<Eigen::MatrixXd>> g_;
};

}  // namespace degpath
