#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "degpath/covproc.hpp"
#include "degpath/pathmodel.hpp"
#include "degpath/splines.hpp"

namespace degpath {

/// Per-DC soft-failure thresholds (negative under the decreasing-path
/// convention). A DC fails at the first day its mean path drops to or below
/// its threshold; the system fails at the first DC failure.
struct FailureThresholds {
  Eigen::VectorXd value;  // one per DC
};

struct FailureCdfEstimate {
  std::vector<double> grid_days;
  std::vector<double> lower;
  std::vector<double> median;
  std::vector<double> upper;
  long posterior_draws = 0;
  long inner_loops = 0;  // B
  long bootstrap_draws = 0;

  void write_csv(const std::string& path, const std::string& label = "") const;
};

/// Fixed parameters of one posterior draw, as consumed by the Monte Carlo
/// failure-time estimator.
struct PathParameterDraw {
  Eigen::VectorXd alpha;                           // J
  Eigen::VectorXd gamma;                           // J
  std::vector<std::vector<Eigen::VectorXd>> beta;  // [J][M]
  Eigen::MatrixXd sigma_chol;                      // lower factor of Sigma* (J x J)
};

struct ReliabilityOptions {
  int inner_loops = 1000;       // B
  double horizon_days = 0.0;    // 0 = 2x the last grid day
  bool shared_covariates = false;  // reuse one covariate future across the B loops
  int threads = 1;
};

/// One Monte Carlo pass (B loops): simulate a covariate future, draw random
/// effects from Sigma*, scan the daily paths for the first threshold
/// crossing, and average the indicator over loops. Runs with no crossing
/// inside the horizon count as censored and contribute zero everywhere.
struct OneDrawResult {
  std::vector<double> cdf;  // on the requested grid
  long censored = 0;
};
OneDrawResult failure_time_one_draw(const PathParameterDraw& draw,
                                    const CovariateProcessModel& covariates,
                                    const std::vector<SplineBasis>& bases,
                                    const FailureThresholds& thresholds,
                                    const std::vector<double>& grid_days,
                                    const ReliabilityOptions& options, Rng& rng);

/// Pointwise median and central 95% band over the per-posterior-draw curves.
FailureCdfEstimate estimate_failure_cdf(const std::vector<PathParameterDraw>& posterior,
                                        const CovariateProcessModel& covariates,
                                        const std::vector<SplineBasis>& bases,
                                        const FailureThresholds& thresholds,
                                        const std::vector<double>& grid_days,
                                        const ReliabilityOptions& options,
                                        std::uint64_t seed);

/// Same quantiles taken over the pooled bootstrap x posterior curve set, so
/// the band carries both posterior and covariate-model uncertainty.
FailureCdfEstimate cdf_with_covproc_uncertainty(
    const std::vector<PathParameterDraw>& posterior,
    const std::vector<CovariateProcessModel>& bootstrap_models,
    const std::vector<SplineBasis>& bases, const FailureThresholds& thresholds,
    const std::vector<double>& grid_days, const ReliabilityOptions& options,
    std::uint64_t seed);

}  // namespace degpath
