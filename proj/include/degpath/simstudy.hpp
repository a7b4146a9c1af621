#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "degpath/covproc.hpp"
#include "degpath/dataset.hpp"
#include "degpath/fit.hpp"

namespace degpath {

/// One cell of the simulation design: two DCs, two covariates (one increasing
/// effect, one convex), daily covariate recording over the exposure window.
struct ScenarioConfig {
  int num_specimens = 20;   // I
  int measurements = 20;    // n_i, equally spaced over the exposure window
  double rho = 0.5;         // random-effect correlation
  int exposure_days = 300;
  Eigen::Vector2d alpha{0.3, 0.5};
  Eigen::Vector2d gamma{1.0, 1.1};
  double sigma = 0.01;
  Eigen::Vector2d sigma_w{0.1, 0.1};
  Eigen::Vector2d thresholds{-0.2, -0.45};

  void validate() const;
  /// Seasonal + iid-noise covariate truth for both simulated covariates.
  static CovariateProcessModel covariate_truth();
  /// True effect functions: quadratic increasing / quadratic convex.
  static double effect_truth(int covariate, double x);
  Eigen::MatrixXd random_effect_cov() const;
};

struct GroundTruth {
  Eigen::MatrixXd w;                  // I x 2
  std::vector<Eigen::MatrixXd> tau;   // per specimen: n x J total exposures
  std::vector<Eigen::MatrixXd> mean;  // per specimen: n x J noise-free paths
};

/// Fully seeded dataset generation; (scenario, seed) determines every value.
DegradationDataset generate_dataset(const ScenarioConfig& scenario, std::uint64_t seed,
                                    GroundTruth* truth = nullptr);

/// Pointwise RMSE of the curve set against the truth, integrated over the
/// grid by the trapezoid rule and normalized by the grid width.
double avg_rmse(const std::vector<std::vector<double>>& estimates,
                const std::vector<double>& truth, const std::vector<double>& grid);

/// Brute-force system failure CDF under the true parameters and covariate
/// law (no splines involved).
std::vector<double> true_failure_cdf(const ScenarioConfig& scenario,
                                     const std::vector<double>& grid, long replications,
                                     std::uint64_t seed, int threads = 1);

struct StudyOptions {
  int replications = 50;
  std::uint64_t seed = 1;
  int threads = 1;
  SamplerConfig sampler;        // per-replicate chains (chains run serially inside)
  int basis_size = 20;          // Q for both covariates
  bool fit_correlated = true;
  bool fit_independent = false;
  // Reliability comparison settings.
  bool reliability = false;
  int reliability_draws = 100;  // posterior draws kept per curve
  int reliability_loops = 200;  // B
  double reliability_max_day = 150.0;
  long truth_cdf_replications = 100000;
  int effect_grid_points = 41;
};

struct ParamStat {
  std::string name;
  double truth = 0.0;
  double mean_of_medians = 0.0;
  double bias = 0.0;
  double sd = 0.0;
  double cp = 0.0;  // coverage of the 95% CI across replicates
};

struct EffectMetric {
  int dc = 0, covariate = 0;
  ShapeKind shape = ShapeKind::unconstrained;
  double avg_rmse_value = 0.0;
  std::vector<double> cp_curve;  // per grid point
};

struct ScenarioResult {
  ScenarioConfig scenario;
  int replicates_done = 0;
  int replicates_failed = 0;
  std::vector<ParamStat> params;
  std::vector<std::vector<double>> effect_grids;  // per covariate
  std::vector<EffectMetric> effects;
  std::vector<double> reliability_grid;
  std::vector<double> truth_cdf;
  std::vector<double> rel_rmse_correlated;   // per replicate
  std::vector<double> rel_rmse_independent;  // per replicate
  std::vector<double> rel_cp_correlated;     // per grid point
  std::vector<double> rel_cp_independent;    // per grid point
  std::vector<double> scp_magnitude;         // per replicate, convex covariate
  Eigen::Vector2d asymptote_cp{0.0, 0.0};    // pooled over replicates x specimens
};

struct StudyReport {
  std::vector<ScenarioResult> scenarios;
  void write_csv(const std::string& directory) const;
};

StudyReport run_study(const std::vector<ScenarioConfig>& scenarios,
                      const StudyOptions& options);

}  // namespace degpath
