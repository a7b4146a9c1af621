#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "degpath/rng.hpp"

namespace degpath {

/// Seasonal shape of the noise-scale factor multiplying the VAR residual.
/// `offset` is 1 + upsilon (1 + sin(...)), `plain` is 1 + upsilon sin(...);
/// `none` leaves the residual unmodulated.
enum class Modulation { offset, plain, none };

Modulation modulation_from_string(const std::string& s);
const char* to_string(Modulation m);

struct SeasonalComponent {
  double mu = 0.0;           // level
  double kappa = 0.0;        // seasonal amplitude
  double phase = 0.0;        // days
  bool cosine = false;       // cos instead of sin for the mean wave
  double upsilon = 0.0;      // noise-modulation amplitude
  double noise_phase = 0.0;  // days
  Modulation modulation = Modulation::offset;

  double mean_at(double t) const;
  double noise_scale_at(double t) const;
};

/// Daily covariate process: per-covariate seasonal mean and heteroscedastic
/// scale, with VAR(2) dependence across covariates in the standardized
/// residuals. Period is fixed at 365 days.
struct CovariateProcessModel {
  std::vector<SeasonalComponent> seasonal;  // one per covariate
  Eigen::MatrixXd phi1, phi2;               // M x M
  Eigen::MatrixXd sigma_e;                  // innovation covariance, M x M
  // Residual state at the end of the fitted record, for conditional forecasts.
  Eigen::VectorXd tail_resid1;  // epsilon(T)
  Eigen::VectorXd tail_resid2;  // epsilon(T-1)
  double last_day = 0.0;

  int num_covariates() const { return static_cast<int>(seasonal.size()); }
  /// Spectral radius of the VAR(2) companion matrix.
  double companion_spectral_radius() const;
  bool stationary() const { return companion_spectral_radius() < 1.0; }

  std::string to_json() const;
  static CovariateProcessModel from_json(const std::string& text);
};

/// Fresh daily path for days 1..horizon; VAR residuals start from zero with
/// a burn-in when the model has autoregressive structure. Throws when the
/// VAR part is non-stationary.
Eigen::MatrixXd simulate_process(const CovariateProcessModel& model, int horizon_days,
                                 Rng& rng);

/// Daily path for days from_day..from_day+horizon-1, conditioned on the
/// model's stored tail residuals when from_day == last_day + 1.
Eigen::MatrixXd forecast(const CovariateProcessModel& model, double from_day,
                         int horizon_days, Rng& rng);

struct MeanFitOptions {
  int restarts = 10;
  std::uint64_t seed = 17;
  Modulation modulation = Modulation::offset;
  bool fit_modulation = true;  // false pins upsilon = 0 (unmodulated noise)
  bool cosine = false;
};

/// Step 1 of the two-step estimation: per-covariate Gaussian MLE of the
/// seasonal mean and noise-modulation parameters under a working
/// independence assumption. `days` are the observation days of `values`.
SeasonalComponent fit_mean(const std::vector<double>& days,
                           const std::vector<double>& values,
                           const MeanFitOptions& options = {});

/// Step 2: multivariate least squares VAR(2) on the standardized residual
/// matrix (rows are days). Requires more rows than 2M + 2.
void fit_var2(const Eigen::MatrixXd& residuals, Eigen::MatrixXd& phi1,
              Eigen::MatrixXd& phi2, Eigen::MatrixXd& sigma_e);

struct CovariateFitOptions {
  std::vector<MeanFitOptions> mean;  // one per covariate; default-filled
};

/// Full two-step fit on a daily record (rows are consecutive days starting at
/// `first_day`). Covariates with gaps must be interpolated by the caller.
CovariateProcessModel fit_covariate_process(const Eigen::MatrixXd& daily_values,
                                            double first_day,
                                            const CovariateFitOptions& options = {});

struct BootstrapResult {
  std::vector<CovariateProcessModel> draws;
  int failed = 0;
};

/// Parametric bootstrap: resimulate innovations from the fitted model,
/// rebuild the series, refit both steps. Failed refits are skipped and
/// counted.
BootstrapResult bootstrap_covariate_process(const CovariateProcessModel& fitted,
                                            const Eigen::MatrixXd& daily_values,
                                            double first_day, int n_boot,
                                            std::uint64_t seed, int threads = 1,
                                            const CovariateFitOptions& options = {});

}  // namespace degpath
