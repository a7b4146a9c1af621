#include "degpath/reliability.hpp"

#include <algorithm>
#include <cmath>

#include "degpath/csv.hpp"
#include "degpath/diagnostics.hpp"
#include "degpath/errors.hpp"
#include "degpath/parallel.hpp"

namespace degpath {

void FailureCdfEstimate::write_csv(const std::string& path, const std::string& label) const {
  csv::Writer w(path);
  if (label.empty())
    w.row({"time_days", "lower", "median", "upper"});
  else
    w.row({"label", "time_days", "lower", "median", "upper"});
  for (std::size_t k = 0; k < grid_days.size(); ++k) {
    std::vector<std::string> cells;
    if (!label.empty()) cells.push_back(label);
    cells.push_back(csv::format_double(grid_days[k]));
    cells.push_back(csv::format_double(lower[k]));
    cells.push_back(csv::format_double(median[k]));
    cells.push_back(csv::format_double(upper[k]));
    w.row(cells);
  }
}

namespace {

// First day (1-based) at which any DC path crosses its threshold, or 0 when
// censored. Paths use daily exposure increments from the simulated covariate
// matrix (row t = day t+1).
double first_crossing_day(const Eigen::MatrixXd& covariate_path,
                          const PathParameterDraw& draw,
                          const std::vector<SplineBasis>& bases,
                          const FailureThresholds& thresholds,
                          const Eigen::VectorXd& w) {
  const int horizon = static_cast<int>(covariate_path.rows());
  const int num_dcs = static_cast<int>(draw.alpha.size());
  const int num_cov = static_cast<int>(bases.size());
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(num_dcs);
  double local[16];
  for (int t = 0; t < horizon; ++t) {
    for (int m = 0; m < num_cov; ++m) {
      // Future covariates may leave the fitted range; clamp to the basis edge.
      int first = bases[m].eval_local(covariate_path(t, m),
                                      std::span<double>(local, bases[m].degree() + 1),
                                      /*clamp=*/true);
      for (int j = 0; j < num_dcs; ++j) {
        const Eigen::VectorXd& beta = draw.beta[j][m];
        double f = 0.0;
        for (int k = 0; k <= bases[m].degree(); ++k) f += local[k] * beta[first + k];
        tau[j] += f;  // daily recording: time increment is one day
      }
    }
    for (int j = 0; j < num_dcs; ++j) {
      double d = degradation_mean(tau[j], draw.alpha[j], draw.gamma[j], w[j]);
      if (d <= thresholds.value[j]) return static_cast<double>(t + 1);
    }
  }
  return 0.0;
}

std::vector<double> step_cdf(const std::vector<double>& crossing_days,
                             const std::vector<double>& grid, long loops) {
  std::vector<double> sorted(crossing_days);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cdf(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), grid[k]);
    cdf[k] = static_cast<double>(it - sorted.begin()) / static_cast<double>(loops);
  }
  return cdf;
}

FailureCdfEstimate band_over_curves(const std::vector<std::vector<double>>& curves,
                                    const std::vector<double>& grid) {
  FailureCdfEstimate est;
  est.grid_days = grid;
  est.lower.resize(grid.size());
  est.median.resize(grid.size());
  est.upper.resize(grid.size());
  std::vector<double> column(curves.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t c = 0; c < curves.size(); ++c) column[c] = curves[c][k];
    est.lower[k] = quantile(column, 0.025);
    est.median[k] = quantile(column, 0.5);
    est.upper[k] = quantile(column, 0.975);
  }
  return est;
}

}  // namespace

OneDrawResult failure_time_one_draw(const PathParameterDraw& draw,
                                    const CovariateProcessModel& covariates,
                                    const std::vector<SplineBasis>& bases,
                                    const FailureThresholds& thresholds,
                                    const std::vector<double>& grid_days,
                                    const ReliabilityOptions& options, Rng& rng) {
  if (options.inner_loops < 1) throw ConfigError("inner loop count B must be >= 1");
  if (grid_days.empty()) throw ConfigError("empty evaluation grid");
  if (thresholds.value.size() != draw.alpha.size())
    throw ConfigError("one threshold per DC required");
  const double horizon =
      options.horizon_days > 0.0 ? options.horizon_days : 2.0 * grid_days.back();
  const int horizon_days = static_cast<int>(std::ceil(horizon));
  const int num_dcs = static_cast<int>(draw.alpha.size());

  Eigen::MatrixXd shared_path;
  if (options.shared_covariates)
    shared_path = simulate_process(covariates, horizon_days, rng);

  OneDrawResult out;
  std::vector<double> crossings;
  crossings.reserve(options.inner_loops);
  for (int b = 0; b < options.inner_loops; ++b) {
    Eigen::MatrixXd path = options.shared_covariates
                               ? shared_path
                               : simulate_process(covariates, horizon_days, rng);
    Eigen::VectorXd w = draw.sigma_chol * rng.normal_vector(num_dcs);
    double day = first_crossing_day(path, draw, bases, thresholds, w);
    if (day > 0.0)
      crossings.push_back(day);
    else
      ++out.censored;
  }
  out.cdf = step_cdf(crossings, grid_days, options.inner_loops);
  return out;
}

FailureCdfEstimate estimate_failure_cdf(const std::vector<PathParameterDraw>& posterior,
                                        const CovariateProcessModel& covariates,
                                        const std::vector<SplineBasis>& bases,
                                        const FailureThresholds& thresholds,
                                        const std::vector<double>& grid_days,
                                        const ReliabilityOptions& options,
                                        std::uint64_t seed) {
  if (posterior.empty()) throw ConfigError("no posterior draws given");
  std::vector<std::vector<double>> curves(posterior.size());
  parallel_for(posterior.size(), options.threads, [&](std::size_t d) {
    Rng rng = Rng::stream(seed, 0x7e11ab111e5ULL, d);
    curves[d] =
        failure_time_one_draw(posterior[d], covariates, bases, thresholds, grid_days,
                              options, rng)
            .cdf;
  });
  FailureCdfEstimate est = band_over_curves(curves, grid_days);
  est.posterior_draws = static_cast<long>(posterior.size());
  est.inner_loops = options.inner_loops;
  return est;
}

FailureCdfEstimate cdf_with_covproc_uncertainty(
    const std::vector<PathParameterDraw>& posterior,
    const std::vector<CovariateProcessModel>& bootstrap_models,
    const std::vector<SplineBasis>& bases, const FailureThresholds& thresholds,
    const std::vector<double>& grid_days, const ReliabilityOptions& options,
    std::uint64_t seed) {
  if (posterior.empty()) throw ConfigError("no posterior draws given");
  if (bootstrap_models.empty()) throw ConfigError("no bootstrap covariate models given");
  const std::size_t total = bootstrap_models.size() * posterior.size();
  std::vector<std::vector<double>> curves(total);
  parallel_for(total, options.threads, [&](std::size_t idx) {
    const std::size_t bm = idx / posterior.size();
    const std::size_t d = idx % posterior.size();
    // Same stream family as estimate_failure_cdf so a singleton bootstrap
    // set reproduces it exactly.
    Rng rng = Rng::stream(seed, 0x7e11ab111e5ULL + bm, d);
    curves[idx] = failure_time_one_draw(posterior[d], bootstrap_models[bm], bases,
                                        thresholds, grid_days, options, rng)
                      .cdf;
  });
  FailureCdfEstimate est = band_over_curves(curves, grid_days);
  est.posterior_draws = static_cast<long>(posterior.size());
  est.inner_loops = options.inner_loops;
  est.bootstrap_draws = static_cast<long>(bootstrap_models.size());
  return est;
}

}  // namespace degpath
