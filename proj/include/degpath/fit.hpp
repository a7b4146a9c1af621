#pragma once

#include <memory>
#include <string>
#include <vector>

#include "degpath/dataset.hpp"
#include "degpath/diagnostics.hpp"
#include "degpath/posterior.hpp"
#include "degpath/reliability.hpp"
#include "degpath/sampler.hpp"

namespace degpath {

struct FitOptions {
  ModelConfig model;
  SamplerConfig sampler;
  double domain_pad = 0.01;  // basis domain padding, fraction of observed range
};

struct FitResult {
  std::shared_ptr<const Posterior> posterior;
  PosteriorSamples constrained;  // natural-scale draws, named columns
  std::vector<ParamSummary> summary;
  Eigen::VectorXd rhat;
  Eigen::VectorXd ess;

  const std::vector<SplineBasis>& bases() const { return posterior->bases(); }
  int column(const std::string& name) const;  // -1 when absent
};

/// Build per-covariate bases from the observed ranges, assemble the
/// posterior, run the chains, and transform draws to the natural scale.
FitResult fit_model(const DegradationDataset& data, const FitOptions& options);

/// Thin the stacked draws to at most max_draws equally spaced rows and
/// assemble the fixed-parameter draws used by the failure-time estimator.
std::vector<PathParameterDraw> extract_path_draws(const FitResult& fit, int max_draws);

/// Same assembly from a raw draw table (e.g. a persisted samples CSV).
std::vector<PathParameterDraw> path_draws_from_table(
    const std::vector<std::string>& names, const Eigen::MatrixXd& rows, int num_dcs,
    int num_covariates, const std::vector<int>& q, int max_draws);

/// Effect-function curve f_jm(x) per draw, reduced to pointwise median and
/// central 95% band on the grid.
struct EffectBand {
  std::vector<double> grid;
  std::vector<double> median, lower, upper;
};
EffectBand effect_band(const FitResult& fit, int dc, int covariate,
                       const std::vector<double>& grid);

}  // namespace degpath
