#pragma once

#include <vector>

#include <Eigen/Dense>

#include "degpath/sampler.hpp"

namespace degpath {

struct ParamSummary {
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
};

/// Type-7 (linear interpolation) quantile of an unsorted sample.
double quantile(std::vector<double> values, double p);

/// Split-half potential scale reduction per parameter. Constant parameters
/// report exactly 1.
Eigen::VectorXd split_rhat(const PosteriorSamples& samples);

/// Effective sample size per parameter from split-chain autocorrelations with
/// Geyer initial-monotone truncation; capped at the total draw count.
Eigen::VectorXd effective_sample_size(const PosteriorSamples& samples);

/// Median, SD and central 95% interval per parameter over all chains.
std::vector<ParamSummary> summarize(const PosteriorSamples& samples);

}  // namespace degpath
