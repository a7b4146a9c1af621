#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "degpath/rng.hpp"

namespace degpath {

struct SamplerConfig {
  int chains = 4;
  int iterations = 1000;  // per chain, warmup included
  int warmup = 200;
  double target_accept = 0.8;
  int max_depth = 10;
  std::uint64_t seed = 1;
  bool fixed_hmc = false;  // fixed-length HMC fallback for debugging
  int hmc_steps = 32;
  int threads = 1;  // chains run in parallel when > 1
  int init_retries = 100;

  void validate() const;
};

/// Post-warmup draws, one matrix per chain (kept iterations x dim), with
/// per-iteration divergence flags and adaptation outcomes.
struct PosteriorSamples {
  std::vector<std::string> names;
  std::vector<Eigen::MatrixXd> draws;
  std::vector<std::vector<std::uint8_t>> divergent;
  std::vector<double> step_size;
  std::vector<double> mean_accept;

  int num_chains() const { return static_cast<int>(draws.size()); }
  int kept() const { return draws.empty() ? 0 : static_cast<int>(draws[0].rows()); }
  int dim() const { return draws.empty() ? 0 : static_cast<int>(draws[0].cols()); }
  long total_divergences() const;

  /// All chains stacked in chain order.
  Eigen::MatrixXd stacked() const;

  /// Map every draw through fn (e.g. to the natural scale).
  PosteriorSamples transformed(const std::vector<std::string>& new_names,
                               const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn) const;
};

/// Log density with optional gradient output; must return -inf (not throw)
/// for invalid states.
using LogDensityFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>;

/// Per-chain initial point; rng is the chain's own stream.
using InitFn = std::function<Eigen::VectorXd(int chain, Rng& rng)>;

/// Multi-chain gradient-based MCMC: multiplicative trajectory doubling with a
/// U-turn stopping rule and multinomial selection, dual-averaging step-size
/// adaptation toward the target acceptance statistic, and diagonal mass
/// estimation in the middle warmup window. Chains are independent streams of
/// the master seed and results are merged by chain index, so output is
/// identical for any thread count.
PosteriorSamples sample(const LogDensityFn& target, int dim, const SamplerConfig& config,
                        const InitFn& init = InitFn());

}  // namespace degpath
