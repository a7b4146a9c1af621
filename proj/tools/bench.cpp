// Timing comparison of the serial reference paths against the OpenMP ones.
// Workloads match how the library is used: parallel chains, the reliability
// Monte Carlo, and raw gradient throughput on a synthetic fit.

#include <chrono>
#include <cstdio>

#include <Eigen/Dense>

#include "degpath/fit.hpp"
#include "degpath/parallel.hpp"
#include "degpath/posterior.hpp"
#include "degpath/reliability.hpp"
#include "degpath/sampler.hpp"
#include "degpath/simstudy.hpp"

using namespace degpath;

namespace {

double seconds(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Posterior make_posterior(const DegradationDataset& data) {
  ModelConfig mc;
  mc.q = {12, 12};
  mc.shapes = {ShapeKind::increasing, ShapeKind::convex};
  mc.prior = PriorConfig::defaults(2);
  std::vector<SplineBasis> bases;
  for (int m = 0; m < 2; ++m) {
    auto [lo, hi] = data.covariate_range(m);
    bases.emplace_back(lo - 0.01 * (hi - lo), hi + 0.01 * (hi - lo), 12, 3);
  }
  return Posterior(data, std::move(bases), mc);
}

}  // namespace

int main() {
  const int max_threads = hardware_threads();
  std::printf("hardware threads: %d\n\n", max_threads);

  ScenarioConfig sc;
  sc.num_specimens = 10;
  sc.measurements = 10;
  DegradationDataset data = generate_dataset(sc, 99);
  Posterior post = make_posterior(data);

  // Gradient throughput (single-threaded kernel).
  {
    Rng rng(7);
    Eigen::VectorXd v = post.initial_point(rng);
    Eigen::VectorXd g;
    const int reps = 2000;
    double dt = seconds([&] {
      double acc = 0.0;
      for (int r = 0; r < reps; ++r) acc += post.log_density(v, &g);
      if (acc == 12345.0) std::printf(".");
    });
    std::printf("log-posterior gradient (dim %d): %.1f us/eval\n", post.dim(),
                1e6 * dt / reps);
  }

  // Multi-chain sampling, serial vs parallel chains.
  {
    LogDensityFn target = [&](const Eigen::VectorXd& v, Eigen::VectorXd* g) {
      return post.log_density(v, g);
    };
    InitFn init = [&](int, Rng& rng) { return post.initial_point(rng); };
    SamplerConfig cfg;
    cfg.chains = 4;
    cfg.iterations = 150;
    cfg.warmup = 75;
    cfg.seed = 11;
    cfg.threads = 1;
    double t_serial = seconds([&] { sample(target, post.dim(), cfg, init); });
    cfg.threads = max_threads;
    double t_par = seconds([&] { sample(target, post.dim(), cfg, init); });
    std::printf("4-chain sampling: serial %.2fs, %d threads %.2fs (x%.2f)\n", t_serial,
                max_threads, t_par, t_serial / t_par);
  }

  // Reliability Monte Carlo over posterior draws.
  {
    PathParameterDraw draw;
    draw.alpha = sc.alpha;
    draw.gamma = sc.gamma;
    draw.beta.assign(2, std::vector<Eigen::VectorXd>(2));
    const auto& bases = post.bases();
    for (int m = 0; m < 2; ++m) {
      std::vector<double> f(12);
      auto xs = bases[m].interpolation_points();
      for (int k = 0; k < 12; ++k) f[k] = ScenarioConfig::effect_truth(m, xs[k]);
      Eigen::VectorXd beta = bases[m].interpolate(f);
      for (int j = 0; j < 2; ++j) draw.beta[j][m] = beta;
    }
    draw.sigma_chol = Eigen::LLT<Eigen::MatrixXd>(sc.random_effect_cov()).matrixL();
    std::vector<PathParameterDraw> draws(64, draw);
    FailureThresholds th;
    th.value = sc.thresholds;
    std::vector<double> grid;
    for (double d = 1; d <= 150; ++d) grid.push_back(d);
    ReliabilityOptions ro;
    ro.inner_loops = 200;
    ro.threads = 1;
    CovariateProcessModel cov = ScenarioConfig::covariate_truth();
    double t_serial = seconds(
        [&] { estimate_failure_cdf(draws, cov, bases, th, grid, ro, 5); });
    ro.threads = max_threads;
    double t_par = seconds(
        [&] { estimate_failure_cdf(draws, cov, bases, th, grid, ro, 5); });
    std::printf("reliability MC (64 draws x B=200): serial %.2fs, %d threads %.2fs (x%.2f)\n",
                t_serial, max_threads, t_par, t_serial / t_par);
  }
  return 0;
}
