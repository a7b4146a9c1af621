#include "degpath/simstudy.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>

#include "degpath/csv.hpp"
#include "degpath/errors.hpp"
#include "degpath/parallel.hpp"
#include "degpath/priors.hpp"

namespace degpath {

void ScenarioConfig::validate() const {
  if (num_specimens < 1 || measurements < 1 || exposure_days < 2)
    throw ConfigError("scenario dimensions must be positive");
  if (!(std::abs(rho) < 1.0)) throw ConfigError("|rho| must be below 1");
  if (!(sigma >= 0.0) || !(sigma_w.minCoeff() >= 0.0))
    throw ConfigError("scenario SDs must be nonnegative");
  if (!(alpha.minCoeff() > 0.0) || !(gamma.minCoeff() > 0.0))
    throw ConfigError("alpha and gamma must be positive");
}

CovariateProcessModel ScenarioConfig::covariate_truth() {
  CovariateProcessModel model;
  SeasonalComponent x1;
  x1.mu = 25.0;
  x1.kappa = 16.0;
  x1.phase = 103.0;
  x1.upsilon = 0.31;
  x1.noise_phase = 33.0;
  x1.modulation = Modulation::plain;
  SeasonalComponent x2 = x1;
  x2.kappa = 18.0;
  x2.cosine = true;
  model.seasonal = {x1, x2};
  model.phi1 = Eigen::MatrixXd::Zero(2, 2);
  model.phi2 = Eigen::MatrixXd::Zero(2, 2);
  model.sigma_e = 4.0 * Eigen::MatrixXd::Identity(2, 2);
  return model;
}

double ScenarioConfig::effect_truth(int covariate, double x) {
  return covariate == 0 ? x * x / 1e3 + 0.01 : (x - 30.0) * (x - 30.0) / 1.5e4 + 0.01;
}

namespace {
// LLT of a PSD matrix that may be exactly singular (zero SDs allowed).
Eigen::MatrixXd psd_chol(const Eigen::MatrixXd& cov) {
  if (cov.norm() == 0.0) return Eigen::MatrixXd::Zero(cov.rows(), cov.cols());
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  llt.compute(cov + 1e-14 * cov.diagonal().maxCoeff() *
                        Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
  if (llt.info() != Eigen::Success)
    throw ConfigError("random-effect covariance is not positive semidefinite");
  return llt.matrixL();
}
}  // namespace

Eigen::MatrixXd ScenarioConfig::random_effect_cov() const {
  Eigen::MatrixXd cov(2, 2);
  cov(0, 0) = sigma_w[0] * sigma_w[0];
  cov(1, 1) = sigma_w[1] * sigma_w[1];
  cov(0, 1) = cov(1, 0) = rho * sigma_w[0] * sigma_w[1];
  return cov;
}

DegradationDataset generate_dataset(const ScenarioConfig& sc, std::uint64_t seed,
                                    GroundTruth* truth) {
  sc.validate();
  const int J = 2;
  CovariateProcessModel cov_truth = ScenarioConfig::covariate_truth();
  Eigen::MatrixXd re_chol = psd_chol(sc.random_effect_cov());

  DegradationDataset data;
  data.num_dcs = J;
  data.num_covariates = 2;
  if (truth) {
    truth->w.resize(sc.num_specimens, J);
    truth->tau.clear();
    truth->mean.clear();
  }

  std::vector<double> mtimes(sc.measurements);
  for (int k = 0; k < sc.measurements; ++k)
    mtimes[k] =
        std::round(static_cast<double>(sc.exposure_days) * (k + 1) / sc.measurements);

  for (int i = 0; i < sc.num_specimens; ++i) {
    Rng rng = Rng::stream(seed, 0xdadaULL, static_cast<std::uint64_t>(i));
    Specimen sp;
    sp.id = i + 1;
    Eigen::MatrixXd x = simulate_process(cov_truth, sc.exposure_days, rng);
    sp.covariate_times.resize(sc.exposure_days);
    for (int d = 0; d < sc.exposure_days; ++d) sp.covariate_times[d] = d + 1;
    sp.covariates = x;
    sp.measure_times = mtimes;

    Eigen::VectorXd w = re_chol * rng.normal_vector(J);
    Eigen::MatrixXd tau(sc.measurements, J), mean(sc.measurements, J);
    // Daily accumulation of the true effects, snapshot at measurement days.
    int k = 0;
    double acc = 0.0;
    for (int d = 0; d < sc.exposure_days && k < sc.measurements; ++d) {
      acc += ScenarioConfig::effect_truth(0, x(d, 0)) +
             ScenarioConfig::effect_truth(1, x(d, 1));
      while (k < sc.measurements && mtimes[k] <= d + 1.0) {
        for (int j = 0; j < J; ++j) tau(k, j) = acc;
        ++k;
      }
    }
    sp.y.resize(sc.measurements, J);
    for (int j = 0; j < J; ++j)
      for (int kk = 0; kk < sc.measurements; ++kk) {
        mean(kk, j) = degradation_mean(tau(kk, j), sc.alpha[j], sc.gamma[j], w[j]);
        sp.y(kk, j) = mean(kk, j) + sc.sigma * rng.normal();
      }
    if (truth) {
      truth->w.row(i) = w.transpose();
      truth->tau.push_back(tau);
      truth->mean.push_back(mean);
    }
    data.specimens.push_back(std::move(sp));
  }
  data.validate();
  return data;
}

double avg_rmse(const std::vector<std::vector<double>>& estimates,
                const std::vector<double>& truth, const std::vector<double>& grid) {
  if (estimates.empty()) throw ConfigError("no estimate curves");
  for (const auto& e : estimates)
    if (e.size() != grid.size() || truth.size() != grid.size())
      throw ConfigError("curves must share the evaluation grid");
  if (grid.size() < 2) throw ConfigError("grid needs at least two points");
  std::vector<double> rmse(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (const auto& e : estimates) {
      double d = e[g] - truth[g];
      acc += d * d;
    }
    rmse[g] = std::sqrt(acc / static_cast<double>(estimates.size()));
  }
  double integral = 0.0;
  for (std::size_t g = 1; g < grid.size(); ++g)
    integral += 0.5 * (rmse[g] + rmse[g - 1]) * (grid[g] - grid[g - 1]);
  return integral / (grid.back() - grid.front());
}

std::vector<double> true_failure_cdf(const ScenarioConfig& sc,
                                     const std::vector<double>& grid, long replications,
                                     std::uint64_t seed, int threads) {
  sc.validate();
  if (grid.empty() || replications < 1) throw ConfigError("empty grid or replications");
  CovariateProcessModel cov_truth = ScenarioConfig::covariate_truth();
  Eigen::MatrixXd re_chol = psd_chol(sc.random_effect_cov());
  const int horizon = static_cast<int>(std::ceil(2.0 * grid.back()));

  const long blocks = std::max(1, threads * 4);
  const long per_block = (replications + blocks - 1) / blocks;
  std::vector<std::vector<double>> crossings(static_cast<std::size_t>(blocks));
  parallel_for(static_cast<std::size_t>(blocks), threads, [&](std::size_t blk) {
    Rng rng = Rng::stream(seed, 0x02ac1eULL, blk);
    long n = std::min(per_block, replications - static_cast<long>(blk) * per_block);
    for (long b = 0; b < n; ++b) {
      Eigen::MatrixXd x = simulate_process(cov_truth, horizon, rng);
      Eigen::VectorXd w = re_chol * rng.normal_vector(2);
      double tau = 0.0;
      for (int d = 0; d < horizon; ++d) {
        tau += ScenarioConfig::effect_truth(0, x(d, 0)) +
               ScenarioConfig::effect_truth(1, x(d, 1));
        bool crossed = false;
        for (int j = 0; j < 2 && !crossed; ++j)
          if (degradation_mean(tau, sc.alpha[j], sc.gamma[j], w[j]) <= sc.thresholds[j])
            crossed = true;
        if (crossed) {
          crossings[blk].push_back(d + 1.0);
          break;
        }
      }
    }
  });
  std::vector<double> all;
  for (auto& c : crossings) all.insert(all.end(), c.begin(), c.end());
  std::sort(all.begin(), all.end());
  std::vector<double> cdf(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    auto it = std::upper_bound(all.begin(), all.end(), grid[g]);
    cdf[g] = static_cast<double>(it - all.begin()) / static_cast<double>(replications);
  }
  return cdf;
}

namespace {

struct VariantOutcome {
  std::vector<double> medians;           // tracked params
  std::vector<std::pair<double, double>> cis;
  std::vector<EffectBand> effect_bands;  // per (dc, covariate), dc-major
  std::vector<double> reliability_curve;
  std::vector<double> reliability_lo, reliability_hi;
  double scp_magnitude = 0.0;
  double asymptote_covered[2] = {0.0, 0.0};  // covered specimen count per DC
};

struct ReplicateOutcome {
  bool ok = false;
  std::string error;
  std::optional<VariantOutcome> correlated;
  std::optional<VariantOutcome> independent;
};

const std::vector<std::string> kTrackedParams = {"gamma.1", "gamma.2", "sigma",
                                                 "sigma_w.1", "sigma_w.2", "rho.1.2"};

double tracked_truth(const ScenarioConfig& sc, const std::string& name) {
  if (name == "gamma.1") return sc.gamma[0];
  if (name == "gamma.2") return sc.gamma[1];
  if (name == "sigma") return sc.sigma;
  if (name == "sigma_w.1") return sc.sigma_w[0];
  if (name == "sigma_w.2") return sc.sigma_w[1];
  if (name == "rho.1.2") return sc.rho;
  throw ConfigError("unknown tracked parameter " + name);
}

VariantOutcome evaluate_fit(const FitResult& fit, const ScenarioConfig& sc,
                            const GroundTruth& truth,
                            const std::vector<std::vector<double>>& effect_grids,
                            const std::vector<double>& rel_grid,
                            const CovariateProcessModel& cov_truth,
                            const StudyOptions& opt) {
  VariantOutcome out;
  for (const auto& name : kTrackedParams) {
    int c = fit.column(name);
    if (c < 0) {  // rho column absent only if J were 1; emit zeros
      out.medians.push_back(0.0);
      out.cis.emplace_back(0.0, 0.0);
      continue;
    }
    out.medians.push_back(fit.summary[c].median);
    out.cis.emplace_back(fit.summary[c].q025, fit.summary[c].q975);
  }
  for (int j = 0; j < 2; ++j)
    for (int m = 0; m < 2; ++m)
      out.effect_bands.push_back(effect_band(fit, j, m, effect_grids[m]));

  // Mean over draws of the convexity-penalty magnitude for the convex
  // covariate (averaged over DCs).
  {
    Eigen::MatrixXd all = fit.constrained.stacked();
    const ParamLayout& lay = fit.posterior->layout();
    double acc = 0.0;
    long count = 0;
    for (int m = 0; m < 2; ++m) {
      if (lay.shapes[m] != ShapeKind::convex) continue;
      int dcol = fit.column("delta." + std::to_string(m + 1));
      for (int j = 0; j < 2; ++j) {
        std::vector<int> cols(lay.q[m]);
        for (int qi = 0; qi < lay.q[m]; ++qi)
          cols[qi] = fit.column("beta." + std::to_string(j + 1) + "." +
                                std::to_string(m + 1) + "." + std::to_string(qi + 1));
        Eigen::VectorXd beta(lay.q[m]);
        for (Eigen::Index r = 0; r < all.rows(); ++r) {
          for (int qi = 0; qi < lay.q[m]; ++qi) beta[qi] = all(r, cols[qi]);
          acc += -priors::log_scp(beta, all(r, dcol));
          ++count;
        }
      }
    }
    out.scp_magnitude = count ? acc / static_cast<double>(count) : 0.0;
  }

  // Specimen-level asymptote coverage: CI of alpha_j exp(w_ij) draws vs truth.
  {
    Eigen::MatrixXd all = fit.constrained.stacked();
    for (int j = 0; j < 2; ++j) {
      int ca = fit.column("alpha." + std::to_string(j + 1));
      long covered = 0;
      for (int i = 0; i < sc.num_specimens; ++i) {
        int cw = fit.column("w." + std::to_string(i + 1) + "." + std::to_string(j + 1));
        std::vector<double> vals(all.rows());
        for (Eigen::Index r = 0; r < all.rows(); ++r)
          vals[r] = all(r, ca) * std::exp(all(r, cw));
        double lo = quantile(vals, 0.025), hi = quantile(vals, 0.975);
        double tr = sc.alpha[j] * std::exp(truth.w(i, j));
        if (tr >= lo && tr <= hi) ++covered;
      }
      out.asymptote_covered[j] = static_cast<double>(covered);
    }
  }

  if (opt.reliability) {
    auto draws = extract_path_draws(fit, opt.reliability_draws);
    FailureThresholds th;
    th.value = sc.thresholds;
    ReliabilityOptions ro;
    ro.inner_loops = opt.reliability_loops;
    ro.threads = 1;
    FailureCdfEstimate est = estimate_failure_cdf(draws, cov_truth, fit.bases(), th,
                                                  rel_grid, ro, opt.seed ^ 0x5e11ULL);
    out.reliability_curve = est.median;
    out.reliability_lo = est.lower;
    out.reliability_hi = est.upper;
  }
  return out;
}

}  // namespace

StudyReport run_study(const std::vector<ScenarioConfig>& scenarios,
                      const StudyOptions& opt) {
  if (opt.replications < 1) throw ConfigError("replications must be >= 1");
  StudyReport report;
  CovariateProcessModel cov_truth = ScenarioConfig::covariate_truth();

  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const ScenarioConfig& sc = scenarios[s];
    sc.validate();
    ScenarioResult res;
    res.scenario = sc;

    // Effect evaluation grids: one seasonal amplitude around the level.
    res.effect_grids.resize(2);
    const double lo[2] = {25.0 - 16.0, 25.0 - 18.0};
    const double hi[2] = {25.0 + 16.0, 25.0 + 18.0};
    for (int m = 0; m < 2; ++m) {
      for (int g = 0; g < opt.effect_grid_points; ++g)
        res.effect_grids[m].push_back(
            lo[m] + (hi[m] - lo[m]) * g / (opt.effect_grid_points - 1.0));
    }
    if (opt.reliability) {
      for (double d = 1.0; d <= opt.reliability_max_day; d += 1.0)
        res.reliability_grid.push_back(d);
      res.truth_cdf = true_failure_cdf(sc, res.reliability_grid,
                                       opt.truth_cdf_replications,
                                       opt.seed ^ 0x02ac1eULL, opt.threads);
    }

    std::vector<ReplicateOutcome> outcomes(opt.replications);
    parallel_for(static_cast<std::size_t>(opt.replications), opt.threads,
                 [&](std::size_t r) {
                   ReplicateOutcome& oc = outcomes[r];
                   try {
                     std::uint64_t rep_seed =
                         splitmix64(opt.seed ^ splitmix64(0x1000 + s) ^
                                    splitmix64(0x2000 + r));
                     GroundTruth truth;
                     DegradationDataset data = generate_dataset(sc, rep_seed, &truth);
                     FitOptions fo;
                     fo.model.q = {opt.basis_size, opt.basis_size};
                     fo.model.shapes = {ShapeKind::increasing, ShapeKind::convex};
                     fo.model.prior = PriorConfig::defaults(2);
                     fo.sampler = opt.sampler;
                     fo.sampler.threads = 1;  // replicates own the parallelism
                     fo.sampler.seed = rep_seed;
                     if (opt.fit_correlated) {
                       fo.model.correlated = true;
                       FitResult fit = fit_model(data, fo);
                       oc.correlated = evaluate_fit(fit, sc, truth, res.effect_grids,
                                                    res.reliability_grid, cov_truth, opt);
                     }
                     if (opt.fit_independent) {
                       fo.model.correlated = false;
                       fo.sampler.seed = rep_seed ^ 0x1ULL;
                       FitResult fit = fit_model(data, fo);
                       oc.independent = evaluate_fit(fit, sc, truth, res.effect_grids,
                                                     res.reliability_grid, cov_truth, opt);
                     }
                     oc.ok = true;
                   } catch (const std::exception& e) {
                     oc.ok = false;
                     oc.error = e.what();
                   }
                 });

    // Reduce over successful replicates (correlated variant drives the
    // parameter tables when present, else the independent one).
    std::vector<const VariantOutcome*> main_fits;
    for (const auto& oc : outcomes) {
      if (!oc.ok) {
        ++res.replicates_failed;
        continue;
      }
      const VariantOutcome* vo =
          oc.correlated ? &*oc.correlated : (oc.independent ? &*oc.independent : nullptr);
      if (vo) main_fits.push_back(vo);
    }
    res.replicates_done = static_cast<int>(main_fits.size());
    if (main_fits.empty()) {
      report.scenarios.push_back(std::move(res));
      continue;
    }

    for (std::size_t p = 0; p < kTrackedParams.size(); ++p) {
      ParamStat st;
      st.name = kTrackedParams[p];
      st.truth = tracked_truth(sc, st.name);
      double mean = 0.0;
      for (auto* vo : main_fits) mean += vo->medians[p];
      mean /= static_cast<double>(main_fits.size());
      double var = 0.0;
      long covered = 0;
      for (auto* vo : main_fits) {
        var += (vo->medians[p] - mean) * (vo->medians[p] - mean);
        if (st.truth >= vo->cis[p].first && st.truth <= vo->cis[p].second) ++covered;
      }
      st.mean_of_medians = mean;
      st.bias = mean - st.truth;
      st.sd = main_fits.size() > 1
                  ? std::sqrt(var / (static_cast<double>(main_fits.size()) - 1.0))
                  : 0.0;
      st.cp = static_cast<double>(covered) / static_cast<double>(main_fits.size());
      res.params.push_back(st);
    }

    for (int j = 0; j < 2; ++j)
      for (int m = 0; m < 2; ++m) {
        EffectMetric em;
        em.dc = j;
        em.covariate = m;
        em.shape = m == 0 ? ShapeKind::increasing : ShapeKind::convex;
        const auto& grid = res.effect_grids[m];
        std::vector<double> truth_curve(grid.size());
        for (std::size_t g = 0; g < grid.size(); ++g)
          truth_curve[g] = ScenarioConfig::effect_truth(m, grid[g]);
        std::vector<std::vector<double>> medians;
        em.cp_curve.assign(grid.size(), 0.0);
        for (auto* vo : main_fits) {
          const EffectBand& band = vo->effect_bands[j * 2 + m];
          medians.push_back(band.median);
          for (std::size_t g = 0; g < grid.size(); ++g)
            if (truth_curve[g] >= band.lower[g] && truth_curve[g] <= band.upper[g])
              em.cp_curve[g] += 1.0;
        }
        for (auto& c : em.cp_curve) c /= static_cast<double>(main_fits.size());
        em.avg_rmse_value = avg_rmse(medians, truth_curve, grid);
        res.effects.push_back(std::move(em));
      }

    for (auto* vo : main_fits) res.scp_magnitude.push_back(vo->scp_magnitude);

    for (int j = 0; j < 2; ++j) {
      double covered = 0.0;
      for (auto* vo : main_fits) covered += vo->asymptote_covered[j];
      res.asymptote_cp[j] =
          covered / (static_cast<double>(main_fits.size()) * sc.num_specimens);
    }

    if (opt.reliability) {
      auto reduce_variant = [&](bool correlated, std::vector<double>& rmse_out,
                                std::vector<double>& cp_out) {
        cp_out.assign(res.reliability_grid.size(), 0.0);
        long n = 0;
        for (const auto& oc : outcomes) {
          if (!oc.ok) continue;
          const auto& vo = correlated ? oc.correlated : oc.independent;
          if (!vo) continue;
          rmse_out.push_back(
              avg_rmse({vo->reliability_curve}, res.truth_cdf, res.reliability_grid));
          for (std::size_t g = 0; g < res.reliability_grid.size(); ++g)
            if (res.truth_cdf[g] >= vo->reliability_lo[g] &&
                res.truth_cdf[g] <= vo->reliability_hi[g])
              cp_out[g] += 1.0;
          ++n;
        }
        if (n)
          for (auto& c : cp_out) c /= static_cast<double>(n);
      };
      if (opt.fit_correlated)
        reduce_variant(true, res.rel_rmse_correlated, res.rel_cp_correlated);
      if (opt.fit_independent)
        reduce_variant(false, res.rel_rmse_independent, res.rel_cp_independent);
    }

    report.scenarios.push_back(std::move(res));
  }
  return report;
}

void StudyReport::write_csv(const std::string& directory) const {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  auto path = [&](const char* name) { return (fs::path(directory) / name).string(); };

  {
    csv::Writer w(path("params_summary.csv"));
    w.row({"I", "n_i", "rho", "parameter", "truth", "mean_of_medians", "bias_x100",
           "sd_x100", "cp"});
    for (const auto& sc : scenarios)
      for (const auto& p : sc.params)
        w.row({std::to_string(sc.scenario.num_specimens),
               std::to_string(sc.scenario.measurements),
               csv::format_double(sc.scenario.rho), p.name, csv::format_double(p.truth),
               csv::format_double(p.mean_of_medians), csv::format_double(p.bias * 100.0),
               csv::format_double(p.sd * 100.0), csv::format_double(p.cp)});
  }
  {
    csv::Writer w(path("effect_rmse.csv"));
    w.row({"I", "n_i", "rho", "dc", "covariate", "shape", "avg_rmse"});
    for (const auto& sc : scenarios)
      for (const auto& e : sc.effects)
        w.row({std::to_string(sc.scenario.num_specimens),
               std::to_string(sc.scenario.measurements),
               csv::format_double(sc.scenario.rho), std::to_string(e.dc + 1),
               std::to_string(e.covariate + 1), to_string(e.shape),
               csv::format_double(e.avg_rmse_value)});
  }
  {
    csv::Writer w(path("effect_cp.csv"));
    w.row({"I", "n_i", "rho", "dc", "covariate", "x", "cp"});
    for (const auto& sc : scenarios)
      for (const auto& e : sc.effects)
        for (std::size_t g = 0; g < e.cp_curve.size(); ++g)
          w.row({std::to_string(sc.scenario.num_specimens),
                 std::to_string(sc.scenario.measurements),
                 csv::format_double(sc.scenario.rho), std::to_string(e.dc + 1),
                 std::to_string(e.covariate + 1),
                 csv::format_double(sc.effect_grids[e.covariate][g]),
                 csv::format_double(e.cp_curve[g])});
  }
  {
    csv::Writer w(path("asymptote_cp.csv"));
    w.row({"I", "n_i", "rho", "dc", "cp"});
    for (const auto& sc : scenarios)
      for (int j = 0; j < 2; ++j)
        w.row({std::to_string(sc.scenario.num_specimens),
               std::to_string(sc.scenario.measurements),
               csv::format_double(sc.scenario.rho), std::to_string(j + 1),
               csv::format_double(sc.asymptote_cp[j])});
  }
  {
    csv::Writer w(path("scp_magnitude.csv"));
    w.row({"I", "n_i", "rho", "replicate", "mean_scp_magnitude"});
    for (const auto& sc : scenarios)
      for (std::size_t r = 0; r < sc.scp_magnitude.size(); ++r)
        w.row({std::to_string(sc.scenario.num_specimens),
               std::to_string(sc.scenario.measurements),
               csv::format_double(sc.scenario.rho), std::to_string(r + 1),
               csv::format_double(sc.scp_magnitude[r])});
  }
  {
    csv::Writer w(path("reliability_rmse.csv"));
    w.row({"I", "n_i", "rho", "variant", "replicate", "avg_rmse"});
    for (const auto& sc : scenarios) {
      for (std::size_t r = 0; r < sc.rel_rmse_correlated.size(); ++r)
        w.row({std::to_string(sc.scenario.num_specimens),
               std::to_string(sc.scenario.measurements),
               csv::format_double(sc.scenario.rho), "correlated", std::to_string(r + 1),
               csv::format_double(sc.rel_rmse_correlated[r])});
      for (std::size_t r = 0; r < sc.rel_rmse_independent.size(); ++r)
        w.row({std::to_string(sc.scenario.num_specimens),
               std::to_string(sc.scenario.measurements),
               csv::format_double(sc.scenario.rho), "independent", std::to_string(r + 1),
               csv::format_double(sc.rel_rmse_independent[r])});
    }
  }
  {
    csv::Writer w(path("reliability_cp.csv"));
    w.row({"I", "n_i", "rho", "variant", "time_days", "cp"});
    for (const auto& sc : scenarios) {
      for (std::size_t g = 0; g < sc.rel_cp_correlated.size(); ++g)
        w.row({std::to_string(sc.scenario.num_specimens),
               std::to_string(sc.scenario.measurements),
               csv::format_double(sc.scenario.rho), "correlated",
               csv::format_double(sc.reliability_grid[g]),
               csv::format_double(sc.rel_cp_correlated[g])});
      for (std::size_t g = 0; g < sc.rel_cp_independent.size(); ++g)
        w.row({std::to_string(sc.scenario.num_specimens),
               std::to_string(sc.scenario.measurements),
               csv::format_double(sc.scenario.rho), "independent",
               csv::format_double(sc.reliability_grid[g]),
               csv::format_double(sc.rel_cp_independent[g])});
    }
  }
  {
    csv::Writer w(path("replicates.csv"));
    w.row({"I", "n_i", "rho", "done", "failed"});
    for (const auto& sc : scenarios)
      w.row({std::to_string(sc.scenario.num_specimens),
             std::to_string(sc.scenario.measurements),
             csv::format_double(sc.scenario.rho), std::to_string(sc.replicates_done),
             std::to_string(sc.replicates_failed)});
  }
}

}  // namespace degpath
