#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "degpath/covproc.hpp"
#include "degpath/csv.hpp"
#include "degpath/parallel.hpp"
#include "degpath/dataset.hpp"
#include "degpath/errors.hpp"
#include "degpath/fit.hpp"
#include "degpath/reliability.hpp"
#include "degpath/runconfig.hpp"
#include "degpath/simstudy.hpp"
#include "degpath/version.hpp"

namespace fs = std::filesystem;
using namespace degpath;
using nlohmann::json;

namespace {

struct Common {
  std::string config_path;
  std::string out = "out";
  long seed = 1;
  int threads = 0;  // 0 = hardware
};

RunConfig load_config(const Common& c, CLI::App* cmd) {
  RunConfig cfg =
      c.config_path.empty() ? RunConfig::empty() : RunConfig::from_file(c.config_path);
  // Flags override file values.
  if (cmd->count("--out")) cfg.set("out", c.out);
  if (cmd->count("--seed")) cfg.set("seed", std::to_string(c.seed));
  if (cmd->count("--threads")) cfg.set("threads", std::to_string(c.threads));
  return cfg;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "key = value config file");
  cmd->add_option("-o,--out", c.out, "output directory");
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--threads", c.threads, "parallelism degree (0 = all cores)");
}

int resolve_threads(RunConfig& cfg) {
  long t = cfg.get_long("threads", 0);
  return t > 0 ? static_cast<int>(t) : hardware_threads();
}

void write_manifest(const std::string& dir, const std::string& command,
                    const RunConfig& cfg, std::uint64_t seed, double wall_seconds) {
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["wall_seconds"] = wall_seconds;
  for (const auto& [k, v] : cfg.entries()) j["config"][k] = v;
  std::ofstream out(fs::path(dir) / "manifest.json");
  out << j.dump(2) << "\n";
}

SamplerConfig sampler_from_config(RunConfig& cfg, std::uint64_t seed, int threads) {
  SamplerConfig sc;
  sc.chains = static_cast<int>(cfg.get_long("sampler.chains", 4));
  sc.iterations = static_cast<int>(cfg.get_long("sampler.iterations", 1000));
  sc.warmup = static_cast<int>(cfg.get_long("sampler.warmup", 200));
  sc.target_accept = cfg.get_double("sampler.target_accept", 0.8);
  sc.max_depth = static_cast<int>(cfg.get_long("sampler.max_depth", 10));
  sc.fixed_hmc = cfg.get_bool("sampler.fixed_hmc", false);
  sc.hmc_steps = static_cast<int>(cfg.get_long("sampler.hmc_steps", 32));
  sc.seed = seed;
  sc.threads = threads;
  sc.validate();
  return sc;
}

std::vector<double> make_grid(double max_day, double step) {
  std::vector<double> grid;
  for (double d = step; d <= max_day + 1e-9; d += step) grid.push_back(d);
  if (grid.empty()) throw ConfigError("empty reliability grid");
  return grid;
}

// ---- fit ----

int cmd_fit(Common& common, CLI::App* cmd, bool independent_flag,
            const std::string& meas_flag, const std::string& cov_flag) {
  auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = load_config(common, cmd);
  if (!meas_flag.empty()) cfg.set("data.measurements", meas_flag);
  if (!cov_flag.empty()) cfg.set("data.covariates", cov_flag);
  if (independent_flag) cfg.set("model.correlated", "false");

  const std::string out = cfg.get_string("out", "out");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_long("seed", 1));
  const int threads = resolve_threads(cfg);

  DegradationDataset data = load_dataset(cfg.require_string("data.measurements"),
                                         cfg.require_string("data.covariates"));

  FitOptions fo;
  std::vector<long> qs = cfg.get_longs("basis.q", {20});
  if (qs.size() == 1) qs.assign(data.num_covariates, qs[0]);
  if (static_cast<int>(qs.size()) != data.num_covariates)
    throw ConfigError("basis.q needs one entry (or one per covariate)");
  for (long q : qs) fo.model.q.push_back(static_cast<int>(q));
  fo.model.degree = static_cast<int>(cfg.get_long("basis.degree", 3));
  std::vector<std::string> shape_names =
      cfg.get_strings("model.shapes", std::vector<std::string>(data.num_covariates,
                                                               "unconstrained"));
  if (static_cast<int>(shape_names.size()) != data.num_covariates)
    throw ConfigError("model.shapes needs one entry per covariate");
  for (const auto& s : shape_names) fo.model.shapes.push_back(shape_from_string(s));
  fo.model.correlated = cfg.get_bool("model.correlated", true);
  fo.model.prior = PriorConfig::defaults(data.num_covariates);
  fo.model.prior.ig_a = cfg.get_doubles("prior.a", fo.model.prior.ig_a);
  fo.model.prior.ig_b = cfg.get_doubles("prior.b", fo.model.prior.ig_b);
  if (fo.model.prior.ig_a.size() == 1)
    fo.model.prior.ig_a.assign(data.num_covariates, fo.model.prior.ig_a[0]);
  if (fo.model.prior.ig_b.size() == 1)
    fo.model.prior.ig_b.assign(data.num_covariates, fo.model.prior.ig_b[0]);
  fo.model.prior.eta = cfg.get_double("prior.eta", 0.05);
  fo.model.prior.zeta = cfg.get_double("prior.zeta", 1.0);
  fo.model.prior.cauchy_scale = cfg.get_double("prior.cauchy_scale", 1.0);
  auto bounds = [&](const char* lo_key, const char* hi_key) {
    std::vector<std::pair<double, double>> b;
    auto lo = cfg.get_doubles(lo_key, {});
    auto hi = cfg.get_doubles(hi_key, {});
    if (lo.empty() && hi.empty()) return b;
    if (lo.size() != hi.size()) throw ConfigError("bound lists must have equal length");
    for (std::size_t i = 0; i < lo.size(); ++i) b.emplace_back(lo[i], hi[i]);
    return b;
  };
  fo.model.prior.alpha_bounds = bounds("prior.alpha_lower", "prior.alpha_upper");
  fo.model.prior.gamma_bounds = bounds("prior.gamma_lower", "prior.gamma_upper");
  fo.model.prior.beta1_halfnormal_scale = cfg.get_double("prior.beta1_scale", 0.0);
  if (cfg.has("prior.sigma_l_lower") || cfg.has("prior.sigma_l_upper"))
    fo.model.prior.sigma_l_bounds = {{cfg.get_double("prior.sigma_l_lower", -10.0),
                                      cfg.get_double("prior.sigma_l_upper", 10.0)}};
  fo.sampler = sampler_from_config(cfg, seed, threads);
  cfg.finish();

  fs::create_directories(out);
  FitResult fit = fit_model(data, fo);

  // Samples CSV: one row per kept draw, labeled columns.
  {
    csv::Writer w((fs::path(out) / "samples.csv").string());
    std::vector<std::string> header = {"chain", "draw"};
    header.insert(header.end(), fit.constrained.names.begin(), fit.constrained.names.end());
    w.row(header);
    for (int c = 0; c < fit.constrained.num_chains(); ++c)
      for (int r = 0; r < fit.constrained.kept(); ++r) {
        std::vector<std::string> cells = {std::to_string(c + 1), std::to_string(r + 1)};
        for (int p = 0; p < fit.constrained.dim(); ++p)
          cells.push_back(csv::format_double(fit.constrained.draws[c](r, p)));
        w.row(cells);
      }
  }
  {
    csv::Writer w((fs::path(out) / "summary.csv").string());
    w.row({"parameter", "median", "sd", "ci_lower", "ci_upper"});
    for (std::size_t p = 0; p < fit.constrained.names.size(); ++p)
      w.row({fit.constrained.names[p], csv::format_double(fit.summary[p].median),
             csv::format_double(fit.summary[p].sd), csv::format_double(fit.summary[p].q025),
             csv::format_double(fit.summary[p].q975)});
  }
  {
    json diag;
    for (std::size_t p = 0; p < fit.constrained.names.size(); ++p) {
      if (fit.rhat.size() > 0) diag["rhat"][fit.constrained.names[p]] = fit.rhat[p];
      if (fit.ess.size() > 0) diag["ess"][fit.constrained.names[p]] = fit.ess[p];
    }
    json dv = json::array();
    for (const auto& chain : fit.constrained.divergent) {
      long n = 0;
      for (auto f : chain) n += f;
      dv.push_back(n);
    }
    diag["divergences"] = dv;
    diag["total_divergences"] = fit.constrained.total_divergences();
    diag["step_size"] = fit.constrained.step_size;
    diag["mean_accept"] = fit.constrained.mean_accept;
    std::ofstream o(fs::path(out) / "diagnostics.json");
    o << diag.dump(2) << "\n";
  }
  {
    json meta;
    meta["num_dcs"] = data.num_dcs;
    meta["num_covariates"] = data.num_covariates;
    meta["num_specimens"] = data.num_specimens();
    meta["correlated"] = fo.model.correlated;
    meta["degree"] = fo.model.degree;
    for (int m = 0; m < data.num_covariates; ++m) {
      json b;
      b["q"] = fo.model.q[m];
      b["domain_min"] = fit.bases()[m].domain_min();
      b["domain_max"] = fit.bases()[m].domain_max();
      b["shape"] = to_string(fo.model.shapes[m]);
      meta["basis"].push_back(b);
    }
    meta["seed"] = seed;
    meta["chains"] = fo.sampler.chains;
    meta["iterations"] = fo.sampler.iterations;
    meta["warmup"] = fo.sampler.warmup;
    meta["total_divergences"] = fit.constrained.total_divergences();
    std::ofstream o(fs::path(out) / "fit_meta.json");
    o << meta.dump(2) << "\n";
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out, "fit", cfg, seed, wall);
  double max_rhat = fit.rhat.size() ? fit.rhat.maxCoeff() : 0.0;
  std::cout << "fit: " << fit.constrained.num_chains() << " chains x "
            << fit.constrained.kept() << " draws, max R-hat " << max_rhat
            << ", divergences " << fit.constrained.total_divergences() << "\n";
  return 0;
}

// ---- reliability ----

struct LoadedFit {
  std::vector<SplineBasis> bases;
  std::vector<PathParameterDraw> draws;
  bool correlated = true;
};

LoadedFit load_fit_dir(const std::string& dir, int max_draws) {
  LoadedFit lf;
  std::ifstream meta_in(fs::path(dir) / "fit_meta.json");
  if (!meta_in) throw DataError("cannot open " + dir + "/fit_meta.json");
  json meta = json::parse(meta_in);
  const int num_dcs = meta.at("num_dcs").get<int>();
  const int num_cov = meta.at("num_covariates").get<int>();
  const int degree = meta.at("degree").get<int>();
  lf.correlated = meta.value("correlated", true);
  std::vector<int> q;
  for (const auto& b : meta.at("basis")) {
    q.push_back(b.at("q").get<int>());
    lf.bases.emplace_back(b.at("domain_min").get<double>(),
                          b.at("domain_max").get<double>(), q.back(), degree);
  }
  auto table = csv::read_file((fs::path(dir) / "samples.csv").string());
  std::vector<std::string> names(table.header.begin() + 2, table.header.end());
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(table.rows.size()),
                       static_cast<Eigen::Index>(names.size()));
  for (std::size_t r = 0; r < table.rows.size(); ++r)
    for (std::size_t p = 0; p < names.size(); ++p)
      rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(p)) =
          csv::to_double(table.rows[r][p + 2], "samples.csv");
  lf.draws = path_draws_from_table(names, rows, num_dcs, num_cov, q, max_draws);
  return lf;
}

int cmd_reliability(Common& common, CLI::App* cmd, const std::string& fit_dir_flag,
                    const std::string& covproc_flag) {
  auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = load_config(common, cmd);
  if (!fit_dir_flag.empty()) cfg.set("reliability.fit_dir", fit_dir_flag);
  if (!covproc_flag.empty()) cfg.set("reliability.covproc", covproc_flag);

  const std::string out = cfg.get_string("out", "out");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_long("seed", 1));
  const int threads = resolve_threads(cfg);

  ReliabilityOptions ro;
  ro.inner_loops = static_cast<int>(cfg.get_long("reliability.b", 1000));
  ro.horizon_days = cfg.get_double("reliability.horizon", 0.0);
  ro.shared_covariates = cfg.get_bool("reliability.shared_covariates", false);
  ro.threads = threads;
  const int max_draws = static_cast<int>(cfg.get_long("reliability.draws", 200));
  std::vector<double> grid = make_grid(cfg.get_double("reliability.grid_max", 150.0),
                                       cfg.get_double("reliability.grid_step", 1.0));

  std::ifstream cov_in(cfg.require_string("reliability.covproc"));
  if (!cov_in) throw DataError("cannot open covariate model JSON");
  CovariateProcessModel covmodel = CovariateProcessModel::from_json(
      std::string(std::istreambuf_iterator<char>(cov_in), {}));

  std::vector<CovariateProcessModel> boot;
  std::string boot_path = cfg.get_string("reliability.bootstrap", "");
  if (!boot_path.empty()) {
    std::ifstream in(boot_path);
    if (!in) throw DataError("cannot open bootstrap JSON: " + boot_path);
    json jb = json::parse(in);
    for (const auto& d : jb.at("draws"))
      boot.push_back(CovariateProcessModel::from_json(d.dump()));
  }

  std::vector<std::string> dirs = {cfg.require_string("reliability.fit_dir")};
  std::string second = cfg.get_string("reliability.fit_dir2", "");
  if (!second.empty()) dirs.push_back(second);

  std::vector<double> thresholds = cfg.get_doubles("thresholds", {});
  if (thresholds.empty()) throw ConfigError("thresholds required (one per DC)");
  cfg.finish();

  fs::create_directories(out);
  csv::Writer w((fs::path(out) / "reliability.csv").string());
  const bool labeled = dirs.size() > 1;
  if (labeled)
    w.row({"label", "time_days", "lower", "median", "upper"});
  else
    w.row({"time_days", "lower", "median", "upper"});
  for (const auto& dir : dirs) {
    LoadedFit lf = load_fit_dir(dir, max_draws);
    FailureThresholds th;
    th.value = Eigen::Map<Eigen::VectorXd>(thresholds.data(),
                                           static_cast<Eigen::Index>(thresholds.size()));
    FailureCdfEstimate est =
        boot.empty()
            ? estimate_failure_cdf(lf.draws, covmodel, lf.bases, th, grid, ro, seed)
            : cdf_with_covproc_uncertainty(lf.draws, boot, lf.bases, th, grid, ro, seed);
    std::string label = lf.correlated ? "correlated" : "independent";
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::vector<std::string> cells;
      if (labeled) cells.push_back(label);
      cells.push_back(csv::format_double(grid[g]));
      cells.push_back(csv::format_double(est.lower[g]));
      cells.push_back(csv::format_double(est.median[g]));
      cells.push_back(csv::format_double(est.upper[g]));
      w.row(cells);
    }
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out, "reliability", cfg, seed, wall);
  std::cout << "reliability: wrote " << (fs::path(out) / "reliability.csv").string() << "\n";
  return 0;
}

// ---- simulate ----

int cmd_simulate(Common& common, CLI::App* cmd) {
  auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = load_config(common, cmd);
  const std::string out = cfg.get_string("out", "out");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_long("seed", 1));

  ScenarioConfig sc;
  sc.num_specimens = static_cast<int>(cfg.get_long("simulate.i", 20));
  sc.measurements = static_cast<int>(cfg.get_long("simulate.ni", 20));
  sc.rho = cfg.get_double("simulate.rho", 0.5);
  sc.exposure_days = static_cast<int>(cfg.get_long("simulate.exposure_days", 300));
  sc.sigma = cfg.get_double("simulate.sigma", 0.01);
  cfg.finish();

  GroundTruth truth;
  DegradationDataset data = generate_dataset(sc, seed, &truth);
  fs::create_directories(out);
  write_dataset(data, (fs::path(out) / "measurements.csv").string(),
                (fs::path(out) / "covariates.csv").string());
  {
    json t;
    t["scenario"]["i"] = sc.num_specimens;
    t["scenario"]["ni"] = sc.measurements;
    t["scenario"]["rho"] = sc.rho;
    t["scenario"]["exposure_days"] = sc.exposure_days;
    t["scenario"]["alpha"] = {sc.alpha[0], sc.alpha[1]};
    t["scenario"]["gamma"] = {sc.gamma[0], sc.gamma[1]};
    t["scenario"]["sigma"] = sc.sigma;
    t["scenario"]["sigma_w"] = {sc.sigma_w[0], sc.sigma_w[1]};
    t["scenario"]["thresholds"] = {sc.thresholds[0], sc.thresholds[1]};
    for (int i = 0; i < sc.num_specimens; ++i)
      t["w"].push_back({truth.w(i, 0), truth.w(i, 1)});
    std::ofstream o(fs::path(out) / "truth.json");
    o << t.dump(2) << "\n";
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out, "simulate", cfg, seed, wall);
  std::cout << "simulate: " << sc.num_specimens << " specimens -> " << out << "\n";
  return 0;
}

// ---- study ----

int cmd_study(Common& common, CLI::App* cmd) {
  auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = load_config(common, cmd);
  const std::string out = cfg.get_string("out", "out");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_long("seed", 1));
  const int threads = resolve_threads(cfg);

  std::vector<long> is = cfg.get_longs("study.i", {20});
  std::vector<long> nis = cfg.get_longs("study.ni", {20});
  std::vector<double> rhos = cfg.get_doubles("study.rho", {0.5});
  std::vector<ScenarioConfig> scenarios;
  for (long i : is)
    for (long ni : nis)
      for (double rho : rhos) {
        ScenarioConfig sc;
        sc.num_specimens = static_cast<int>(i);
        sc.measurements = static_cast<int>(ni);
        sc.rho = rho;
        scenarios.push_back(sc);
      }

  StudyOptions so;
  so.replications = static_cast<int>(cfg.get_long("study.replications", 50));
  so.seed = seed;
  so.threads = threads;
  so.sampler = sampler_from_config(cfg, seed, 1);
  so.basis_size = static_cast<int>(cfg.get_long("study.basis_q", 20));
  std::string variants = cfg.get_string("study.variants", "correlated");
  so.fit_correlated = variants == "correlated" || variants == "both";
  so.fit_independent = variants == "independent" || variants == "both";
  if (!so.fit_correlated && !so.fit_independent)
    throw ConfigError("study.variants must be correlated|independent|both");
  so.reliability = cfg.get_bool("study.reliability", false);
  so.reliability_draws = static_cast<int>(cfg.get_long("study.reliability_draws", 100));
  so.reliability_loops = static_cast<int>(cfg.get_long("study.reliability_b", 200));
  so.reliability_max_day = cfg.get_double("study.reliability_max_day", 150.0);
  so.truth_cdf_replications = cfg.get_long("study.truth_b", 100000);
  so.effect_grid_points = static_cast<int>(cfg.get_long("study.effect_grid", 41));
  cfg.finish();

  StudyReport report = run_study(scenarios, so);
  report.write_csv(out);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out, "study", cfg, seed, wall);
  std::cout << "study: " << scenarios.size() << " scenario(s) x " << so.replications
            << " replicate(s) -> " << out << "\n";
  return 0;
}

// ---- covfit ----

int cmd_covfit(Common& common, CLI::App* cmd, const std::string& cov_flag) {
  auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = load_config(common, cmd);
  if (!cov_flag.empty()) cfg.set("data.covariates", cov_flag);
  const std::string out = cfg.get_string("out", "out");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_long("seed", 1));
  const int threads = resolve_threads(cfg);

  auto table = csv::read_file(cfg.require_string("data.covariates"));
  csv::check_header(table, {"specimen", "covariate", "time_days", "value"},
                    "covariates");
  long specimen = cfg.get_long("covfit.specimen", 0);
  std::map<double, std::map<int, double>> series;
  int num_cov = 0;
  std::optional<long> first_specimen;
  for (const auto& r : table.rows) {
    long spec = csv::to_long(r[0], "covariates");
    if (!first_specimen) first_specimen = spec;
    if (specimen == 0 ? spec != *first_specimen : spec != specimen) continue;
    int m = static_cast<int>(csv::to_long(r[1], "covariates"));
    series[csv::to_double(r[2], "covariates")][m] = csv::to_double(r[3], "covariates");
    num_cov = std::max(num_cov, m);
  }
  if (series.size() < 10) throw DataError("not enough covariate records for covfit");

  // Daily grid with linear interpolation across gaps.
  const double first_day = std::ceil(series.begin()->first);
  const double last_day = std::floor(series.rbegin()->first);
  const int days = static_cast<int>(last_day - first_day) + 1;
  if (days < 10) throw DataError("covariate record spans fewer than 10 days");
  Eigen::MatrixXd daily(days, num_cov);
  bool gaps = false;
  for (int m = 1; m <= num_cov; ++m) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [t, vals] : series) {
      auto it = vals.find(m);
      if (it != vals.end()) pts.emplace_back(t, it->second);
    }
    std::size_t k = 0;
    for (int d = 0; d < days; ++d) {
      double t = first_day + d;
      while (k + 1 < pts.size() && pts[k + 1].first <= t) ++k;
      if (pts[k].first == t || k + 1 >= pts.size())
        daily(d, m - 1) = pts[k].second;
      else {
        double t0p = pts[k].first, t1p = pts[k + 1].first;
        if (t1p - t0p > 1.0 + 1e-9) gaps = true;
        double frac = (t - t0p) / (t1p - t0p);
        daily(d, m - 1) = pts[k].second + frac * (pts[k + 1].second - pts[k].second);
      }
    }
  }
  if (gaps) std::cerr << "covfit: record has gaps; interpolated linearly to daily grid\n";

  CovariateFitOptions fopt;
  auto mods = cfg.get_strings("covfit.modulation", {});
  auto waves = cfg.get_strings("covfit.waveform", {});
  for (int m = 0; m < num_cov; ++m) {
    MeanFitOptions mo;
    mo.seed = seed ^ (0xf17 + m);
    if (m < static_cast<int>(mods.size())) {
      mo.modulation = modulation_from_string(mods[m]);
      mo.fit_modulation = mo.modulation != Modulation::none;
    }
    if (m < static_cast<int>(waves.size())) mo.cosine = waves[m] == "cos";
    fopt.mean.push_back(mo);
  }
  const int n_boot = static_cast<int>(cfg.get_long("covfit.n_boot", 0));
  cfg.finish();

  CovariateProcessModel model = fit_covariate_process(daily, first_day, fopt);
  fs::create_directories(out);
  {
    std::ofstream o(fs::path(out) / "thetaX.json");
    o << model.to_json() << "\n";
  }
  if (n_boot > 0) {
    BootstrapResult boot =
        bootstrap_covariate_process(model, daily, first_day, n_boot, seed, threads, fopt);
    json j;
    j["failed"] = boot.failed;
    for (const auto& d : boot.draws) j["draws"].push_back(json::parse(d.to_json()));
    std::ofstream o(fs::path(out) / "thetaX_bootstrap.json");
    o << j.dump(2) << "\n";
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out, "covfit", cfg, seed, wall);
  std::cout << "covfit: " << num_cov << " covariate(s), " << days << " days -> " << out
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian general path degradation models with dynamic covariates"};
  app.require_subcommand(1);

  Common c_fit, c_rel, c_sim, c_study, c_cov;
  std::string meas_flag, cov_flag, fit_dir_flag, covproc_flag, covfit_cov_flag;
  bool independent = false;

  CLI::App* fit = app.add_subcommand("fit", "fit the path model by MCMC");
  add_common(fit, c_fit);
  fit->add_option("--measurements", meas_flag, "measurements CSV");
  fit->add_option("--covariates", cov_flag, "covariates CSV");
  fit->add_flag("--independent", independent, "force independent random effects");

  CLI::App* rel = app.add_subcommand("reliability", "failure-time CDF estimation");
  add_common(rel, c_rel);
  rel->add_option("--fit-dir", fit_dir_flag, "fit output directory");
  rel->add_option("--covproc", covproc_flag, "covariate model JSON");

  CLI::App* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  add_common(sim, c_sim);

  CLI::App* study = app.add_subcommand("study", "replicated simulation study");
  add_common(study, c_study);

  CLI::App* covfit = app.add_subcommand("covfit", "fit the covariate process model");
  add_common(covfit, c_cov);
  covfit->add_option("--covariates", covfit_cov_flag, "covariates CSV");

  try {
    app.parse(argc, argv);
    if (fit->parsed()) return cmd_fit(c_fit, fit, independent, meas_flag, cov_flag);
    if (rel->parsed()) return cmd_reliability(c_rel, rel, fit_dir_flag, covproc_flag);
    if (sim->parsed()) return cmd_simulate(c_sim, sim);
    if (study->parsed()) return cmd_study(c_study, study);
    if (covfit->parsed()) return cmd_covfit(c_cov, covfit, covfit_cov_flag);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const SamplerError& e) {
    std::cerr << "sampler error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
