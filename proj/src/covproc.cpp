#include "degpath/covproc.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "degpath/errors.hpp"
#include "degpath/neldermead.hpp"
#include "degpath/parallel.hpp"

namespace degpath {

namespace {
constexpr double kPeriod = 365.0;
constexpr double kTwoPi = 2.0 * M_PI;

double wave(double t, double phase, bool cosine) {
  double arg = kTwoPi * (t - phase) / kPeriod;
  return cosine ? std::cos(arg) : std::sin(arg);
}

Eigen::MatrixXd chol_or_zero(const Eigen::MatrixXd& s) {
  if (s.norm() == 0.0) return Eigen::MatrixXd::Zero(s.rows(), s.cols());
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success)
    throw DataError("innovation covariance is not positive definite");
  return llt.matrixL();
}
}  // namespace

Modulation modulation_from_string(const std::string& s) {
  if (s == "offset") return Modulation::offset;
  if (s == "plain") return Modulation::plain;
  if (s == "none") return Modulation::none;
  throw ConfigError("unknown modulation '" + s + "' (use offset|plain|none)");
}

const char* to_string(Modulation m) {
  switch (m) {
    case Modulation::offset: return "offset";
    case Modulation::plain: return "plain";
    default: return "none";
  }
}

double SeasonalComponent::mean_at(double t) const {
  return mu + kappa * wave(t, phase, cosine);
}

double SeasonalComponent::noise_scale_at(double t) const {
  switch (modulation) {
    case Modulation::offset:
      return 1.0 + upsilon * (1.0 + wave(t, noise_phase, false));
    case Modulation::plain:
      return 1.0 + upsilon * wave(t, noise_phase, false);
    default:
      return 1.0;
  }
}

double CovariateProcessModel::companion_spectral_radius() const {
  const int m = num_covariates();
  if (phi1.size() == 0 || (phi1.norm() == 0.0 && phi2.norm() == 0.0)) return 0.0;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  companion.topLeftCorner(m, m) = phi1;
  companion.topRightCorner(m, m) = phi2;
  companion.bottomLeftCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
  return companion.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

// Simulate the VAR(2) residual sequence for `steps` days given the two
// previous residuals (most recent first).
Eigen::MatrixXd simulate_resid(const CovariateProcessModel& model, int steps,
                               Eigen::VectorXd e1, Eigen::VectorXd e2, Rng& rng) {
  const int m = model.num_covariates();
  Eigen::MatrixXd chol = chol_or_zero(model.sigma_e);
  const bool has_var = model.phi1.size() > 0 && (model.phi1.norm() > 0.0 || model.phi2.norm() > 0.0);
  Eigen::MatrixXd out(steps, m);
  for (int t = 0; t < steps; ++t) {
    Eigen::VectorXd eps = chol * rng.normal_vector(m);
    if (has_var) eps += model.phi1 * e1 + model.phi2 * e2;
    out.row(t) = eps.transpose();
    e2 = std::move(e1);
    e1 = std::move(eps);
  }
  return out;
}

Eigen::MatrixXd assemble(const CovariateProcessModel& model, double first_day,
                         const Eigen::MatrixXd& resid) {
  const int m = model.num_covariates();
  Eigen::MatrixXd out(resid.rows(), m);
  for (Eigen::Index t = 0; t < resid.rows(); ++t) {
    double day = first_day + static_cast<double>(t);
    for (int c = 0; c < m; ++c) {
      const auto& s = model.seasonal[c];
      out(t, c) = s.mean_at(day) + s.noise_scale_at(day) * resid(t, c);
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd simulate_process(const CovariateProcessModel& model, int horizon_days,
                                 Rng& rng) {
  if (!model.stationary())
    throw DataError("VAR(2) part is non-stationary (companion spectral radius >= 1)");
  const int m = model.num_covariates();
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
  const bool has_var =
      model.phi1.size() > 0 && (model.phi1.norm() > 0.0 || model.phi2.norm() > 0.0);
  const int burnin = has_var ? 100 : 0;
  Eigen::MatrixXd resid = simulate_resid(model, horizon_days + burnin, zero, zero, rng);
  return assemble(model, 1.0, resid.bottomRows(horizon_days));
}

Eigen::MatrixXd forecast(const CovariateProcessModel& model, double from_day,
                         int horizon_days, Rng& rng) {
  if (!model.stationary())
    throw DataError("VAR(2) part is non-stationary (companion spectral radius >= 1)");
  const int m = model.num_covariates();
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(m), e2 = Eigen::VectorXd::Zero(m);
  if (model.tail_resid1.size() == m && from_day == model.last_day + 1.0) {
    e1 = model.tail_resid1;
    e2 = model.tail_resid2;
  }
  Eigen::MatrixXd resid = simulate_resid(model, horizon_days, e1, e2, rng);
  return assemble(model, from_day, resid);
}

SeasonalComponent fit_mean(const std::vector<double>& days,
                           const std::vector<double>& values, const MeanFitOptions& opt) {
  if (days.size() != values.size() || days.size() < 8)
    throw DataError("mean fit needs matching day/value series of length >= 8");
  const int n = static_cast<int>(days.size());

  // Linear harmonic regression for starting values of (mu, kappa, phase).
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = std::sin(kTwoPi * days[i] / kPeriod);
    x(i, 2) = std::cos(kTwoPi * days[i] / kPeriod);
    y[i] = values[i];
  }
  Eigen::Vector3d ols = (x.transpose() * x).ldlt().solve(x.transpose() * y);
  // a sin(wt) + b cos(wt) = kappa * wave(t - phase); solve for amplitude/phase.
  double amp = std::hypot(ols[1], ols[2]);
  double phase0;
  if (opt.cosine)
    phase0 = std::atan2(ols[1], ols[2]) * kPeriod / kTwoPi;
  else
    phase0 = -std::atan2(ols[2], ols[1]) * kPeriod / kTwoPi;

  auto objective = [&](const Eigen::VectorXd& p) {
    SeasonalComponent s;
    s.mu = p[0];
    s.kappa = p[1];
    s.phase = p[2];
    s.cosine = opt.cosine;
    s.modulation = opt.fit_modulation ? opt.modulation : Modulation::none;
    if (opt.fit_modulation) {
      s.upsilon = p[3];
      s.noise_phase = p[4];
      if (std::abs(s.upsilon) > 5.0) return std::numeric_limits<double>::infinity();
    }
    // Profile out the residual variance: minimize
    // sum log h + n/2 log(sum (r/h)^2).
    double log_h = 0.0, rss = 0.0;
    for (int i = 0; i < n; ++i) {
      double h = s.noise_scale_at(days[i]);
      if (!(h > 1e-3)) return std::numeric_limits<double>::infinity();
      double r = (values[i] - s.mean_at(days[i])) / h;
      log_h += std::log(h);
      rss += r * r;
    }
    if (!(rss > 0.0)) return log_h;  // perfect fit
    return log_h + 0.5 * n * std::log(rss / n);
  };

  const int dim = opt.fit_modulation ? 5 : 3;
  Rng rng(opt.seed);
  NelderMeadResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    Eigen::VectorXd start(dim);
    start[0] = ols[0];
    start[1] = amp;
    start[2] = phase0;
    if (opt.fit_modulation) {
      start[3] = 0.1;
      start[4] = phase0;
    }
    if (r > 0) {
      start[0] += rng.normal(0.0, 0.1 * (std::abs(ols[0]) + 1.0));
      start[1] *= std::exp(rng.normal(0.0, 0.2));
      start[2] += rng.normal(0.0, 30.0);
      if (opt.fit_modulation) {
        start[3] = rng.uniform(0.0, 0.6);
        start[4] = rng.uniform(0.0, kPeriod);
      }
    }
    NelderMeadOptions nm;
    nm.tolerance = 1e-8;
    nm.max_iterations = 4000;
    auto res = nelder_mead(objective, start, nm);
    if (res.value < best.value) best = res;
  }
  if (!std::isfinite(best.value))
    throw DataError("seasonal mean fit failed to converge");

  SeasonalComponent s;
  s.mu = best.x[0];
  s.kappa = best.x[1];
  s.phase = best.x[2];
  s.cosine = opt.cosine;
  s.modulation = opt.fit_modulation ? opt.modulation : Modulation::none;
  if (opt.fit_modulation) {
    s.upsilon = best.x[3];
    s.noise_phase = best.x[4];
  }
  // Canonical form: positive amplitudes and phases folded into [0, period).
  if (s.kappa < 0.0) {
    s.kappa = -s.kappa;
    s.phase += kPeriod / 2.0;
  }
  if (s.upsilon < 0.0) {
    s.upsilon = -s.upsilon;
    s.noise_phase += kPeriod / 2.0;
  }
  s.phase = std::fmod(std::fmod(s.phase, kPeriod) + kPeriod, kPeriod);
  s.noise_phase = std::fmod(std::fmod(s.noise_phase, kPeriod) + kPeriod, kPeriod);
  return s;
}

void fit_var2(const Eigen::MatrixXd& residuals, Eigen::MatrixXd& phi1,
              Eigen::MatrixXd& phi2, Eigen::MatrixXd& sigma_e) {
  const Eigen::Index t = residuals.rows();
  const Eigen::Index m = residuals.cols();
  if (t <= 2 * m + 2) throw DataError("VAR(2) fit needs more than 2M+2 rows");
  const Eigen::Index rows = t - 2;
  if (residuals.norm() < 1e-8 * std::sqrt(static_cast<double>(t))) {
    // Degenerate noiseless series: nothing to regress on.
    phi1 = Eigen::MatrixXd::Zero(m, m);
    phi2 = Eigen::MatrixXd::Zero(m, m);
    sigma_e = Eigen::MatrixXd::Zero(m, m);
    return;
  }
  Eigen::MatrixXd design(rows, 2 * m);
  design.leftCols(m) = residuals.middleRows(1, rows);   // epsilon(t-1)
  design.rightCols(m) = residuals.middleRows(0, rows);  // epsilon(t-2)
  Eigen::MatrixXd response = residuals.bottomRows(rows);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 2 * m) throw DataError("VAR(2) regressor matrix is rank deficient");
  Eigen::MatrixXd coef = qr.solve(response);  // 2M x M, rows stack [phi1^T; phi2^T]
  phi1 = coef.topRows(m).transpose();
  phi2 = coef.bottomRows(m).transpose();
  Eigen::MatrixXd innov = response - design * coef;
  sigma_e = innov.transpose() * innov / static_cast<double>(rows - 2 * m);
}

CovariateProcessModel fit_covariate_process(const Eigen::MatrixXd& daily_values,
                                            double first_day,
                                            const CovariateFitOptions& options) {
  const Eigen::Index t = daily_values.rows();
  const int m = static_cast<int>(daily_values.cols());
  CovariateProcessModel model;
  std::vector<double> days(t);
  for (Eigen::Index i = 0; i < t; ++i) days[i] = first_day + static_cast<double>(i);

  Eigen::MatrixXd resid(t, m);
  for (int c = 0; c < m; ++c) {
    MeanFitOptions mo = c < static_cast<int>(options.mean.size()) ? options.mean[c]
                                                                  : MeanFitOptions{};
    std::vector<double> v(t);
    for (Eigen::Index i = 0; i < t; ++i) v[i] = daily_values(i, c);
    SeasonalComponent s = fit_mean(days, v, mo);
    model.seasonal.push_back(s);
    for (Eigen::Index i = 0; i < t; ++i)
      resid(i, c) = (daily_values(i, c) - s.mean_at(days[i])) / s.noise_scale_at(days[i]);
  }
  fit_var2(resid, model.phi1, model.phi2, model.sigma_e);
  model.tail_resid1 = resid.row(t - 1).transpose();
  model.tail_resid2 = resid.row(t - 2).transpose();
  model.last_day = first_day + static_cast<double>(t - 1);
  return model;
}

BootstrapResult bootstrap_covariate_process(const CovariateProcessModel& fitted,
                                            const Eigen::MatrixXd& daily_values,
                                            double first_day, int n_boot,
                                            std::uint64_t seed, int threads,
                                            const CovariateFitOptions& options) {
  BootstrapResult out;
  if (n_boot <= 0) return out;
  const int t = static_cast<int>(daily_values.rows());
  std::vector<std::optional<CovariateProcessModel>> slots(n_boot);
  std::vector<std::uint8_t> failed(n_boot, 0);
  parallel_for(static_cast<std::size_t>(n_boot), threads, [&](std::size_t b) {
    Rng rng = Rng::stream(seed, 0xb007ULL, b);
    try {
      Eigen::MatrixXd resid = simulate_resid(fitted, t + 100, Eigen::VectorXd::Zero(fitted.num_covariates()),
                                             Eigen::VectorXd::Zero(fitted.num_covariates()), rng);
      Eigen::MatrixXd series = assemble(fitted, first_day, resid.bottomRows(t));
      slots[b] = fit_covariate_process(series, first_day, options);
    } catch (const std::exception&) {
      failed[b] = 1;
    }
  });
  for (int b = 0; b < n_boot; ++b) {
    if (slots[b])
      out.draws.push_back(std::move(*slots[b]));
    else
      ++out.failed;
  }
  return out;
}

std::string CovariateProcessModel::to_json() const {
  nlohmann::json j;
  for (const auto& s : seasonal) {
    nlohmann::json c;
    c["mu"] = s.mu;
    c["kappa"] = s.kappa;
    c["phase"] = s.phase;
    c["waveform"] = s.cosine ? "cos" : "sin";
    c["upsilon"] = s.upsilon;
    c["noise_phase"] = s.noise_phase;
    c["modulation"] = to_string(s.modulation);
    j["covariates"].push_back(c);
  }
  auto mat = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  j["period_days"] = kPeriod;
  j["phi1"] = mat(phi1);
  j["phi2"] = mat(phi2);
  j["sigma_e"] = mat(sigma_e);
  if (tail_resid1.size() > 0) {
    j["tail_resid1"] = std::vector<double>(tail_resid1.data(), tail_resid1.data() + tail_resid1.size());
    j["tail_resid2"] = std::vector<double>(tail_resid2.data(), tail_resid2.data() + tail_resid2.size());
    j["last_day"] = last_day;
  }
  return j.dump(2);
}

CovariateProcessModel CovariateProcessModel::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw DataError(std::string("covariate model JSON: ") + e.what());
  }
  CovariateProcessModel model;
  auto mat = [](const nlohmann::json& rows) {
    Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c].get<double>();
    return m;
  };
  try {
    for (const auto& c : j.at("covariates")) {
      SeasonalComponent s;
      s.mu = c.at("mu").get<double>();
      s.kappa = c.at("kappa").get<double>();
      s.phase = c.at("phase").get<double>();
      s.cosine = c.value("waveform", "sin") == std::string("cos");
      s.upsilon = c.value("upsilon", 0.0);
      s.noise_phase = c.value("noise_phase", 0.0);
      s.modulation = modulation_from_string(c.value("modulation", "offset"));
      model.seasonal.push_back(s);
    }
    model.phi1 = mat(j.at("phi1"));
    model.phi2 = mat(j.at("phi2"));
    model.sigma_e = mat(j.at("sigma_e"));
    if (j.contains("tail_resid1")) {
      auto v1 = j["tail_resid1"].get<std::vector<double>>();
      auto v2 = j["tail_resid2"].get<std::vector<double>>();
      model.tail_resid1 = Eigen::Map<Eigen::VectorXd>(v1.data(), static_cast<Eigen::Index>(v1.size()));
      model.tail_resid2 = Eigen::Map<Eigen::VectorXd>(v2.data(), static_cast<Eigen::Index>(v2.size()));
      model.last_day = j.value("last_day", 0.0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("covariate model JSON: ") + e.what());
  }
  return model;
}

}  // namespace degpath
