#include "degpath/fit.hpp"

#include <algorithm>
#include <cmath>

#include "degpath/errors.hpp"

namespace degpath {

int FitResult::column(const std::string& name) const {
  for (std::size_t i = 0; i < constrained.names.size(); ++i)
    if (constrained.names[i] == name) return static_cast<int>(i);
  return -1;
}

FitResult fit_model(const DegradationDataset& data, const FitOptions& options) {
  data.validate();
  std::vector<SplineBasis> bases;
  for (int m = 0; m < data.num_covariates; ++m) {
    auto [lo, hi] = data.covariate_range(m);
    double pad = options.domain_pad * (hi - lo);
    if (!(hi > lo)) throw DataError("covariate " + std::to_string(m + 1) + " is constant");
    bases.emplace_back(lo - pad, hi + pad, options.model.q[m], options.model.degree);
  }
  auto posterior =
      std::make_shared<Posterior>(data, std::move(bases), options.model);

  LogDensityFn target = [p = posterior.get()](const Eigen::VectorXd& v,
                                              Eigen::VectorXd* grad) {
    return p->log_density(v, grad);
  };
  InitFn init = [p = posterior.get()](int, Rng& rng) { return p->initial_point(rng); };
  PosteriorSamples raw = sample(target, posterior->dim(), options.sampler, init);

  FitResult fit;
  fit.posterior = posterior;
  fit.constrained = raw.transformed(posterior->constrained_names(),
                                    [p = posterior.get()](const Eigen::VectorXd& v) {
                                      return p->constrained_vector(v);
                                    });
  fit.summary = summarize(fit.constrained);
  if (fit.constrained.num_chains() >= 2 && fit.constrained.kept() >= 4) {
    fit.rhat = split_rhat(fit.constrained);
    fit.ess = effective_sample_size(fit.constrained);
  }
  return fit;
}

std::vector<PathParameterDraw> extract_path_draws(const FitResult& fit, int max_draws) {
  const ParamLayout& lay = fit.posterior->layout();
  return path_draws_from_table(fit.constrained.names, fit.constrained.stacked(),
                               lay.num_dcs, lay.num_covariates, lay.q, max_draws);
}

std::vector<PathParameterDraw> path_draws_from_table(
    const std::vector<std::string>& names, const Eigen::MatrixXd& all, int J, int M,
    const std::vector<int>& q, int max_draws) {
  const long total = all.rows();
  const long take = std::min<long>(total, std::max(1, max_draws));
  const double stride = static_cast<double>(total) / static_cast<double>(take);

  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    throw DataError("missing draw column " + name);
  };

  std::vector<PathParameterDraw> out;
  out.reserve(take);
  for (long d = 0; d < take; ++d) {
    const Eigen::Index r = static_cast<Eigen::Index>(d * stride);
    PathParameterDraw pd;
    pd.alpha.resize(J);
    pd.gamma.resize(J);
    pd.beta.assign(J, std::vector<Eigen::VectorXd>(M));
    for (int j = 0; j < J; ++j) {
      pd.alpha[j] = all(r, col("alpha." + std::to_string(j + 1)));
      pd.gamma[j] = all(r, col("gamma." + std::to_string(j + 1)));
      for (int m = 0; m < M; ++m) {
        Eigen::VectorXd beta(q[m]);
        for (int qi = 0; qi < q[m]; ++qi)
          beta[qi] = all(r, col("beta." + std::to_string(j + 1) + "." +
                                std::to_string(m + 1) + "." + std::to_string(qi + 1)));
        pd.beta[j][m] = std::move(beta);
      }
    }
    Eigen::MatrixXd cov(J, J);
    for (int j = 0; j < J; ++j)
      cov(j, j) = std::pow(all(r, col("sigma_w." + std::to_string(j + 1))), 2);
    for (int j = 0; j < J; ++j)
      for (int jp = j + 1; jp < J; ++jp) {
        double rho = all(r, col("rho." + std::to_string(j + 1) + "." + std::to_string(jp + 1)));
        double c = rho * std::sqrt(cov(j, j) * cov(jp, jp));
        cov(j, jp) = cov(jp, j) = c;
      }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
      // Rounding can push a near-singular draw slightly indefinite.
      llt.compute(cov + 1e-12 * Eigen::MatrixXd::Identity(J, J));
      if (llt.info() != Eigen::Success)
        throw SamplerError("random-effect covariance draw is not positive definite");
    }
    pd.sigma_chol = llt.matrixL();
    out.push_back(std::move(pd));
  }
  return out;
}

EffectBand effect_band(const FitResult& fit, int dc, int covariate,
                       const std::vector<double>& grid) {
  const ParamLayout& lay = fit.posterior->layout();
  const SplineBasis& basis = fit.bases()[covariate];
  Eigen::MatrixXd all = fit.constrained.stacked();
  const int q = lay.q[covariate];
  std::vector<int> cols(q);
  for (int qi = 0; qi < q; ++qi) {
    cols[qi] = fit.column("beta." + std::to_string(dc + 1) + "." +
                          std::to_string(covariate + 1) + "." + std::to_string(qi + 1));
    if (cols[qi] < 0) throw DataError("missing beta column");
  }
  Eigen::MatrixXd basis_at(static_cast<Eigen::Index>(grid.size()), q);
  for (std::size_t g = 0; g < grid.size(); ++g)
    basis_at.row(static_cast<Eigen::Index>(g)) = basis.eval(grid[g], /*clamp=*/true).transpose();

  EffectBand band;
  band.grid = grid;
  band.median.resize(grid.size());
  band.lower.resize(grid.size());
  band.upper.resize(grid.size());
  Eigen::MatrixXd betas(all.rows(), q);
  for (int qi = 0; qi < q; ++qi) betas.col(qi) = all.col(cols[qi]);
  Eigen::MatrixXd values = betas * basis_at.transpose();  // draws x grid
  std::vector<double> column(values.rows());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (Eigen::Index r = 0; r < values.rows(); ++r)
      column[static_cast<std::size_t>(r)] = values(r, static_cast<Eigen::Index>(g));
    band.median[g] = quantile(column, 0.5);
    band.lower[g] = quantile(column, 0.025);
    band.upper[g] = quantile(column, 0.975);
  }
  return band;
}

}  // namespace degpath
