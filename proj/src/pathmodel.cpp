#include "degpath/pathmodel.hpp"

#include <cmath>
#include <stdexcept>

namespace degpath {

Eigen::MatrixXd ModelState::random_effect_cov() const {
  Eigen::MatrixXd L = random_effect_chol();
  return L * L.transpose();
}

Eigen::MatrixXd ModelState::random_effect_chol() const {
  return sigma_w.asDiagonal() * corr_chol;
}

double total_cumulative_effect(const std::vector<CumulativeEffect>& g_per_covariate,
                               const std::vector<Eigen::VectorXd>& beta_per_covariate,
                               int k) {
  if (g_per_covariate.size() != beta_per_covariate.size())
    throw std::invalid_argument("covariate count mismatch");
  double tau = 0.0;
  for (std::size_t m = 0; m < g_per_covariate.size(); ++m) {
    if (g_per_covariate[m].g.cols() != beta_per_covariate[m].size())
      throw std::invalid_argument("basis size mismatch for covariate " + std::to_string(m + 1));
    tau += g_per_covariate[m].value(k, beta_per_covariate[m]);
  }
  return tau;
}

double degradation_mean(double tau, double alpha, double gamma, double w) {
  if (!(alpha > 0.0) || !(gamma > 0.0))
    throw std::domain_error("alpha and gamma must be positive");
  if (!(tau > 0.0)) return 0.0;  // no exposure, no degradation
  double x = std::log(tau) / gamma;
  double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  return -alpha * std::exp(w) * s;
}

std::vector<Eigen::MatrixXd> predict_paths(const ModelState& state,
                                           const DegradationDataset& data,
                                           const std::vector<SplineBasis>& bases,
                                           bool clamp_covariates) {
  const int J = data.num_dcs;
  const int M = data.num_covariates;
  if (state.num_dcs() != J || static_cast<int>(bases.size()) != M)
    throw std::invalid_argument("state/bases do not match dataset dimensions");

  std::vector<Eigen::MatrixXd> out(data.specimens.size());
  for (std::size_t i = 0; i < data.specimens.size(); ++i) {
    const Specimen& s = data.specimens[i];
    const int n = static_cast<int>(s.measure_times.size());
    std::vector<CumulativeEffect> g(M);
    for (int m = 0; m < M; ++m) {
      std::vector<double> values(s.covariates.rows());
      for (Eigen::Index l = 0; l < s.covariates.rows(); ++l) values[l] = s.covariates(l, m);
      g[m] = cumulative_effect(bases[m], s.covariate_times, values, s.measure_times,
                               clamp_covariates);
    }
    Eigen::MatrixXd d(n, J);
    for (int j = 0; j < J; ++j) {
      for (int k = 0; k < n; ++k) {
        double tau = total_cumulative_effect(g, state.beta[j], k);
        d(k, j) = degradation_mean(tau, state.alpha[j], state.gamma[j],
                                   state.w(static_cast<Eigen::Index>(i), j));
      }
    }
    out[i] = std::move(d);
  }
  return out;
}

}  // namespace degpath
