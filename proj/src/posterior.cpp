#include "degpath/posterior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "degpath/errors.hpp"

namespace degpath {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}
}  // namespace

ParamLayout ParamLayout::make(int num_dcs, int num_covariates, int num_specimens,
                              const std::vector<int>& q,
                              const std::vector<ShapeKind>& shapes, bool correlated) {
  if (static_cast<int>(q.size()) != num_covariates ||
      static_cast<int>(shapes.size()) != num_covariates)
    throw ConfigError("need one basis size and one shape per covariate");
  ParamLayout lay;
  lay.num_dcs = num_dcs;
  lay.num_covariates = num_covariates;
  lay.num_specimens = num_specimens;
  lay.q = q;
  lay.shapes = shapes;
  lay.correlated = correlated;

  int pos = 0;
  lay.off_log_alpha = pos;
  pos += num_dcs;
  lay.off_log_gamma = pos;
  pos += num_dcs;
  lay.off_coef.assign(num_dcs, std::vector<int>(num_covariates, 0));
  for (int j = 0; j < num_dcs; ++j)
    for (int m = 0; m < num_covariates; ++m) {
      lay.off_coef[j][m] = pos;
      pos += q[m];
    }
  lay.off_sigma_l = pos;
  pos += 1;
  lay.off_log_lambda2 = pos;
  pos += num_covariates;
  lay.off_log_delta.assign(num_covariates, -1);
  for (int m = 0; m < num_covariates; ++m)
    if (shapes[m] == ShapeKind::convex) {
      lay.off_log_delta[m] = pos;
      pos += 1;
    }
  lay.off_log_sigma_w = pos;
  pos += num_dcs;
  if (correlated) {
    lay.off_corr = pos;
    pos += num_dcs * (num_dcs - 1) / 2;
  }
  lay.off_w = pos;
  pos += num_specimens * num_dcs;
  lay.dim = pos;
  return lay;
}

Posterior::Posterior(const DegradationDataset& data, std::vector<SplineBasis> bases,
                     ModelConfig config) {
  data.validate();
  config_ = std::move(config);
  bases_ = std::move(bases);
  if (static_cast<int>(bases_.size()) != data.num_covariates)
    throw ConfigError("need one spline basis per covariate");
  layout_ = ParamLayout::make(data.num_dcs, data.num_covariates, data.num_specimens(),
                              config_.q, config_.shapes, config_.correlated);
  finish_setup();

  y_.reserve(data.specimens.size());
  g_.reserve(data.specimens.size());
  for (const auto& s : data.specimens) {
    y_.push_back(s.y);
    std::vector<Eigen::MatrixXd> gs;
    for (int m = 0; m < data.num_covariates; ++m) {
      std::vector<double> values(s.covariates.rows());
      for (Eigen::Index l = 0; l < s.covariates.rows(); ++l) values[l] = s.covariates(l, m);
      gs.push_back(cumulative_effect(bases_[m], s.covariate_times, values, s.measure_times)
                       .g);
    }
    g_.push_back(std::move(gs));
    num_obs_ += static_cast<long>(s.measure_times.size()) * data.num_dcs;
  }
}

Posterior Posterior::prior_only(int num_dcs, int num_specimens,
                                std::vector<SplineBasis> bases, ModelConfig config) {
  Posterior p;
  p.config_ = std::move(config);
  p.bases_ = std::move(bases);
  p.layout_ = ParamLayout::make(num_dcs, static_cast<int>(p.bases_.size()), num_specimens,
                                p.config_.q, p.config_.shapes, p.config_.correlated);
  p.finish_setup();
  return p;
}

void Posterior::finish_setup() {
  for (int m = 0; m < layout_.num_covariates; ++m) {
    if (bases_[m].size() != layout_.q[m])
      throw ConfigError("basis size does not match configured q for covariate " +
                        std::to_string(m + 1));
    if (layout_.q[m] < 3 && layout_.shapes[m] == ShapeKind::convex)
      throw ConfigError("convex shape needs at least 3 basis functions");
  }
  config_.prior.validate(layout_.num_covariates, layout_.num_dcs);
}

UnpackedState Posterior::unpack(const Eigen::VectorXd& v) const {
  if (v.size() != layout_.dim) throw std::invalid_argument("parameter vector length mismatch");
  const int J = layout_.num_dcs, M = layout_.num_covariates, I = layout_.num_specimens;
  UnpackedState u;
  u.state.alpha = v.segment(layout_.off_log_alpha, J).array().exp();
  u.state.gamma = v.segment(layout_.off_log_gamma, J).array().exp();
  u.state.beta.assign(J, std::vector<Eigen::VectorXd>(M));
  for (int j = 0; j < J; ++j)
    for (int m = 0; m < M; ++m) {
      const int Q = layout_.q[m];
      const int off = layout_.off_coef[j][m];
      Eigen::VectorXd beta(Q);
      beta[0] = std::exp(v[off]);
      const bool mono = layout_.shapes[m] == ShapeKind::increasing;
      for (int qi = 1; qi < Q; ++qi) {
        double inc = mono ? std::exp(v[off + qi]) : v[off + qi];
        beta[qi] = beta[qi - 1] + inc;
      }
      u.state.beta[j][m] = std::move(beta);
    }
  u.state.sigma = std::exp(v[layout_.off_sigma_l]);
  u.lambda2 = v.segment(layout_.off_log_lambda2, M).array().exp();
  u.delta = Eigen::VectorXd::Constant(M, std::numeric_limits<double>::quiet_NaN());
  for (int m = 0; m < M; ++m)
    if (layout_.off_log_delta[m] >= 0) u.delta[m] = std::exp(v[layout_.off_log_delta[m]]);
  u.state.sigma_w = v.segment(layout_.off_log_sigma_w, J).array().exp();

  u.state.corr_chol = Eigen::MatrixXd::Identity(J, J);
  if (layout_.correlated) {
    int pos = layout_.off_corr;
    for (int i = 1; i < J; ++i) {
      double rem = 1.0;
      for (int jc = 0; jc < i; ++jc) {
        double z = std::tanh(v[pos++]);
        u.state.corr_chol(i, jc) = z * std::sqrt(rem);
        rem *= (1.0 - z * z);
      }
      u.state.corr_chol(i, i) = std::sqrt(rem);
    }
  }

  u.state.w.resize(I, J);
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) u.state.w(i, j) = v[layout_.w_index(i, j)];
  return u;
}

Eigen::VectorXd Posterior::pack(const UnpackedState& u) const {
  const int J = layout_.num_dcs, M = layout_.num_covariates, I = layout_.num_specimens;
  Eigen::VectorXd v(layout_.dim);
  for (int j = 0; j < J; ++j) {
    v[layout_.off_log_alpha + j] = std::log(u.state.alpha[j]);
    v[layout_.off_log_gamma + j] = std::log(u.state.gamma[j]);
  }
  for (int j = 0; j < J; ++j)
    for (int m = 0; m < M; ++m) {
      const int Q = layout_.q[m];
      const int off = layout_.off_coef[j][m];
      const auto& beta = u.state.beta[j][m];
      if (beta.size() != Q) throw std::invalid_argument("beta length mismatch in pack");
      v[off] = std::log(beta[0]);
      const bool mono = layout_.shapes[m] == ShapeKind::increasing;
      for (int qi = 1; qi < Q; ++qi) {
        double inc = beta[qi] - beta[qi - 1];
        v[off + qi] = mono ? std::log(inc) : inc;
      }
    }
  v[layout_.off_sigma_l] = std::log(u.state.sigma);
  for (int m = 0; m < M; ++m) v[layout_.off_log_lambda2 + m] = std::log(u.lambda2[m]);
  for (int m = 0; m < M; ++m)
    if (layout_.off_log_delta[m] >= 0) v[layout_.off_log_delta[m]] = std::log(u.delta[m]);
  for (int j = 0; j < J; ++j)
    v[layout_.off_log_sigma_w + j] = std::log(u.state.sigma_w[j]);
  if (layout_.correlated) {
    int pos = layout_.off_corr;
    const Eigen::MatrixXd& L = u.state.corr_chol;
    for (int i = 1; i < J; ++i) {
      double rem = 1.0;
      for (int jc = 0; jc < i; ++jc) {
        double z = L(i, jc) / std::sqrt(rem);
        v[pos++] = std::atanh(z);
        rem *= (1.0 - z * z);
      }
    }
  }
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) v[layout_.w_index(i, j)] = u.state.w(i, j);
  return v;
}

Eigen::VectorXd Posterior::initial_point(Rng& rng) const {
  Eigen::VectorXd v(layout_.dim);
  for (int k = 0; k < layout_.dim; ++k) v[k] = rng.uniform(-1.0, 1.0);
  v.segment(layout_.off_w, layout_.num_specimens * layout_.num_dcs).setZero();
  return v;
}

double Posterior::log_density(const Eigen::VectorXd& v, Eigen::VectorXd* grad) const {
  const ParamLayout& lay = layout_;
  const int J = lay.num_dcs, M = lay.num_covariates, I = lay.num_specimens;
  if (v.size() != lay.dim) throw std::invalid_argument("parameter vector length mismatch");
  if (grad) {
    grad->resize(lay.dim);
    grad->setZero();
  }
  if (!v.allFinite()) return kNegInf;

  auto fail = [&]() {
    if (grad) grad->setZero();
    return kNegInf;
  };

  double lp = 0.0;

  // --- unpack with intermediates ---
  Eigen::VectorXd alpha(J), gamma(J);
  for (int j = 0; j < J; ++j) {
    alpha[j] = std::exp(v[lay.off_log_alpha + j]);
    gamma[j] = std::exp(v[lay.off_log_gamma + j]);
  }
  const auto& ab = config_.prior.alpha_bounds;
  const auto& gb = config_.prior.gamma_bounds;
  for (int j = 0; j < J; ++j) {
    if (!ab.empty() && (alpha[j] < ab[j].first || alpha[j] > ab[j].second)) return fail();
    if (!gb.empty() && (gamma[j] < gb[j].first || gamma[j] > gb[j].second)) return fail();
  }
  if (!config_.prior.sigma_l_bounds.empty()) {
    auto [lo, hi] = config_.prior.sigma_l_bounds[0];
    if (v[lay.off_sigma_l] < lo || v[lay.off_sigma_l] > hi) return fail();
  }

  std::vector<std::vector<Eigen::VectorXd>> beta(J, std::vector<Eigen::VectorXd>(M));
  std::vector<std::vector<Eigen::VectorXd>> inc(J, std::vector<Eigen::VectorXd>(M));
  for (int j = 0; j < J; ++j)
    for (int m = 0; m < M; ++m) {
      const int Q = lay.q[m];
      const int off = lay.off_coef[j][m];
      const bool mono = lay.shapes[m] == ShapeKind::increasing;
      Eigen::VectorXd b(Q), u(Q - 1);
      b[0] = std::exp(v[off]);
      for (int qi = 1; qi < Q; ++qi) {
        u[qi - 1] = mono ? std::exp(v[off + qi]) : v[off + qi];
        b[qi] = b[qi - 1] + u[qi - 1];
      }
      beta[j][m] = std::move(b);
      inc[j][m] = std::move(u);
    }

  const double sigma_l = v[lay.off_sigma_l];
  const double inv_sig2 = std::exp(-2.0 * sigma_l);

  Eigen::VectorXd lambda2(M);
  for (int m = 0; m < M; ++m) lambda2[m] = std::exp(v[lay.off_log_lambda2 + m]);
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(M);
  for (int m = 0; m < M; ++m)
    if (lay.off_log_delta[m] >= 0) delta[m] = std::exp(v[lay.off_log_delta[m]]);

  Eigen::VectorXd sigma_w(J);
  for (int j = 0; j < J; ++j) sigma_w[j] = std::exp(v[lay.off_log_sigma_w + j]);

  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(J, J);
  Eigen::MatrixXd rem_before;  // rem value entering each (row, col) step
  Eigen::VectorXd z_cpc;
  if (lay.correlated) {
    rem_before = Eigen::MatrixXd::Ones(J, J);
    z_cpc.resize(lay.corr_count());
    int pos = 0;
    for (int i = 1; i < J; ++i) {
      double rem = 1.0;
      for (int jc = 0; jc < i; ++jc) {
        double z = std::tanh(v[lay.off_corr + pos]);
        z_cpc[pos] = z;
        rem_before(i, jc) = rem;
        L(i, jc) = z * std::sqrt(rem);
        rem *= (1.0 - z * z);
        ++pos;
      }
      rem_before(i, i) = rem;
      L(i, i) = std::sqrt(rem);
      if (!(L(i, i) > 0.0)) return fail();
    }
  }

  // --- transform Jacobians for flat-prior parameters ---
  // alpha, gamma, beta_1 carry flat priors on the positive scale; the
  // exp transform contributes the log of each parameter.
  for (int j = 0; j < J; ++j)
    lp += v[lay.off_log_alpha + j] + v[lay.off_log_gamma + j];
  if (grad)
    for (int j = 0; j < J; ++j) {
      (*grad)[lay.off_log_alpha + j] += 1.0;
      (*grad)[lay.off_log_gamma + j] += 1.0;
    }
  const double b1_scale = config_.prior.beta1_halfnormal_scale;
  for (int j = 0; j < J; ++j)
    for (int m = 0; m < M; ++m) {
      const int off = lay.off_coef[j][m];
      lp += v[off];
      if (grad) (*grad)[off] += 1.0;
      if (b1_scale > 0.0) {
        const double b1 = beta[j][m][0];
        lp += priors::log_halfnormal(b1, b1_scale);
        if (grad) (*grad)[off] += -b1 * b1 / (b1_scale * b1_scale);
      }
    }

  // --- scalar hyperparameter priors (with their transform Jacobians) ---
  for (int m = 0; m < M; ++m) {
    const double a = config_.prior.ig_a[m], b = config_.prior.ig_b[m];
    const int off = lay.off_log_lambda2 + m;
    lp += priors::log_invgamma(lambda2[m], a, b) + v[off];
    if (grad) (*grad)[off] += -(a + 1.0) + b / lambda2[m] + 1.0;
  }
  for (int m = 0; m < M; ++m) {
    if (lay.off_log_delta[m] < 0) continue;
    const int off = lay.off_log_delta[m];
    const double eta = config_.prior.eta;
    lp += priors::log_halfnormal(delta[m], eta) + v[off];
    if (grad) (*grad)[off] += -delta[m] * delta[m] / (eta * eta) + 1.0;
  }
  for (int j = 0; j < J; ++j) {
    const int off = lay.off_log_sigma_w + j;
    const double a = config_.prior.cauchy_scale;
    const double s2 = sigma_w[j] * sigma_w[j];
    lp += priors::log_halfcauchy(sigma_w[j], a) + v[off];
    if (grad) (*grad)[off] += -2.0 * s2 / (a * a + s2) + 1.0;
  }

  // --- correlation prior ---
  // LKJ plus the tanh and factor Jacobians collapse to independent scaled
  // Beta kernels on the canonical partial correlations (constants dropped).
  if (lay.correlated) {
    int pos = 0;
    for (int i = 1; i < J; ++i)
      for (int jc = 0; jc < i; ++jc, ++pos) {
        const double lag = static_cast<double>(i - jc);
        const double b = config_.prior.zeta + 0.5 * (J - 1.0 - lag);
        const double z = z_cpc[pos];
        lp += b * std::log1p(-z * z);
        if (grad) (*grad)[lay.off_corr + pos] += -2.0 * b * z;
      }
  }

  // --- coefficient-increment priors + convexity penalty ---
  // Gradients with respect to increments accumulate in gu; the likelihood's
  // beta-space gradients join below via suffix sums.
  std::vector<std::vector<Eigen::VectorXd>> gu, gbeta;
  if (grad) {
    gu.assign(J, std::vector<Eigen::VectorXd>(M));
    gbeta.assign(J, std::vector<Eigen::VectorXd>(M));
    for (int j = 0; j < J; ++j)
      for (int m = 0; m < M; ++m) {
        gu[j][m] = Eigen::VectorXd::Zero(lay.q[m] - 1);
        gbeta[j][m] = Eigen::VectorXd::Zero(lay.q[m]);
      }
  }
  for (int j = 0; j < J; ++j)
    for (int m = 0; m < M; ++m) {
      const auto& u = inc[j][m];
      const double l2 = lambda2[m];
      const int n_u = static_cast<int>(u.size());
      const int t_off = lay.off_log_lambda2 + m;
      if (lay.shapes[m] == ShapeKind::increasing) {
        lp += priors::log_truncnorm(u, l2);
        if (grad) {
          // u = exp(v): include the Jacobian sum directly.
          for (int qi = 0; qi < n_u; ++qi) {
            lp += v[lay.off_coef[j][m] + 1 + qi];
            gu[j][m][qi] += -u[qi] / l2;
            (*grad)[lay.off_coef[j][m] + 1 + qi] += 1.0;
            (*grad)[t_off] += -0.5 + u[qi] * u[qi] / (2.0 * l2);
          }
        } else {
          for (int qi = 0; qi < n_u; ++qi) lp += v[lay.off_coef[j][m] + 1 + qi];
        }
      } else {
        lp += priors::log_rw(u, l2);
        if (grad) {
          gu[j][m] += -u / l2;
          (*grad)[t_off] += -0.5 * n_u + u.squaredNorm() / (2.0 * l2);
        }
      }
      if (lay.shapes[m] == ShapeKind::convex) {
        const double d2inv = 1.0 / (delta[m] * delta[m]);
        const int d_off = lay.off_log_delta[m];
        for (int qi = 1; qi < n_u; ++qi) {
          const double d = u[qi] - u[qi - 1];
          if (d < 0.0) {
            lp += -0.5 * d * d * d2inv;
            if (grad) {
              gu[j][m][qi] += -d * d2inv;
              gu[j][m][qi - 1] += d * d2inv;
              (*grad)[d_off] += d * d * d2inv;
            }
          }
        }
      }
    }

  // --- random effects ---
  // A = diag(sigma_w) L is the Cholesky factor of Sigma.
  Eigen::MatrixXd grad_A;
  if (I > 0) {
    Eigen::MatrixXd A = sigma_w.asDiagonal() * L;
    double logdet = 0.0;
    for (int j = 0; j < J; ++j) logdet += std::log(A(j, j));
    lp += -static_cast<double>(I) * (logdet + 0.5 * J * kLog2Pi);
    if (grad) grad_A = Eigen::MatrixXd::Zero(J, J);
    Eigen::VectorXd wi(J), vi(J), hi(J);
    for (int i = 0; i < I; ++i) {
      for (int j = 0; j < J; ++j) wi[j] = v[lay.w_index(i, j)];
      vi = A.triangularView<Eigen::Lower>().solve(wi);
      lp += -0.5 * vi.squaredNorm();
      if (grad) {
        hi = A.transpose().triangularView<Eigen::Upper>().solve(vi);
        for (int j = 0; j < J; ++j) (*grad)[lay.w_index(i, j)] += -hi[j];
        grad_A.triangularView<Eigen::Lower>() += hi * vi.transpose();
      }
    }
    if (grad) {
      for (int j = 0; j < J; ++j) grad_A(j, j) += -static_cast<double>(I) / A(j, j);
      // A depends on sigma_w (row scale) and on L.
      for (int p = 0; p < J; ++p) {
        double acc = 0.0;
        for (int qc = 0; qc <= p; ++qc) acc += grad_A(p, qc) * A(p, qc);
        (*grad)[lay.off_log_sigma_w + p] += acc;
      }
      if (lay.correlated) {
        Eigen::MatrixXd gL = sigma_w.asDiagonal() * grad_A;
        int row_base = 0;
        for (int i = 1; i < J; ++i) {
          row_base += i - 1;  // CPC index of (i, 0)
          double grem = gL(i, i) * 0.5 / L(i, i);
          for (int jc = i - 1; jc >= 0; --jc) {
            const int pos = row_base + jc;
            const double z = z_cpc[pos];
            const double rb = rem_before(i, jc);
            double gz = grem * rb * (-2.0 * z);
            double g_rb = grem * (1.0 - z * z);
            const double sq = std::sqrt(rb);
            gz += gL(i, jc) * sq;
            g_rb += gL(i, jc) * z * 0.5 / sq;
            (*grad)[lay.off_corr + pos] += gz * (1.0 - z * z);
            grem = g_rb;
          }
        }
      }
    }
  }

  // --- measurement likelihood ---
  lp += -static_cast<double>(num_obs_) * (sigma_l + 0.5 * kLog2Pi);
  if (grad) (*grad)[lay.off_sigma_l] += -static_cast<double>(num_obs_);
  for (std::size_t i = 0; i < y_.size(); ++i) {
    const Eigen::MatrixXd& yi = y_[i];
    const int n = static_cast<int>(yi.rows());
    if (n == 0) continue;
    for (int j = 0; j < J; ++j) {
      Eigen::VectorXd tau = Eigen::VectorXd::Zero(n);
      for (int m = 0; m < M; ++m) tau.noalias() += g_[i][m] * beta[j][m];
      const double w_ij = v[lay.w_index(static_cast<int>(i), j)];
      const double scale = -alpha[j] * std::exp(w_ij);
      Eigen::VectorXd dtau;
      if (grad) dtau = Eigen::VectorXd::Zero(n);
      for (int k = 0; k < n; ++k) {
        double d = 0.0, s = 0.0, x = 0.0;
        const bool exposed = tau[k] > 0.0;
        if (exposed) {
          x = std::log(tau[k]) / gamma[j];
          s = sigmoid(x);
          d = scale * s;
        }
        const double r = yi(k, j) - d;
        lp += -0.5 * r * r * inv_sig2;
        if (grad) {
          const double cd = r * inv_sig2;
          (*grad)[lay.off_log_alpha + j] += cd * d;
          (*grad)[lay.w_index(static_cast<int>(i), j)] += cd * d;
          (*grad)[lay.off_sigma_l] += r * r * inv_sig2;
          if (exposed) {
            const double one_minus_s = sigmoid(-x);
            (*grad)[lay.off_log_gamma + j] += cd * d * one_minus_s * (-x);
            dtau[k] = cd * d * one_minus_s / (gamma[j] * tau[k]);
          }
        }
      }
      if (grad)
        for (int m = 0; m < M; ++m)
          gbeta[j][m].noalias() += g_[i][m].transpose() * dtau;
    }
  }

  // --- beta-space gradients back to the sampled coordinates ---
  if (grad) {
    for (int j = 0; j < J; ++j)
      for (int m = 0; m < M; ++m) {
        const int Q = lay.q[m];
        const int off = lay.off_coef[j][m];
        const auto& gb_v = gbeta[j][m];
        double suffix = gb_v.sum();
        (*grad)[off] += suffix * beta[j][m][0];  // d beta_q / d log beta_1
        const bool mono = lay.shapes[m] == ShapeKind::increasing;
        for (int qi = 0; qi < Q - 1; ++qi) {
          suffix -= gb_v[qi];
          const double total = gu[j][m][qi] + suffix;
          (*grad)[off + 1 + qi] += mono ? total * inc[j][m][qi] : total;
        }
      }
  }

  if (!std::isfinite(lp)) return fail();
  if (grad && !grad->allFinite()) return fail();
  return lp;
}

std::vector<std::string> Posterior::constrained_names() const {
  const ParamLayout& lay = layout_;
  std::vector<std::string> names;
  for (int j = 0; j < lay.num_dcs; ++j) names.push_back("alpha." + std::to_string(j + 1));
  for (int j = 0; j < lay.num_dcs; ++j) names.push_back("gamma." + std::to_string(j + 1));
  for (int j = 0; j < lay.num_dcs; ++j)
    for (int m = 0; m < lay.num_covariates; ++m)
      for (int qi = 0; qi < lay.q[m]; ++qi)
        names.push_back("beta." + std::to_string(j + 1) + "." + std::to_string(m + 1) +
                        "." + std::to_string(qi + 1));
  names.push_back("sigma");
  for (int m = 0; m < lay.num_covariates; ++m)
    names.push_back("lambda2." + std::to_string(m + 1));
  for (int m = 0; m < lay.num_covariates; ++m)
    if (lay.off_log_delta[m] >= 0) names.push_back("delta." + std::to_string(m + 1));
  for (int j = 0; j < lay.num_dcs; ++j)
    names.push_back("sigma_w." + std::to_string(j + 1));
  for (int j = 0; j < lay.num_dcs; ++j)
    for (int jp = j + 1; jp < lay.num_dcs; ++jp)
      names.push_back("rho." + std::to_string(j + 1) + "." + std::to_string(jp + 1));
  for (int i = 0; i < lay.num_specimens; ++i)
    for (int j = 0; j < lay.num_dcs; ++j)
      names.push_back("w." + std::to_string(i + 1) + "." + std::to_string(j + 1));
  return names;
}

Eigen::VectorXd Posterior::constrained_vector(const Eigen::VectorXd& v) const {
  const ParamLayout& lay = layout_;
  UnpackedState u = unpack(v);
  std::vector<double> out;
  for (int j = 0; j < lay.num_dcs; ++j) out.push_back(u.state.alpha[j]);
  for (int j = 0; j < lay.num_dcs; ++j) out.push_back(u.state.gamma[j]);
  for (int j = 0; j < lay.num_dcs; ++j)
    for (int m = 0; m < lay.num_covariates; ++m)
      for (int qi = 0; qi < lay.q[m]; ++qi) out.push_back(u.state.beta[j][m][qi]);
  out.push_back(u.state.sigma);
  for (int m = 0; m < lay.num_covariates; ++m) out.push_back(u.lambda2[m]);
  for (int m = 0; m < lay.num_covariates; ++m)
    if (lay.off_log_delta[m] >= 0) out.push_back(u.delta[m]);
  for (int j = 0; j < lay.num_dcs; ++j) out.push_back(u.state.sigma_w[j]);
  Eigen::MatrixXd omega = u.state.corr_chol * u.state.corr_chol.transpose();
  for (int j = 0; j < lay.num_dcs; ++j)
    for (int jp = j + 1; jp < lay.num_dcs; ++jp)
      out.push_back(lay.correlated ? omega(jp, j) : 0.0);
  for (int i = 0; i < lay.num_specimens; ++i)
    for (int j = 0; j < lay.num_dcs; ++j) out.push_back(u.state.w(i, j));
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

}  // namespace degpath
