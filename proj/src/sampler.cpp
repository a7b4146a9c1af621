#include "degpath/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "degpath/errors.hpp"
#include "degpath/parallel.hpp"

namespace degpath {

namespace {

constexpr double kDivergenceGap = 1000.0;

double log_sum_exp(double a, double b) {
  double m = std::max(a, b);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct Point {
  Eigen::VectorXd theta;
  Eigen::VectorXd rho;
  Eigen::VectorXd grad;
  double logp = 0.0;  // target log density at theta
};

// back/front are the earliest/latest points in Hamiltonian time.
struct Tree {
  Point back;
  Point front;
  Eigen::VectorXd sample;
  Eigen::VectorXd sample_grad;
  double sample_logp = 0.0;
  double log_weight = 0.0;  // log sum of exp(-H + H0) over leaves
  double sum_accept = 0.0;
  long n_leaves = 0;
  bool turning = false;
  bool diverged = false;

  void take_sample_of(Tree& other) {
    sample = std::move(other.sample);
    sample_grad = std::move(other.sample_grad);
    sample_logp = other.sample_logp;
  }
};

class Chain {
 public:
  Chain(const LogDensityFn& target, int dim, const SamplerConfig& cfg, int chain_id,
        const InitFn& init)
      : target_(target),
        cfg_(cfg),
        dim_(dim),
        rng_(Rng::stream(cfg.seed, 0x636861696eULL, static_cast<std::uint64_t>(chain_id))),
        inv_mass_(Eigen::VectorXd::Ones(dim)) {
    for (int attempt = 0;; ++attempt) {
      if (init)
        theta_ = init(chain_id, rng_);
      else {
        theta_.resize(dim_);
        for (int k = 0; k < dim_; ++k) theta_[k] = rng_.uniform(-1.0, 1.0);
      }
      grad_.resize(dim_);
      logp_ = target_(theta_, &grad_);
      if (std::isfinite(logp_) && grad_.allFinite()) break;
      if (attempt + 1 >= cfg_.init_retries)
        throw SamplerError("no finite starting point after " +
                           std::to_string(cfg_.init_retries) + " attempts");
    }
  }

  void run(Eigen::MatrixXd& draws, std::vector<std::uint8_t>& divergent, double& step_out,
           double& accept_out) {
    const int warmup = cfg_.warmup;
    const int kept = cfg_.iterations - warmup;
    draws.resize(kept, dim_);
    divergent.assign(static_cast<std::size_t>(kept), 0);

    // Mass-estimation window inside warmup.
    const int w1 = warmup >= 20 ? static_cast<int>(0.15 * warmup) : warmup;
    const int w2 = warmup >= 20 ? static_cast<int>(0.85 * warmup) : warmup;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim_);
    Eigen::VectorXd m2 = Eigen::VectorXd::Zero(dim_);
    long welford_n = 0;

    init_step_size();
    double accept_sum = 0.0;
    long accept_n = 0;

    for (int m = 0; m < cfg_.iterations; ++m) {
      const bool in_warmup = m < warmup;
      double accept_stat = 0.0;
      bool div = transition(accept_stat);
      if (in_warmup) {
        adapt_step(accept_stat);
        if (m >= w1 && m < w2) {
          ++welford_n;
          Eigen::VectorXd d = theta_ - mean;
          mean += d / static_cast<double>(welford_n);
          m2 += d.cwiseProduct(theta_ - mean);
        }
        if (m + 1 == w2 && welford_n > 1) {
          double n = static_cast<double>(welford_n);
          Eigen::VectorXd var = m2 / (n - 1.0);
          inv_mass_ = (n / (n + 5.0)) * var.array() + 1e-3 * (5.0 / (n + 5.0));
          init_step_size();  // retune under the new metric
        }
        if (m + 1 == warmup) eps_ = std::exp(log_eps_bar_);
      } else {
        int k = m - warmup;
        draws.row(k) = theta_.transpose();
        divergent[static_cast<std::size_t>(k)] = div ? 1 : 0;
        accept_sum += accept_stat;
        ++accept_n;
      }
    }
    step_out = eps_;
    accept_out = accept_n ? accept_sum / static_cast<double>(accept_n) : 0.0;
  }

 private:
  double kinetic(const Eigen::VectorXd& rho) const {
    return 0.5 * rho.dot(inv_mass_.cwiseProduct(rho));
  }

  // One leapfrog step; returns false when the density or gradient blow up.
  bool leapfrog(const Point& from, double eps, Point& out) const {
    out.rho = from.rho + 0.5 * eps * from.grad;
    out.theta = from.theta + eps * inv_mass_.cwiseProduct(out.rho);
    out.grad.resize(dim_);
    out.logp = target_(out.theta, &out.grad);
    if (!std::isfinite(out.logp)) return false;
    out.rho += 0.5 * eps * out.grad;
    return true;
  }

  bool uturn(const Point& back, const Point& front) const {
    Eigen::VectorXd diff = inv_mass_.cwiseProduct(front.theta - back.theta);
    return front.rho.dot(diff) < 0.0 || back.rho.dot(diff) < 0.0;
  }

  Tree leaf(const Point& from, double eps, double h0) {
    Tree t;
    Point p;
    if (!leapfrog(from, eps, p)) {
      t.diverged = true;
      t.log_weight = -std::numeric_limits<double>::infinity();
      t.n_leaves = 1;
      return t;
    }
    double h = -p.logp + kinetic(p.rho);
    double lw = h0 - h;
    t.diverged = lw < -kDivergenceGap;
    t.log_weight = lw;
    t.sum_accept = std::isfinite(lw) ? std::min(1.0, std::exp(lw)) : 0.0;
    t.n_leaves = 1;
    t.sample = p.theta;
    t.sample_grad = p.grad;
    t.sample_logp = p.logp;
    t.back = p;
    t.front = std::move(p);
    return t;
  }

  // Builds 2^depth leaves continuing in the direction of eps; `edge` is the
  // current extreme point in that direction.
  Tree build_tree(int depth, const Point& edge, double eps, double h0) {
    if (depth == 0) return leaf(edge, eps, h0);
    const bool forward = eps > 0.0;
    Tree first = build_tree(depth - 1, edge, eps, h0);
    if (first.diverged || first.turning) return first;
    Tree second = build_tree(depth - 1, forward ? first.front : first.back, eps, h0);
    Tree merged;
    merged.diverged = second.diverged;
    merged.sum_accept = first.sum_accept + second.sum_accept;
    merged.n_leaves = first.n_leaves + second.n_leaves;
    if (second.diverged) return merged;
    merged.turning = second.turning;
    if (!merged.turning) {
      merged.log_weight = log_sum_exp(first.log_weight, second.log_weight);
      if (std::log(rng_.uniform()) < second.log_weight - merged.log_weight)
        merged.take_sample_of(second);
      else
        merged.take_sample_of(first);
      merged.back = std::move(forward ? first.back : second.back);
      merged.front = std::move(forward ? second.front : first.front);
      merged.turning = uturn(merged.back, merged.front);
    }
    return merged;
  }

  // One NUTS transition. Returns the divergence flag; accept_stat receives
  // the mean leaf acceptance statistic for step-size adaptation.
  bool transition_nuts(double& accept_stat) {
    Eigen::VectorXd z = rng_.normal_vector(dim_);
    Point cur;
    cur.theta = theta_;
    cur.rho = z.cwiseQuotient(inv_mass_.cwiseSqrt());
    cur.grad = grad_;
    cur.logp = logp_;
    const double h0 = -cur.logp + kinetic(cur.rho);

    Tree tree;
    tree.back = cur;
    tree.front = cur;
    tree.sample = cur.theta;
    tree.sample_grad = cur.grad;
    tree.sample_logp = cur.logp;
    tree.log_weight = 0.0;
    tree.sum_accept = 0.0;
    tree.n_leaves = 0;
    bool diverged = false;

    for (int depth = 0; depth < cfg_.max_depth; ++depth) {
      bool forward = rng_.bernoulli();
      double eps = forward ? eps_ : -eps_;
      Tree next = build_tree(depth, forward ? tree.front : tree.back, eps, h0);
      tree.sum_accept += next.sum_accept;
      tree.n_leaves += next.n_leaves;
      if (next.diverged) {
        diverged = true;
        break;
      }
      if (next.turning) break;
      // Progressive biased sampling toward the new subtree.
      if (std::log(rng_.uniform()) < next.log_weight - tree.log_weight)
        tree.take_sample_of(next);
      tree.log_weight = log_sum_exp(tree.log_weight, next.log_weight);
      if (forward)
        tree.front = std::move(next.front);
      else
        tree.back = std::move(next.back);
      if (uturn(tree.back, tree.front)) break;
    }
    accept_stat = tree.n_leaves ? tree.sum_accept / static_cast<double>(tree.n_leaves) : 0.0;
    theta_ = std::move(tree.sample);
    grad_ = std::move(tree.sample_grad);
    logp_ = tree.sample_logp;
    return diverged;
  }

  bool transition_hmc(double& accept_stat) {
    Eigen::VectorXd z = rng_.normal_vector(dim_);
    Point cur;
    cur.theta = theta_;
    cur.rho = z.cwiseQuotient(inv_mass_.cwiseSqrt());
    cur.grad = grad_;
    cur.logp = logp_;
    const double h0 = -cur.logp + kinetic(cur.rho);
    Point p = cur;
    bool ok = true;
    for (int step = 0; step < cfg_.hmc_steps && ok; ++step) {
      Point next;
      ok = leapfrog(p, eps_, next);
      if (ok) p = std::move(next);
    }
    double lw = ok ? h0 - (-p.logp + kinetic(p.rho))
                   : -std::numeric_limits<double>::infinity();
    accept_stat = std::isfinite(lw) ? std::min(1.0, std::exp(lw)) : 0.0;
    bool diverged = !ok || lw < -kDivergenceGap;
    if (std::log(rng_.uniform()) < lw) {
      theta_ = std::move(p.theta);
      grad_ = std::move(p.grad);
      logp_ = p.logp;
    }
    return diverged;
  }

  bool transition(double& accept_stat) {
    return cfg_.fixed_hmc ? transition_hmc(accept_stat) : transition_nuts(accept_stat);
  }

  // Doubling heuristic for a reasonable starting step size, then dual
  // averaging is (re)initialized around it.
  void init_step_size() {
    eps_ = 1.0;
    Eigen::VectorXd z = rng_.normal_vector(dim_);
    Point cur;
    cur.theta = theta_;
    cur.rho = z.cwiseQuotient(inv_mass_.cwiseSqrt());
    cur.grad = grad_;
    cur.logp = logp_;
    double h0 = -cur.logp + kinetic(cur.rho);
    auto accept_logprob = [&](double eps) {
      Point p;
      if (!leapfrog(cur, eps, p)) return -std::numeric_limits<double>::infinity();
      return h0 - (-p.logp + kinetic(p.rho));
    };
    double lp = accept_logprob(eps_);
    double direction = lp > std::log(0.5) ? 1.0 : -1.0;
    for (int iter = 0; iter < 50; ++iter) {
      eps_ *= direction > 0 ? 2.0 : 0.5;
      lp = accept_logprob(eps_);
      if (direction > 0 ? lp <= std::log(0.5) : lp >= std::log(0.5)) break;
      if (eps_ > 1e7 || eps_ < 1e-10) break;
    }
    mu_ = std::log(10.0 * eps_);
    log_eps_bar_ = std::log(eps_);
    h_bar_ = 0.0;
    adapt_count_ = 0;
  }

  void adapt_step(double accept_stat) {
    // Dual averaging (gamma 0.05, t0 10, kappa 0.75).
    ++adapt_count_;
    double m = static_cast<double>(adapt_count_);
    double w = 1.0 / (m + 10.0);
    h_bar_ = (1.0 - w) * h_bar_ + w * (cfg_.target_accept - accept_stat);
    double log_eps = mu_ - std::sqrt(m) / 0.05 * h_bar_;
    double pow_m = std::pow(m, -0.75);
    log_eps_bar_ = pow_m * log_eps + (1.0 - pow_m) * log_eps_bar_;
    eps_ = std::exp(log_eps);
  }

  const LogDensityFn& target_;
  const SamplerConfig& cfg_;
  int dim_;
  Rng rng_;
  Eigen::VectorXd inv_mass_;
  Eigen::VectorXd theta_, grad_;
  double logp_ = 0.0;
  double eps_ = 1.0;
  double mu_ = 0.0, log_eps_bar_ = 0.0, h_bar_ = 0.0;
  long adapt_count_ = 0;
};

}  // namespace

void SamplerConfig::validate() const {
  if (chains < 1) throw ConfigError("need at least one chain");
  if (warmup < 0 || warmup >= iterations)
    throw ConfigError("warmup must satisfy 0 <= warmup < iterations");
  if (!(target_accept > 0.0 && target_accept < 1.0))
    throw ConfigError("target acceptance must be in (0,1)");
  if (max_depth < 1 || max_depth > 14) throw ConfigError("max tree depth must be in 1..14");
  if (hmc_steps < 1) throw ConfigError("hmc steps must be positive");
}

long PosteriorSamples::total_divergences() const {
  long n = 0;
  for (const auto& c : divergent)
    for (auto f : c) n += f;
  return n;
}

Eigen::MatrixXd PosteriorSamples::stacked() const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(num_chains()) * kept(), dim());
  for (int c = 0; c < num_chains(); ++c)
    out.middleRows(static_cast<Eigen::Index>(c) * kept(), kept()) = draws[c];
  return out;
}

PosteriorSamples PosteriorSamples::transformed(
    const std::vector<std::string>& new_names,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn) const {
  PosteriorSamples out;
  out.names = new_names;
  out.divergent = divergent;
  out.step_size = step_size;
  out.mean_accept = mean_accept;
  out.draws.resize(draws.size());
  for (std::size_t c = 0; c < draws.size(); ++c) {
    for (Eigen::Index r = 0; r < draws[c].rows(); ++r) {
      Eigen::VectorXd t = fn(draws[c].row(r).transpose());
      if (out.draws[c].size() == 0)
        out.draws[c].resize(draws[c].rows(), t.size());
      out.draws[c].row(r) = t.transpose();
    }
  }
  return out;
}

PosteriorSamples sample(const LogDensityFn& target, int dim, const SamplerConfig& config,
                        const InitFn& init) {
  config.validate();
  PosteriorSamples out;
  out.draws.resize(config.chains);
  out.divergent.resize(config.chains);
  out.step_size.assign(config.chains, 0.0);
  out.mean_accept.assign(config.chains, 0.0);

  std::vector<std::string> errors(config.chains);
  parallel_for(static_cast<std::size_t>(config.chains), config.threads, [&](std::size_t c) {
    try {
      Chain chain(target, dim, config, static_cast<int>(c), init);
      chain.run(out.draws[c], out.divergent[c], out.step_size[c], out.mean_accept[c]);
    } catch (const std::exception& e) {
      errors[c] = e.what();
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw SamplerError(e);
  return out;
}

}  // namespace degpath
