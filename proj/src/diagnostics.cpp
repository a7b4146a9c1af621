#include "degpath/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace degpath {

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

// Split every chain in half; returns sequences x parameter-column accessor.
std::vector<Eigen::VectorXd> split_sequences(const PosteriorSamples& s, int param) {
  std::vector<Eigen::VectorXd> seqs;
  const int half = s.kept() / 2;
  for (const auto& chain : s.draws) {
    seqs.push_back(chain.col(param).head(half));
    seqs.push_back(chain.col(param).tail(half));
  }
  return seqs;
}

struct Moments {
  double w = 0.0;         // mean within-sequence variance
  double var_plus = 0.0;  // marginal variance estimate
  double b_over_n = 0.0;
};

Moments sequence_moments(const std::vector<Eigen::VectorXd>& seqs) {
  Moments m;
  const double n = static_cast<double>(seqs[0].size());
  const double c = static_cast<double>(seqs.size());
  double grand = 0.0;
  std::vector<double> means;
  for (const auto& s : seqs) {
    means.push_back(s.mean());
    grand += s.mean();
  }
  grand /= c;
  double b = 0.0;
  for (double mu : means) b += (mu - grand) * (mu - grand);
  m.b_over_n = c > 1 ? b / (c - 1.0) : 0.0;
  double w = 0.0;
  for (const auto& s : seqs) {
    double mu = s.mean();
    w += (s.array() - mu).square().sum() / (n - 1.0);
  }
  m.w = w / c;
  m.var_plus = (n - 1.0) / n * m.w + m.b_over_n;
  return m;
}

}  // namespace

Eigen::VectorXd split_rhat(const PosteriorSamples& samples) {
  if (samples.num_chains() < 1 || samples.kept() < 4)
    throw std::invalid_argument("need chains with at least 4 kept draws");
  Eigen::VectorXd out(samples.dim());
  for (int p = 0; p < samples.dim(); ++p) {
    auto seqs = split_sequences(samples, p);
    Moments m = sequence_moments(seqs);
    if (m.w <= 0.0)
      out[p] = m.b_over_n <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    else
      out[p] = std::sqrt(m.var_plus / m.w);
  }
  return out;
}

Eigen::VectorXd effective_sample_size(const PosteriorSamples& samples) {
  Eigen::VectorXd out(samples.dim());
  const double total = static_cast<double>(samples.num_chains()) * samples.kept();
  for (int p = 0; p < samples.dim(); ++p) {
    auto seqs = split_sequences(samples, p);
    const Eigen::Index n = seqs[0].size();
    Moments m = sequence_moments(seqs);
    if (m.var_plus <= 0.0 || m.w <= 0.0) {
      out[p] = total;
      continue;
    }
    // Mean autocovariance across sequences at each lag.
    auto acov = [&](Eigen::Index t) {
      double acc = 0.0;
      for (const auto& s : seqs) {
        double mu = s.mean();
        double c = 0.0;
        for (Eigen::Index k = 0; k + t < n; ++k) c += (s[k] - mu) * (s[k + t] - mu);
        acc += c / static_cast<double>(n);
      }
      return acc / static_cast<double>(seqs.size());
    };
    // Geyer initial positive monotone sequence over lag pairs.
    double tau = 1.0;
    double prev_pair = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 1; t + 1 < n; t += 2) {
      double rho_a = 1.0 - (m.w - acov(t)) / m.var_plus;
      double rho_b = 1.0 - (m.w - acov(t + 1)) / m.var_plus;
      double pair = rho_a + rho_b;
      if (pair < 0.0) break;
      pair = std::min(pair, prev_pair);
      prev_pair = pair;
      tau += 2.0 * pair;
    }
    out[p] = std::min(total, total / tau);
  }
  return out;
}

std::vector<ParamSummary> summarize(const PosteriorSamples& samples) {
  Eigen::MatrixXd all = samples.stacked();
  std::vector<ParamSummary> out(static_cast<std::size_t>(all.cols()));
  for (Eigen::Index p = 0; p < all.cols(); ++p) {
    std::vector<double> col(all.rows());
    for (Eigen::Index r = 0; r < all.rows(); ++r) col[r] = all(r, p);
    ParamSummary s;
    s.mean = all.col(p).mean();
    double var = (all.col(p).array() - s.mean).square().sum() /
                 std::max<double>(1.0, static_cast<double>(all.rows()) - 1.0);
    s.sd = std::sqrt(var);
    s.median = quantile(col, 0.5);
    s.q025 = quantile(col, 0.025);
    s.q975 = quantile(col, 0.975);
    out[static_cast<std::size_t>(p)] = s;
  }
  return out;
}

}  // namespace degpath
