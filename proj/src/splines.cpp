#include "degpath/splines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "degpath/errors.hpp"

namespace degpath {

SplineBasis::SplineBasis(double domain_min, double domain_max, int q, int degree)
    : q_(q), degree_(degree), domain_min_(domain_min), domain_max_(domain_max) {
  if (degree < 1) throw std::invalid_argument("spline degree must be >= 1");
  if (q < degree + 1)
    throw std::invalid_argument("need at least degree+1 basis functions, got " +
                                std::to_string(q));
  if (!(domain_max > domain_min))
    throw std::invalid_argument("degenerate spline domain");
  int spans = q - degree;  // interior spans covering the domain
  spacing_ = (domain_max - domain_min) / spans;
  knots_.resize(q + degree + 1);
  for (int i = 0; i < static_cast<int>(knots_.size()); ++i)
    knots_[i] = domain_min + (i - degree) * spacing_;
}

double SplineBasis::clamp_or_throw(double x, bool clamp) const {
  if (x < domain_min_ || x > domain_max_) {
    if (!clamp)
      throw std::domain_error("value " + std::to_string(x) +
                              " outside spline domain [" + std::to_string(domain_min_) +
                              ", " + std::to_string(domain_max_) + "]");
    return std::clamp(x, domain_min_, domain_max_);
  }
  return x;
}

int SplineBasis::eval_degree_local(double x, int d, std::span<double> values) const {
  // Span index on the full knot grid: knots_[s] <= x < knots_[s+1].
  int s = degree_ + static_cast<int>(std::floor((x - domain_min_) / spacing_));
  s = std::clamp(s, degree_, q_ - 1);  // x == domain_max lands in the last span

  // Triangular recursion on the d+1 bases alive on span s.
  values[0] = 1.0;
  for (int r = 1; r <= d; ++r) {
    double saved = 0.0;
    for (int k = 0; k < r; ++k) {
      // Basis starting at knot s-r+1+k, currently degree r.
      double left = x - knots_[s - r + 1 + k];
      double right = knots_[s + 1 + k] - x;
      double term = values[k] / (left + right);  // knot span of length r*spacing
      values[k] = saved + right * term;
      saved = left * term;
    }
    values[r] = saved;
  }
  return s - d;  // first active basis index for degree d
}

Eigen::VectorXd SplineBasis::eval(double x, bool clamp) const {
  x = clamp_or_throw(x, clamp);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(q_);
  double local[16];
  int first = eval_degree_local(x, degree_, std::span<double>(local, degree_ + 1));
  for (int k = 0; k <= degree_; ++k) {
    int qi = first + k;
    if (qi >= 0 && qi < q_) out[qi] = local[k];
  }
  return out;
}

int SplineBasis::eval_local(double x, std::span<double> values, bool clamp) const {
  x = clamp_or_throw(x, clamp);
  return eval_degree_local(x, degree_, values);
}

double SplineBasis::effect(const Eigen::VectorXd& beta, double x, bool strict_positive,
                           bool clamp) const {
  if (beta.size() != q_)
    throw std::invalid_argument("coefficient length " + std::to_string(beta.size()) +
                                " does not match basis size " + std::to_string(q_));
  if (strict_positive && (beta.array() <= 0.0).any())
    throw std::domain_error("effect coefficients must be strictly positive");
  x = clamp_or_throw(x, clamp);
  double local[16];
  int first = eval_degree_local(x, degree_, std::span<double>(local, degree_ + 1));
  double f = 0.0;
  for (int k = 0; k <= degree_; ++k) f += local[k] * beta[first + k];
  return f;
}

double SplineBasis::effect_derivative(const Eigen::VectorXd& beta, double x,
                                      int order) const {
  if (beta.size() != q_) throw std::invalid_argument("coefficient length mismatch");
  if (order != 1 && order != 2)
    throw std::invalid_argument("derivative order must be 1 or 2");
  if (degree_ < order)
    throw std::invalid_argument("basis degree too low for requested derivative");
  x = clamp_or_throw(x, false);
  double local[16];
  int d = degree_ - order;
  int first = eval_degree_local(x, d, std::span<double>(local, d + 1));
  double out = 0.0;
  for (int k = 0; k <= d; ++k) {
    // Degree-d basis with grid index first+k pairs with the order-th
    // backward difference of coefficients at the same index. The extended
    // boundary knots keep every active index inside [order, q).
    int qi = first + k;
    if (qi < order || qi >= q_) continue;
    double diff;
    if (order == 1)
      diff = beta[qi] - beta[qi - 1];
    else
      diff = beta[qi] - 2.0 * beta[qi - 1] + beta[qi - 2];
    out += local[k] * diff;
  }
  double z = spacing_;
  return order == 1 ? out / z : out / (z * z);
}

std::vector<double> SplineBasis::interpolation_points() const {
  // Equally spaced points satisfy the Schoenberg-Whitney condition for this
  // knot grid, so the collocation matrix is nonsingular.
  std::vector<double> xi(q_);
  for (int q = 0; q < q_; ++q)
    xi[q] = domain_min_ + (domain_max_ - domain_min_) * q / (q_ - 1.0);
  return xi;
}

Eigen::VectorXd SplineBasis::interpolate(const std::vector<double>& fvals) const {
  if (static_cast<int>(fvals.size()) != q_)
    throw std::invalid_argument("need one function value per basis function");
  auto xi = interpolation_points();
  Eigen::MatrixXd collocation(q_, q_);
  for (int r = 0; r < q_; ++r) collocation.row(r) = eval(xi[r]).transpose();
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(fvals.data(), q_);
  return collocation.partialPivLu().solve(rhs);
}

CumulativeEffect cumulative_effect(const SplineBasis& basis,
                                   const std::vector<double>& covariate_times,
                                   const std::vector<double>& covariate_values,
                                   const std::vector<double>& measurement_times,
                                   bool clamp) {
  if (covariate_times.size() != covariate_values.size())
    throw std::invalid_argument("covariate times/values length mismatch");
  for (std::size_t l = 1; l < covariate_times.size(); ++l)
    if (!(covariate_times[l] > covariate_times[l - 1]))
      throw DataError("covariate times must be strictly increasing");
  if (!covariate_times.empty() && !(covariate_times.front() > 0.0))
    throw DataError("covariate times must be positive (interval start is 0)");
  for (std::size_t k = 1; k < measurement_times.size(); ++k)
    if (measurement_times[k] < measurement_times[k - 1])
      throw DataError("measurement times must be sorted");

  CumulativeEffect out;
  out.g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(measurement_times.size()),
                                basis.size());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(basis.size());
  double local[16];
  std::size_t l = 0;
  double prev_s = 0.0;
  for (std::size_t k = 0; k < measurement_times.size(); ++k) {
    double t = measurement_times[k];
    for (; l < covariate_times.size() && covariate_times[l] <= t; ++l) {
      double dt = covariate_times[l] - prev_s;
      prev_s = covariate_times[l];
      int first = basis.eval_local(covariate_values[l],
                                   std::span<double>(local, basis.degree() + 1), clamp);
      for (int j = 0; j <= basis.degree(); ++j) acc[first + j] += local[j] * dt;
    }
    out.g.row(k) = acc.transpose();
  }
  return out;
}

}  // namespace degpath
