#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace degpath {

/// Cubic (by default) B-spline basis on equally spaced knots. The knot grid
/// extends `degree` spacings beyond each end of the domain so that every x in
/// [domain_min, domain_max] has full support and the basis sums to one there.
/// Immutable after construction; all evaluation methods are const and
/// thread-safe.
class SplineBasis {
 public:
  /// q: number of basis functions (q >= degree + 1).
  SplineBasis(double domain_min, double domain_max, int q, int degree = 3);

  int size() const { return q_; }
  int degree() const { return degree_; }
  double spacing() const { return spacing_; }
  double domain_min() const { return domain_min_; }
  double domain_max() const { return domain_max_; }
  const std::vector<double>& knots() const { return knots_; }

  /// Basis values at x as a dense vector of length size(). Throws when x is
  /// outside the domain unless `clamp` is set, in which case x is clamped to
  /// the nearest domain edge.
  Eigen::VectorXd eval(double x, bool clamp = false) const;

  /// Local evaluation: writes the degree+1 possibly nonzero basis values into
  /// `values` and returns the index of the first one.
  int eval_local(double x, std::span<double> values, bool clamp = false) const;

  /// f(x) = sum_q B_q(x) beta_q. When `strict_positive` is set, nonpositive
  /// coefficients are rejected.
  double effect(const Eigen::VectorXd& beta, double x, bool strict_positive = false,
                bool clamp = false) const;

  /// Analytic derivative of the effect function via coefficient differences
  /// over the knot spacing. order is 1 or 2.
  double effect_derivative(const Eigen::VectorXd& beta, double x, int order) const;

  /// Coefficients interpolating f at interpolation_points(). Reproduces
  /// polynomials up to the basis degree exactly.
  Eigen::VectorXd interpolate(const std::vector<double>& fvals) const;
  std::vector<double> interpolation_points() const;

 private:
  // Values of the degree-d basis functions at x, d <= degree. Returns the
  // first active index on the full knot grid; writes d+1 values.
  int eval_degree_local(double x, int d, std::span<double> values) const;
  double clamp_or_throw(double x, bool clamp) const;

  int q_;
  int degree_;
  double domain_min_, domain_max_;
  double spacing_;
  std::vector<double> knots_;  // q + degree + 1 knots, equally spaced
};

/// One covariate's recording times and values for one specimen, plus the
/// basis-space accumulation G(t) = sum_{s_l <= t} B[x(s_l)] (s_l - s_{l-1})
/// evaluated at each requested measurement time. The first interval starts
/// at time zero.
struct CumulativeEffect {
  // One row per measurement time, each of length basis.size(); row k is
  // entrywise >= row k-1.
  Eigen::MatrixXd g;

  /// Discrete cumulative exposure at measurement time k for coefficients beta.
  double value(int k, const Eigen::VectorXd& beta) const { return g.row(k).dot(beta); }
};

/// covariate_times must be strictly increasing and positive; measurement_times
/// sorted. Covariate values outside the basis domain throw unless `clamp`.
CumulativeEffect cumulative_effect(const SplineBasis& basis,
                                   const std::vector<double>& covariate_times,
                                   const std::vector<double>& covariate_values,
                                   const std::vector<double>& measurement_times,
                                   bool clamp = false);

}  // namespace degpath
