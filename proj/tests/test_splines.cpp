#include <doctest.h>

#include <cmath>
#include <vector>

#include "degpath/rng.hpp"
#include "degpath/splines.hpp"

using namespace degpath;

namespace {

// Textbook Cox-de Boor recursion over an explicit knot vector, written
// independently of the library's triangular evaluation.
double coxdeboor(const std::vector<double>& t, int i, int p, double x) {
  if (p == 0) return (x >= t[i] && x < t[i + 1]) ? 1.0 : 0.0;
  double left = 0.0, right = 0.0;
  if (t[i + p] > t[i]) left = (x - t[i]) / (t[i + p] - t[i]) * coxdeboor(t, i, p - 1, x);
  if (t[i + p + 1] > t[i + 1])
    right = (t[i + p + 1] - x) / (t[i + p + 1] - t[i + 1]) * coxdeboor(t, i + 1, p - 1, x);
  return left + right;
}

}  // namespace

TEST_CASE("equal-knot basis construction") {
  SplineBasis minimal(0.0, 10.0, 4, 3);
  CHECK(minimal.size() == 4);
  CHECK(minimal.spacing() == doctest::Approx(10.0));  // single interior span
  CHECK(minimal.knots().size() == 8);

  SplineBasis application(0.0, 50.0, 60, 3);
  CHECK(application.spacing() == doctest::Approx(50.0 / 57.0));
  CHECK(application.size() == 60);

  CHECK_THROWS(SplineBasis(0.0, 1.0, 3, 3));  // q < degree + 1
  CHECK_THROWS(SplineBasis(2.0, 2.0, 10, 3)); // degenerate domain
}

TEST_CASE("basis values match the textbook recursion") {
  SplineBasis basis(0.0, 1.0, 10, 3);
  CHECK(basis.spacing() == doctest::Approx(1.0 / 7.0));
  const auto& knots = basis.knots();
  Rng rng(42);
  for (int rep = 0; rep < 200; ++rep) {
    double x = rng.uniform(0.0, 0.999);
    Eigen::VectorXd values = basis.eval(x);
    for (int q = 0; q < basis.size(); ++q)
      CHECK(values[q] == doctest::Approx(coxdeboor(knots, q, 3, x)).epsilon(1e-12));
  }
}

TEST_CASE("partition of unity and local support") {
  SplineBasis basis(-3.0, 47.0, 23, 3);
  Rng rng(7);
  for (int rep = 0; rep < 1000; ++rep) {
    double x = rng.uniform(-3.0, 47.0);
    Eigen::VectorXd values = basis.eval(x);
    CHECK(std::abs(values.sum() - 1.0) < 1e-12);
    CHECK((values.array() >= 0.0).all());
    CHECK((values.array() != 0.0).count() <= 4);
  }
  // At an interior knot only `degree` bases are nonzero.
  double knot = basis.knots()[basis.degree() + 5];
  Eigen::VectorXd at_knot = basis.eval(knot);
  CHECK((at_knot.array() != 0.0).count() == 3);
}

TEST_CASE("single-span midpoint gives cardinal B-spline weights") {
  // Uniform (extended, unrepeated) knots: the span midpoint sees the
  // cardinal cubic B-spline at offsets 3/2 and 1/2, i.e. 1/48 and 23/48.
  SplineBasis basis(0.0, 1.0, 4, 3);
  Eigen::VectorXd values = basis.eval(0.5);
  CHECK(values[0] == doctest::Approx(1.0 / 48.0));
  CHECK(values[1] == doctest::Approx(23.0 / 48.0));
  CHECK(values[2] == doctest::Approx(23.0 / 48.0));
  CHECK(values[3] == doctest::Approx(1.0 / 48.0));
}

TEST_CASE("domain handling") {
  SplineBasis basis(0.0, 1.0, 8, 3);
  CHECK_THROWS(basis.eval(1.5));
  CHECK_THROWS(basis.eval(-0.1));
  Eigen::VectorXd clamped = basis.eval(1.5, true);
  Eigen::VectorXd edge = basis.eval(1.0);
  CHECK((clamped - edge).norm() == 0.0);
}

TEST_CASE("effect function evaluation") {
  SplineBasis basis(0.0, 2.0, 9, 3);
  Rng rng(3);

  Eigen::VectorXd constant = Eigen::VectorXd::Constant(9, 0.7);
  for (int rep = 0; rep < 20; ++rep)
    CHECK(basis.effect(constant, rng.uniform(0.0, 2.0)) == doctest::Approx(0.7));

  // Direct-summation oracle.
  Eigen::VectorXd beta(9);
  for (int q = 0; q < 9; ++q) beta[q] = 0.1 + rng.uniform();
  for (int rep = 0; rep < 50; ++rep) {
    double x = rng.uniform(0.0, 2.0);
    double direct = basis.eval(x).dot(beta);
    CHECK(basis.effect(beta, x) == doctest::Approx(direct).epsilon(1e-13));
  }

  CHECK_THROWS(basis.effect(Eigen::VectorXd::Ones(5), 1.0));
  Eigen::VectorXd with_zero = beta;
  with_zero[2] = 0.0;
  CHECK_THROWS(basis.effect(with_zero, 1.0, /*strict_positive=*/true));
  CHECK_NOTHROW(basis.effect(with_zero, 1.0));
}

TEST_CASE("quadratic truth is reproduced exactly") {
  // Convex truth from the simulated-study design: value 0.01 at its vertex.
  auto f = [](double x) { return (x - 30.0) * (x - 30.0) / 15000.0 + 0.01; };
  SplineBasis basis(5.0, 45.0, 12, 3);
  std::vector<double> fvals;
  for (double x : basis.interpolation_points()) fvals.push_back(f(x));
  Eigen::VectorXd beta = basis.interpolate(fvals);
  CHECK(basis.effect(beta, 30.0) == doctest::Approx(0.01).epsilon(1e-10));
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    double x = rng.uniform(5.0, 45.0);
    CHECK(basis.effect(beta, x) == doctest::Approx(f(x)).epsilon(1e-10));
  }
}

TEST_CASE("difference-form derivatives match finite differences") {
  SplineBasis basis(0.0, 10.0, 15, 3);
  Rng rng(19);

  Eigen::VectorXd constant = Eigen::VectorXd::Constant(15, 1.3);
  CHECK(basis.effect_derivative(constant, 4.2, 1) == doctest::Approx(0.0));

  Eigen::VectorXd linear(15);
  for (int q = 0; q < 15; ++q) linear[q] = (q + 1) * basis.spacing();
  CHECK(basis.effect_derivative(linear, 6.1, 2) == doctest::Approx(0.0));

  Eigen::VectorXd beta(15);
  for (int q = 0; q < 15; ++q) beta[q] = 0.2 + rng.uniform();
  const double h = 1e-5 * 10.0;
  for (int rep = 0; rep < 100; ++rep) {
    double x = rng.uniform(0.5, 9.5);
    double d1 = basis.effect_derivative(beta, x, 1);
    double fd1 = (basis.effect(beta, x + h) - basis.effect(beta, x - h)) / (2.0 * h);
    CHECK(d1 == doctest::Approx(fd1).epsilon(1e-6));
    double d2 = basis.effect_derivative(beta, x, 2);
    double fd2 = (basis.effect(beta, x + h) - 2.0 * basis.effect(beta, x) +
                  basis.effect(beta, x - h)) /
                 (h * h);
    CHECK(d2 == doctest::Approx(fd2).epsilon(1e-5));
  }
  CHECK_THROWS(basis.effect_derivative(beta, 5.0, 3));
}

TEST_CASE("cumulative effect accumulation") {
  SplineBasis basis(0.0, 50.0, 10, 3);

  SUBCASE("no history before the first measurement") {
    auto ce = cumulative_effect(basis, {5.0}, {20.0}, {1.0, 2.0, 10.0});
    CHECK(ce.g.row(0).norm() == 0.0);
    CHECK(ce.g.row(1).norm() == 0.0);
    CHECK(ce.g.row(2).norm() > 0.0);
  }

  SUBCASE("single record integrates the first interval") {
    auto ce = cumulative_effect(basis, {1.0}, {25.0}, {0.5, 1.0, 3.0});
    Eigen::VectorXd row = basis.eval(25.0);
    CHECK(ce.g.row(0).norm() == 0.0);
    CHECK((ce.g.row(1).transpose() - row).norm() < 1e-14);  // b * (1 - 0)
    CHECK((ce.g.row(2).transpose() - row).norm() < 1e-14);
  }

  SUBCASE("daily history matches the direct Riemann sum") {
    auto f = [](double x) { return x * x / 1000.0 + 0.01; };
    std::vector<double> fvals;
    for (double x : basis.interpolation_points()) fvals.push_back(f(x));
    Eigen::VectorXd beta = basis.interpolate(fvals);

    Rng rng(23);
    std::vector<double> stimes, svalues, mtimes = {50.0, 123.0, 300.0};
    double direct[3] = {0.0, 0.0, 0.0};
    for (int d = 1; d <= 300; ++d) {
      double x = rng.uniform(0.0, 50.0);
      stimes.push_back(d);
      svalues.push_back(x);
      for (int k = 0; k < 3; ++k)
        if (d <= mtimes[k]) direct[k] += f(x);
    }
    auto ce = cumulative_effect(basis, stimes, svalues, mtimes);
    for (int k = 0; k < 3; ++k)
      CHECK(ce.value(k, beta) == doctest::Approx(direct[k]).epsilon(1e-3));
  }

  SUBCASE("entrywise nondecreasing in measurement index") {
    Rng rng(31);
    std::vector<double> st, sv, mt;
    for (int d = 1; d <= 60; ++d) {
      st.push_back(d);
      sv.push_back(rng.uniform(0.0, 50.0));
    }
    for (int k = 5; k <= 60; k += 5) mt.push_back(k);
    auto ce = cumulative_effect(basis, st, sv, mt);
    for (Eigen::Index k = 1; k < ce.g.rows(); ++k)
      CHECK(((ce.g.row(k) - ce.g.row(k - 1)).array() >= -1e-15).all());
  }

  SUBCASE("linear in the time increments") {
    std::vector<double> st = {2.0, 4.0}, sv = {10.0, 30.0}, mt = {4.0};
    auto ce = cumulative_effect(basis, st, sv, mt);
    Eigen::VectorXd expected = 2.0 * basis.eval(10.0) + 2.0 * basis.eval(30.0);
    CHECK((ce.g.row(0).transpose() - expected).norm() < 1e-13);
  }

  SUBCASE("input validation") {
    CHECK_THROWS(cumulative_effect(basis, {3.0, 2.0}, {1.0, 1.0}, {5.0}));
    CHECK_THROWS(cumulative_effect(basis, {1.0}, {99.0}, {5.0}));
    CHECK_NOTHROW(cumulative_effect(basis, {1.0}, {99.0}, {5.0}, /*clamp=*/true));
    CHECK_THROWS(cumulative_effect(basis, {1.0}, {25.0}, {5.0, 4.0}));
  }
}
