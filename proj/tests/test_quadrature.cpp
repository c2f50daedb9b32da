#include <doctest.h>

#include <cmath>

#include "fewjumps/models.hpp"
#include "fewjumps/quadrature.hpp"
#include "fewjumps/special.hpp"

using namespace fewjumps;

TEST_CASE("independent coordinates factorize") {
  for (double h : {0.5, 2.0, 8.0}) {
    for (double k : {1.0, 6.0}) {
      CHECK(bivariate_normal_upper_log(h, k, 0.0) ==
            doctest::Approx(normal_logsf(h) + normal_logsf(k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("symmetry in the two thresholds") {
  CHECK(bivariate_normal_upper_log(1.5, 3.0, 0.6) ==
        doctest::Approx(bivariate_normal_upper_log(3.0, 1.5, 0.6)).epsilon(1e-10));
}

namespace {

// Direct 2-D Riemann oracle, workable at moderate depth.
double riemann_upper(double h, double k, double rho) {
  const double s = std::sqrt(1.0 - rho * rho);
  const double dx = 2e-3;
  double total = 0.0;
  for (double y1 = h + 0.5 * dx; y1 < h + 12.0; y1 += dx) {
    for (double y2 = k + 0.5 * dx; y2 < k + 12.0; y2 += dx) {
      const double q = (y1 * y1 - 2.0 * rho * y1 * y2 + y2 * y2) / (s * s);
      total += std::exp(-0.5 * q) * dx * dx;
    }
  }
  return total / (2.0 * M_PI * s);
}

}  // namespace

TEST_CASE("quadrature matches a direct Riemann sum at moderate depth") {
  for (double rho : {-0.5, 0.3, 0.8}) {
    const double mine = std::exp(bivariate_normal_upper_log(1.2, 2.0, rho));
    CHECK(mine == doctest::Approx(riemann_upper(1.2, 2.0, rho)).epsilon(2e-3));
  }
}

TEST_CASE("deep tails keep log-scale accuracy") {
  // Leading exponent at h = k = b, rho > 0: -b^2/(1+rho); the log prefactor
  // correction stays O(log b). Verified against the Laplace expansion
  // L ~ (1-rho^2)^{3/2} / (2 pi (1-rho)^2 b^2) exp(-b^2/(1+rho)).
  const double b = 12.0, rho = 0.5;
  const double lead = -b * b / (1.0 + rho);
  const double pref = std::log(std::pow(1.0 - rho * rho, 1.5) /
                               (2.0 * M_PI * std::pow((1.0 - rho) * b, 2.0)));
  const double got = bivariate_normal_upper_log(b, b, rho);
  CHECK(got == doctest::Approx(lead + pref).epsilon(2e-2));
}

TEST_CASE("absolute-value tails collapse the four quadrants") {
  const double got = bivariate_abs_normal_upper_log(1.0, 1.5, 0.4);
  const double expect = std::log(
      2.0 * (std::exp(bivariate_normal_upper_log(1.0, 1.5, 0.4)) +
             std::exp(bivariate_normal_upper_log(1.0, 1.5, -0.4))));
  CHECK(got == doctest::Approx(expect).epsilon(1e-10));
  // Zero thresholds reduce dimension.
  CHECK(bivariate_abs_normal_upper_log(0.0, 0.0, 0.4) == 0.0);
  CHECK(bivariate_abs_normal_upper_log(2.0, 0.0, 0.4) ==
        doctest::Approx(std::log(2.0) + normal_logsf(2.0)).epsilon(1e-12));
}

TEST_CASE("power-tail oracle equals the abs-normal tail after the root map") {
  const BivariateGaussPower m(0.5, 3.0);
  const double a1 = 7.0, a2 = 2.0;
  CHECK(gauss_power_upper_tail_log(m, a1, a2) ==
        doctest::Approx(bivariate_abs_normal_upper_log(
                            std::pow(a1, 1.0 / 3.0), std::pow(a2, 1.0 / 3.0), 0.5))
            .epsilon(1e-12));
  // General-covariance overload standardizes correctly.
  Mat sigma(2, 2);
  sigma << 4.0, 1.0, 1.0, 1.0;
  const GaussPowerModel g(sigma, 3.0);
  Vec a(2);
  a << 7.0, 2.0;
  const double rho = 1.0 / 2.0;
  CHECK(gauss_power_upper_tail_log(g, a) ==
        doctest::Approx(bivariate_abs_normal_upper_log(std::pow(7.0, 1.0 / 3.0) / 2.0,
                                                       std::pow(2.0, 1.0 / 3.0), rho))
            .epsilon(1e-12));
}

TEST_CASE("one-dimensional power tail") {
  Mat s1(1, 1);
  s1 << 1.0;
  const GaussPowerModel m(s1, 4.0);
  Vec a(1);
  a << 16.0;
  CHECK(gauss_power_upper_tail_log(m, a) ==
        doctest::Approx(std::log(2.0) + normal_logsf(2.0)).epsilon(1e-12));
}
