#include "fewjumps/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "fewjumps/special.hpp"

namespace fewjumps {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

double log_phi(double y) { return -0.5 * y * y - kLogSqrt2Pi; }

// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton iteration.
struct GaussLegendre {
  std::array<double, 32> node{};
  std::array<double, 32> weight{};
  GaussLegendre() {
    const int n = 32;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / pp;
        x -= dx;
        if (std::fabs(dx) < 1e-15) break;
      }
      node[i] = x;
      weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
  }
};

const GaussLegendre& gl32() {
  static const GaussLegendre g;
  return g;
}

// log integral of exp(g) over [a, b] via panelled Gauss-Legendre with a
// max-shift; g must be smooth (here: log-concave).
template <typename G>
double log_integrate(G&& g, double a, double b, double gmax, int panels) {
  const GaussLegendre& q = gl32();
  double sum = 0.0;
  const double step = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * step;
    const double mid = lo + 0.5 * step;
    for (int i = 0; i < 32; ++i) {
      const double y = mid + 0.5 * step * q.node[i];
      const double gy = g(y);
      if (gy == -kInf) continue;
      sum += 0.5 * step * q.weight[i] * std::exp(gy - gmax);
    }
  }
  return sum > 0.0 ? gmax + std::log(sum) : -kInf;
}

}  // namespace

double bivariate_normal_upper_log(double h, double k, double rho) {
  require(std::fabs(rho) <= 1.0 - 1e-12,
          "bivariate_normal_upper_log: |rho| < 1 required");
  const double s = std::sqrt(1.0 - rho * rho);
  const auto g = [&](double y) {
    return log_phi(y) + normal_logsf((k - rho * y) / s);
  };
  // The integrand is log-concave; locate its mode, then integrate a window
  // wide enough that the discarded mass is below 1e-30 relative.
  const double ga = g(h);
  double width = 1.0;
  double mode = h, gmode = ga;
  for (int it = 0; it < 200; ++it) {
    const double y = h + width;
    const double gy = g(y);
    if (gy > gmode) {
      gmode = gy;
      mode = y;
    }
    if (gy < gmode - 80.0 || width > 1e4) break;
    width *= 1.5;
  }
  // Refine the mode between its bracketing scan points.
  {
    double lo = h, hi = h + width;
    for (int it = 0; it < 120; ++it) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (g(m1) < g(m2)) {
        lo = m1;
      } else {
        hi = m2;
      }
    }
    const double y = 0.5 * (lo + hi);
    const double gy = g(y);
    if (gy > gmode) {
      gmode = gy;
      mode = y;
    }
  }
  // Right cutoff: walk out until 80 nats below the mode.
  double hi = std::max(mode, h) + 1.0;
  while (hi < h + 1e6 && g(hi) > gmode - 80.0) {
    hi = h + (hi - h) * 1.6 + 0.5;
  }
  return log_integrate(g, h, hi, gmode, 24);
}

double bivariate_abs_normal_upper_log(double b1, double b2, double rho) {
  require(b1 >= 0.0 && b2 >= 0.0,
          "bivariate_abs_normal_upper_log: thresholds >= 0 required");
  if (b1 == 0.0 && b2 == 0.0) return 0.0;
  if (b1 == 0.0) return std::log(2.0) + normal_logsf(b2);
  if (b2 == 0.0) return std::log(2.0) + normal_logsf(b1);
  // Four sign quadrants collapse pairwise by central symmetry.
  return std::log(2.0) + log_add_exp(bivariate_normal_upper_log(b1, b2, rho),
                                     bivariate_normal_upper_log(b1, b2, -rho));
}

double gauss_power_upper_tail_log(const BivariateGaussPower& m, double a1,
                                  double a2) {
  const double b1 = a1 > 0.0 ? std::pow(a1, 1.0 / m.q) : 0.0;
  const double b2 = a2 > 0.0 ? std::pow(a2, 1.0 / m.q) : 0.0;
  return bivariate_abs_normal_upper_log(b1, b2, m.rho);
}

double gauss_power_upper_tail_log(const GaussPowerModel& m,
                                  const Ref<const Vec>& a) {
  require(a.size() == m.k(), "gauss_power_upper_tail_log: dimension mismatch");
  if (m.k() == 1) {
    const double sd = std::sqrt(m.sigma()(0, 0));
    require(sd > 0.0, "gauss_power_upper_tail_log: degenerate variance");
    if (a[0] <= 0.0) return 0.0;
    return std::log(2.0) + normal_logsf(std::pow(a[0], 1.0 / m.q()) / sd);
  }
  if (m.k() != 2) {
    throw UnsupportedError("gauss_power_upper_tail_log: k <= 2 only");
  }
  const double s1 = std::sqrt(m.sigma()(0, 0));
  const double s2 = std::sqrt(m.sigma()(1, 1));
  require(s1 > 0.0 && s2 > 0.0, "gauss_power_upper_tail_log: degenerate variance");
  const double rho = m.sigma()(0, 1) / (s1 * s2);
  require(std::fabs(rho) <= 1.0 - 1e-12,
          "gauss_power_upper_tail_log: |rho| < 1 required");
  const double b1 = a[0] > 0.0 ? std::pow(a[0], 1.0 / m.q()) / s1 : 0.0;
  const double b2 = a[1] > 0.0 ? std::pow(a[1], 1.0 / m.q()) / s2 : 0.0;
  return bivariate_abs_normal_upper_log(b1, b2, rho);
}

}  // namespace fewjumps
