#include "fewjumps/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fewjumps/common.hpp"

namespace fewjumps {

namespace {
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;
}

double normal_logsf(double x) {
  if (x < 20.0) {
    // erfc stays in normal range here.
    return std::log(0.5 * std::erfc(x * 0.70710678118654752440));
  }
  // Mills ratio continued fraction: sf(x)/phi(x) = 1/(x + 1/(x + 2/(x + ...)))
  double cf = 0.0;
  for (int n = 64; n >= 1; --n) cf = static_cast<double>(n) / (x + cf);
  const double mills = 1.0 / (x + cf);
  return -0.5 * x * x - kLogSqrt2Pi + std::log(mills);
}

double normal_sf(double x) { return std::exp(normal_logsf(x)); }

namespace {

// Continued fraction for the incomplete beta (Lentz's algorithm).
double beta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 3e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 400; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double beta_inc(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw PreconditionError("beta_inc: a,b > 0 required");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double beta_inc_inv(double a, double b, double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  double x = a / (a + b);
  for (int it = 0; it < 200; ++it) {
    const double v = beta_inc(a, b, x);
    if (v > p) {
      hi = x;
    } else {
      lo = x;
    }
    const double next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * (1.0 + std::fabs(next))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

BinomialInterval clopper_pearson(long long hits, long long n,
                                 double confidence) {
  if (n <= 0 || hits < 0 || hits > n) {
    throw PreconditionError("clopper_pearson: need 0 <= hits <= n, n >= 1");
  }
  const double alpha = 1.0 - confidence;
  BinomialInterval ci;
  const double h = static_cast<double>(hits);
  const double nn = static_cast<double>(n);
  if (hits == 0) {
    ci.lo = 0.0;
  } else {
    ci.lo = beta_inc_inv(h, nn - h + 1.0, alpha / 2.0);
  }
  if (hits == n) {
    ci.hi = 1.0;
  } else {
    ci.hi = beta_inc_inv(h + 1.0, nn - h, 1.0 - alpha / 2.0);
  }
  return ci;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double m, double fm,
                     double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace fewjumps
