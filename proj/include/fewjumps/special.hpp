#pragma once

#include <functional>

namespace fewjumps {

/// log P(Z > x) for standard normal Z, accurate into the far tail.
double normal_logsf(double x);

/// P(Z > x) for standard normal Z.
double normal_sf(double x);

/// Regularized incomplete beta function I_x(a, b).
double beta_inc(double a, double b, double x);

/// Quantile of Beta(a, b): smallest x with I_x(a,b) >= p.
double beta_inc_inv(double a, double b, double p);

struct BinomialInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Exact (Clopper-Pearson) two-sided confidence interval for a binomial
/// proportion with `hits` successes out of `n` trials.
BinomialInterval clopper_pearson(long long hits, long long n,
                                 double confidence = 0.95);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance `tol`.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-12, int max_depth = 48);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

}  // namespace fewjumps
