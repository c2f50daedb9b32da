#pragma once

#include "fewjumps/common.hpp"
#include "fewjumps/models.hpp"

namespace fewjumps {

/// log P(Y1 >= h, Y2 >= k) for a standard bivariate normal pair with
/// correlation rho; accurate in relative terms arbitrarily deep in the tail.
double bivariate_normal_upper_log(double h, double k, double rho);

/// log P(|Y1| >= b1, |Y2| >= b2) for the same pair.
double bivariate_abs_normal_upper_log(double b1, double b2, double rho);

/// Deterministic deep-tail oracle: log P(Z1 >= a1, Z2 >= a2) where
/// Z_j = |Y_j|^q under the bivariate correlation model. Replaces Monte Carlo
/// below probabilities it cannot reach.
double gauss_power_upper_tail_log(const BivariateGaussPower& m, double a1,
                                  double a2);

/// Same oracle for a general 1- or 2-dimensional GaussPowerModel with
/// positive-definite covariance; thresholds on the uncentered power scale.
double gauss_power_upper_tail_log(const GaussPowerModel& m,
                                  const Ref<const Vec>& a);

}  // namespace fewjumps
