#pragma once

#include <cstdint>
#include <vector>

#include "fewjumps/common.hpp"
#include "fewjumps/models.hpp"
#include "fewjumps/rng.hpp"

namespace fewjumps {

/// Orthant tail estimate with an exact binomial confidence interval, on the
/// log-probability scale. hits == 0 yields log_prob == -inf with a finite
/// upper CI bound.
struct TailEstimate {
  Vec threshold;        // t
  double scale = 1.0;   // x
  long long hits = 0;
  long long n = 0;
  double log_prob = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct EmpiricalRateCurve {
  std::vector<double> scales;
  std::vector<double> normalized;  // (1/x^alpha) log p-hat
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  double predicted = 0.0;  // -J(t)
  std::vector<TailEstimate> estimates;
};

/// Centered absolute Gaussian powers, one sample per row.
Mat sample_gauss_power(const GaussPowerModel& m, long long n, SeededStream s);
Mat sample_bivariate_gauss_power(const BivariateGaussPower& m, long long n,
                                 SeededStream s);

/// Marshall-Olkin multivariate Weibull (uncentered, nonnegative rows):
/// U_j = min(E_j / lambda_j, E_0 / lambda_0), T_j = U_j^{1/alpha}.
Mat sample_mo_weibull(const MultivariateWeibullModel& m, long long n,
                      SeededStream s);

/// R*(V1*S1, V2*S2) rows with inverse-CDF R, V uniform on {(1,eps),(eps,1)},
/// Rademacher signs.
Mat sample_two_jump(const TwoJumpModel& m, long long n, SeededStream s);

Mat sample_mdp_gauss(const MdpGaussModel& m, long long n, SeededStream s);

/// Dispatch on the family; Weibull rows stay uncentered (its survival law is
/// stated for the raw vector), all other families are centered by definition.
Mat sample_model(const ModelSpec& spec, long long n, SeededStream s);

/// Counts batch rows >= x*t componentwise; exact 95% binomial CI.
TailEstimate estimate_orthant_tail(const Ref<const Mat>& batch,
                                   const Ref<const Vec>& t, double x);

/// Streaming version: draws n fresh samples of the model and counts, sharded
/// over substreams so the result is independent of the thread schedule.
TailEstimate model_orthant_tail(const ModelSpec& spec, const Ref<const Vec>& t,
                                double x, long long n, SeededStream s,
                                int threads = 1);

/// Tail curve over increasing scales, fresh substream per scale; predicted
/// value is -J(t) from the model's rate handle.
EmpiricalRateCurve empirical_rate_curve(const ModelSpec& spec,
                                        const Ref<const Vec>& t,
                                        const std::vector<double>& scales,
                                        long long n_per_scale, SeededStream s,
                                        int threads = 1);

/// Simulates n_trials sums of N centered samples and estimates the orthant
/// probability at threshold x_N * t. The Gaussian moderate-deviation family
/// uses the exact distribution of the sum (sum of N iid Gaussians is again
/// Gaussian), which is bit-for-bit a fast path, not an approximation.
TailEstimate sum_experiment(const ModelSpec& spec, long long N, double x_N,
                            const Ref<const Vec>& t, long long n_trials,
                            SeededStream s, int threads = 1);

struct LeftTailReport {
  Vec c;                      // fitted per-coordinate constants; +inf when the
                              // empirical left tail is empty past the grid
  std::vector<bool> bounded;  // true when no sample fell below any -t in grid
  std::vector<double> thresholds;
};

/// Fits the largest c_j with log P(Y_j <= -t) <= -c_j t^alpha over the
/// observed range (diagnostic, report-only).
LeftTailReport check_left_tail(const Ref<const Mat>& batch, double alpha,
                               std::vector<double> thresholds = {});

/// One row per sample; the header comment echoes the model JSON.
void write_batch_csv(const std::string& path, const ModelSpec& spec,
                     const Ref<const Mat>& batch);

}  // namespace fewjumps
