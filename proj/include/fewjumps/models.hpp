#pragma once

#include <string>
#include <variant>

#include "fewjumps/common.hpp"
#include "fewjumps/linalg.hpp"
#include "fewjumps/rate_function.hpp"

namespace fewjumps {

/// Absolute q-th moment of a standard Gaussian, M_q = 2^{q/2} Gamma((q+1)/2) / sqrt(pi).
double abs_gaussian_moment(double q);

/// Componentwise absolute q-th powers of a centered Gaussian vector with
/// covariance sigma (positive semidefinite), q > 2.
class GaussPowerModel {
 public:
  GaussPowerModel(Mat sigma, double q);

  int k() const { return static_cast<int>(sigma_.rows()); }
  double q() const { return q_; }
  double alpha() const { return 2.0 / q_; }
  const Mat& sigma() const { return sigma_; }
  const PsdPseudoInverse& sigma_pinv() const { return pinv_; }
  const Vec& centering() const { return mu_q_; }  // sigma_jj^{q/2} M_q

 private:
  Mat sigma_;
  double q_;
  PsdPseudoInverse pinv_;
  Vec mu_q_;
};

/// k = 2 Gaussian powers with a correlation matrix [[1, rho], [rho, 1]].
struct BivariateGaussPower {
  double rho;
  double q;

  BivariateGaussPower(double rho_, double q_);
  double alpha() const { return 2.0 / q; }
  Mat sigma() const;
};

/// Marshall-Olkin multivariate Weibull: common shock rate lambda0, marginal
/// rates lambdas, tail index alpha in (0,1).
struct MultivariateWeibullModel {
  double alpha;
  double lambda0;
  Vec lambdas;

  MultivariateWeibullModel(double alpha_, double lambda0_, Vec lambdas_);
  int k() const { return static_cast<int>(lambdas.size()); }
};

/// Planar heavy-tailed vector R * (V1 S1, V2 S2) with V uniform on
/// {(1, eps), (eps, 1)}, Rademacher signs, and P(R >= t) = exp(-sqrt(t)).
struct TwoJumpModel {
  double epsilon;

  explicit TwoJumpModel(double epsilon_);
  static constexpr double alpha() { return 0.5; }
  static constexpr int k() { return 2; }
};

/// Gaussian covariance model for the moderate-deviation quadratic rate.
class MdpGaussModel {
 public:
  explicit MdpGaussModel(Mat sigma);
  int k() const { return static_cast<int>(sigma_.rows()); }
  const Mat& sigma() const { return sigma_; }
  const Mat& sigma_inv() const { return inv_; }

 private:
  Mat sigma_;
  Mat inv_;
};

using ModelSpec = std::variant<GaussPowerModel, BivariateGaussPower,
                               MultivariateWeibullModel, TwoJumpModel,
                               MdpGaussModel>;

int model_dimension(const ModelSpec& spec);
std::string model_family(const ModelSpec& spec);

/// jbar(z) = 1/2 min over sign vectors eps of (eps . z^{1/q})^T Sigma^+ (eps . z^{1/q});
/// +inf when the signed power vector is outside range(Sigma) for every eps.
double gauss_power_jbar(const GaussPowerModel& m, const Ref<const Vec>& z);

/// Exact monotone envelope of gauss_power_jbar via the Gaussian-cost program
///   min 1/2 ||w||^2  s.t.  |<u_j, w>| >= t_j^{1/q},
/// where u_j are the rows of a factor U with U U^T = Sigma. Valid for any
/// PSD Sigma, including rank-deficient ones.
EnvelopeResult gauss_power_envelope(const GaussPowerModel& m,
                                    const Ref<const Vec>& t);

/// Same Gaussian-cost program for an explicit factor (rows u_j, b_j = t_j^{1/q}).
double min_norm_cost_program(const Ref<const Mat>& u, const Ref<const Vec>& b,
                             Vec* argmin_w = nullptr);

/// Closed-form jbar of the bivariate correlation model.
double bivariate_gauss_power_jbar(const BivariateGaussPower& m, double z1,
                                  double z2);

/// log P(X > t) = -sum_j lambda_j t_j^alpha - lambda0 (max_j t_j)^alpha.
double weibull_log_survival(const MultivariateWeibullModel& m,
                            const Ref<const Vec>& t);

/// The (already monotone) tail rate -log survival exponent.
double weibull_rate(const MultivariateWeibullModel& m, const Ref<const Vec>& t);

/// Marginal means E T_j, computed by quadrature of the survival functions.
Vec weibull_mean(const MultivariateWeibullModel& m);

/// J(t1,t2) = min{ max(t1, t2/eps)^{1/2}, max(t1/eps, t2)^{1/2} }.
double two_jump_rate(const TwoJumpModel& m, double t1, double t2);

struct MdpRateResult {
  double value = 0.0;
  Vec argmin;
};

/// inf over {z >= t} of 1/2 z^T Sigma^{-1} z, by exhaustive active-set
/// enumeration (exact for this convex QP, k <= 12).
MdpRateResult mdp_rate(const MdpGaussModel& m, const Ref<const Vec>& t);

RateFunctionHandle make_rate_handle(const GaussPowerModel& m);
RateFunctionHandle make_rate_handle(const BivariateGaussPower& m);
RateFunctionHandle make_rate_handle(const MultivariateWeibullModel& m);
RateFunctionHandle make_rate_handle(const TwoJumpModel& m);
RateFunctionHandle make_rate_handle(const ModelSpec& spec);

}  // namespace fewjumps
