#include "fewjumps/models.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <utility>

#include "fewjumps/special.hpp"

namespace fewjumps {

double abs_gaussian_moment(double q) {
  require(q > 0.0, "abs_gaussian_moment: q > 0 required");
  return std::exp(0.5 * q * std::log(2.0) + std::lgamma(0.5 * (q + 1.0)) -
                  0.5 * std::log(M_PI));
}

GaussPowerModel::GaussPowerModel(Mat sigma, double q)
    : sigma_(std::move(sigma)), q_(q) {
  require(sigma_.rows() >= 1 && sigma_.rows() == sigma_.cols(),
          "GaussPowerModel: square covariance required");
  require(is_symmetric(sigma_, 1e-12), "GaussPowerModel: covariance must be symmetric");
  require(q_ > 2.0, "GaussPowerModel: q > 2 required");
  pinv_ = psd_pseudo_inverse(sigma_);
  const double resid =
      (sigma_ * pinv_.pinv * sigma_ - sigma_).cwiseAbs().maxCoeff();
  if (resid > 1e-8 * (1.0 + sigma_.cwiseAbs().maxCoeff())) {
    throw EvaluationError("GaussPowerModel: pseudoinverse residual too large");
  }
  const double mq = abs_gaussian_moment(q_);
  mu_q_ = Vec(k());
  for (int j = 0; j < k(); ++j) {
    mu_q_[j] = std::pow(sigma_(j, j), 0.5 * q_) * mq;
  }
}

BivariateGaussPower::BivariateGaussPower(double rho_, double q_)
    : rho(rho_), q(q_) {
  require(std::fabs(rho) < 1.0, "BivariateGaussPower: |rho| < 1 required");
  require(q > 2.0, "BivariateGaussPower: q > 2 required");
}

Mat BivariateGaussPower::sigma() const {
  Mat s(2, 2);
  s << 1.0, rho, rho, 1.0;
  return s;
}

MultivariateWeibullModel::MultivariateWeibullModel(double alpha_,
                                                   double lambda0_,
                                                   Vec lambdas_)
    : alpha(alpha_), lambda0(lambda0_), lambdas(std::move(lambdas_)) {
  require(alpha > 0.0 && alpha < 1.0,
          "MultivariateWeibullModel: alpha in (0,1) required");
  require(lambda0 > 0.0, "MultivariateWeibullModel: lambda0 > 0 required");
  require(lambdas.size() >= 1 && (lambdas.array() > 0.0).all(),
          "MultivariateWeibullModel: all lambdas > 0 required");
}

TwoJumpModel::TwoJumpModel(double epsilon_) : epsilon(epsilon_) {
  require(epsilon > 0.0 && epsilon < 1.0, "TwoJumpModel: epsilon in (0,1) required");
}

MdpGaussModel::MdpGaussModel(Mat sigma) : sigma_(std::move(sigma)) {
  require(sigma_.rows() >= 1 && sigma_.rows() == sigma_.cols(),
          "MdpGaussModel: square covariance required");
  require(is_symmetric(sigma_, 1e-12), "MdpGaussModel: covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma_);
  require(es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 1e-10,
          "MdpGaussModel: covariance must be positive definite");
  inv_ = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

int model_dimension(const ModelSpec& spec) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BivariateGaussPower>) {
          return 2;
        } else {
          return m.k();
        }
      },
      spec);
}

std::string model_family(const ModelSpec& spec) {
  struct Visitor {
    std::string operator()(const GaussPowerModel&) const { return "gauss-power"; }
    std::string operator()(const BivariateGaussPower&) const {
      return "bivariate-gauss-power";
    }
    std::string operator()(const MultivariateWeibullModel&) const {
      return "mv-weibull";
    }
    std::string operator()(const TwoJumpModel&) const { return "two-jump"; }
    std::string operator()(const MdpGaussModel&) const { return "mdp-gauss"; }
  };
  return std::visit(Visitor{}, spec);
}

double gauss_power_jbar(const GaussPowerModel& m, const Ref<const Vec>& z) {
  const int k = m.k();
  require(z.size() == k, "gauss_power_jbar: dimension mismatch");
  require(is_nonnegative(z), "gauss_power_jbar: z >= 0 required");
  if (k > 20) throw UnsupportedError("gauss_power_jbar: k <= 20 required");

  Vec root(k);
  std::vector<int> active;  // sign flips only matter on nonzero components
  for (int j = 0; j < k; ++j) {
    root[j] = std::pow(z[j], 1.0 / m.q());
    if (root[j] > 0.0) active.push_back(j);
  }
  const std::uint64_t patterns = 1ULL << active.size();
  double best = kInf;
  Vec v = root;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    for (std::size_t i = 0; i < active.size(); ++i) {
      v[active[i]] = (mask >> i) & 1 ? -root[active[i]] : root[active[i]];
    }
    best = std::min(best, m.sigma_pinv().quad_form(v));
  }
  return 0.5 * best;
}

double min_norm_cost_program(const Ref<const Mat>& u, const Ref<const Vec>& b,
                             Vec* argmin_w) {
  const int k = static_cast<int>(u.rows());
  const int r = static_cast<int>(u.cols());
  require(b.size() == k, "min_norm_cost_program: dimension mismatch");
  std::vector<int> binding;
  for (int j = 0; j < k; ++j) {
    if (b[j] > 0.0) {
      if (u.row(j).norm() == 0.0) {
        if (argmin_w) *argmin_w = Vec::Zero(r);
        return kInf;  // coordinate can never move
      }
      binding.push_back(j);
    }
  }
  if (binding.empty()) {
    if (argmin_w) *argmin_w = Vec::Zero(r);
    return 0.0;
  }
  const int p = static_cast<int>(binding.size());
  if (p > 12) {
    throw UnsupportedError("min_norm_cost_program: more than 12 binding constraints");
  }

  double best = kInf;
  Vec best_w = Vec::Zero(r);
  std::vector<int> idx;
  for (std::uint32_t subset = 1; subset < (1u << p); ++subset) {
    idx.clear();
    for (int i = 0; i < p; ++i) {
      if ((subset >> i) & 1) idx.push_back(binding[i]);
    }
    const int a = static_cast<int>(idx.size());  // >= 1: subset has a set bit
    // Sign of the first active constraint fixed: w and -w give equal cost.
    const std::uint32_t sign_patterns = a >= 1 ? (1u << (a - 1)) : 1u;
    for (std::uint32_t smask = 0; smask < sign_patterns; ++smask) {
      Vec sgn(a);
      sgn[0] = 1.0;
      for (int i = 1; i < a; ++i) sgn[i] = (smask >> (i - 1)) & 1 ? -1.0 : 1.0;
      Mat g(a, a);
      Vec rhs(a);
      for (int i = 0; i < a; ++i) {
        rhs[i] = b[idx[i]];
        for (int j = 0; j < a; ++j) {
          g(i, j) = sgn[i] * sgn[j] * u.row(idx[i]).dot(u.row(idx[j]));
        }
      }
      Eigen::LDLT<Mat> ldlt(g);
      if (ldlt.info() != Eigen::Success) continue;
      const Vec lam = ldlt.solve(rhs);
      if ((g * lam - rhs).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff())) {
        continue;  // singular active set; a sub-selection covers this point
      }
      Vec w = Vec::Zero(r);
      for (int i = 0; i < a; ++i) w += lam[i] * sgn[i] * u.row(idx[i]).transpose();
      bool feasible = true;
      for (int j : binding) {
        if (std::fabs(u.row(j).dot(w)) < b[j] - 1e-9 * (1.0 + b[j])) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      const double cost = 0.5 * w.squaredNorm();
      if (cost < best) {
        best = cost;
        best_w = w;
      }
    }
  }
  if (argmin_w) *argmin_w = best_w;
  return best;
}

EnvelopeResult gauss_power_envelope(const GaussPowerModel& m,
                                    const Ref<const Vec>& t) {
  const int k = m.k();
  require(t.size() == k, "gauss_power_envelope: dimension mismatch");
  require(is_nonnegative(t), "gauss_power_envelope: t >= 0 required");
  Vec b(k);
  for (int j = 0; j < k; ++j) b[j] = std::pow(t[j], 1.0 / m.q());
  Vec w;
  const double value = min_norm_cost_program(m.sigma_pinv().sqrt_factor, b, &w);
  EnvelopeResult out;
  out.value = value;
  out.finite = std::isfinite(value);
  out.argmin = t;
  if (out.finite) {
    for (int j = 0; j < k; ++j) {
      const double reach = std::pow(std::fabs(m.sigma_pinv().sqrt_factor.row(j).dot(w)),
                                    m.q());
      out.argmin[j] = std::max(t[j], reach);
    }
  }
  return out;
}

double bivariate_gauss_power_jbar(const BivariateGaussPower& m, double z1,
                                  double z2) {
  require(z1 >= 0.0 && z2 >= 0.0, "bivariate_gauss_power_jbar: z >= 0 required");
  const double a = std::pow(z1, 1.0 / m.q);
  const double b = std::pow(z2, 1.0 / m.q);
  return (a * a + b * b - 2.0 * std::fabs(m.rho) * a * b) /
         (2.0 * (1.0 - m.rho * m.rho));
}

double weibull_log_survival(const MultivariateWeibullModel& m,
                            const Ref<const Vec>& t) {
  require(t.size() == m.k(), "weibull_log_survival: dimension mismatch");
  require(is_nonnegative(t), "weibull_log_survival: t >= 0 required");
  double s = 0.0;
  for (int j = 0; j < m.k(); ++j) s += m.lambdas[j] * std::pow(t[j], m.alpha);
  s += m.lambda0 * std::pow(t.maxCoeff(), m.alpha);
  return -s;
}

double weibull_rate(const MultivariateWeibullModel& m,
                    const Ref<const Vec>& t) {
  return -weibull_log_survival(m, t);
}

Vec weibull_mean(const MultivariateWeibullModel& m) {
  // E T_j = integral of the marginal survival exp(-(lambda_j + lambda0) t^alpha),
  // evaluated as (1/alpha) int u^{1/alpha - 1} exp(-mu u) du.
  Vec mean(m.k());
  for (int j = 0; j < m.k(); ++j) {
    const double mu = m.lambdas[j] + m.lambda0;
    const double expo = 1.0 / m.alpha - 1.0;
    const double upper = 50.0 / mu;
    const auto f = [&](double u) {
      return u <= 0.0 ? 0.0 : std::pow(u, expo) * std::exp(-mu * u);
    };
    const double peak = f(std::min(std::max(expo / mu, 1e-12), upper));
    mean[j] =
        integrate_adaptive(f, 0.0, upper, 1e-13 * std::max(peak, 1.0) * upper) /
        m.alpha;
  }
  return mean;
}

double two_jump_rate(const TwoJumpModel& m, double t1, double t2) {
  require(t1 >= 0.0 && t2 >= 0.0, "two_jump_rate: t >= 0 required");
  const double branch1 = std::max(t1, t2 / m.epsilon);
  const double branch2 = std::max(t1 / m.epsilon, t2);
  return std::sqrt(std::min(branch1, branch2));
}

MdpRateResult mdp_rate(const MdpGaussModel& m, const Ref<const Vec>& t) {
  const int k = m.k();
  require(t.size() == k, "mdp_rate: dimension mismatch");
  require(is_strictly_positive(t), "mdp_rate: t > 0 required");
  if (k > 12) throw UnsupportedError("mdp_rate: k <= 12 required");
  const Mat& q = m.sigma_inv();

  MdpRateResult best;
  best.value = kInf;
  // All candidate active sets; the optimum's own set yields a feasible exact
  // solve, so the feasible minimum is the exact QP optimum.
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> act, fre;
    for (int j = 0; j < k; ++j) {
      if ((mask >> j) & 1) {
        act.push_back(j);
      } else {
        fre.push_back(j);
      }
    }
    Vec z(k);
    for (int j : act) z[j] = t[j];
    if (!fre.empty()) {
      Mat qff(fre.size(), fre.size());
      Vec rhs = Vec::Zero(fre.size());
      for (std::size_t i = 0; i < fre.size(); ++i) {
        for (std::size_t j = 0; j < fre.size(); ++j) {
          qff(i, j) = q(fre[i], fre[j]);
        }
        for (int j : act) rhs[i] -= q(fre[i], j) * t[j];
      }
      const Vec zf = qff.ldlt().solve(rhs);
      bool feasible = true;
      for (std::size_t i = 0; i < fre.size(); ++i) {
        if (zf[i] < t[fre[i]] - 1e-12 * (1.0 + std::fabs(t[fre[i]]))) {
          feasible = false;
          break;
        }
        z[fre[i]] = std::max(zf[i], t[fre[i]]);
      }
      if (!feasible) continue;
    }
    const double value = 0.5 * z.dot(q * z);
    if (value < best.value) {
      best.value = value;
      best.argmin = z;
    }
  }
  if (!std::isfinite(best.value)) {
    throw EvaluationError("mdp_rate: no feasible active set found");
  }
  return best;
}

RateFunctionHandle make_rate_handle(const GaussPowerModel& m) {
  RateFunctionHandle h;
  h.k = m.k();
  h.alpha = m.alpha();
  const bool diagonal =
      (m.sigma() - Mat(m.sigma().diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  h.envelope_is_identity = (m.k() == 1) || diagonal;
  h.eval_jbar = [m](const Vec& z) { return gauss_power_jbar(m, z); };
  if (m.sigma_pinv().rank < m.k()) {
    h.envelope_override = [m](const Vec& t) { return gauss_power_envelope(m, t); };
  }
  return h;
}

RateFunctionHandle make_rate_handle(const BivariateGaussPower& m) {
  RateFunctionHandle h;
  h.k = 2;
  h.alpha = m.alpha();
  h.envelope_is_identity = (m.rho == 0.0);
  h.eval_jbar = [m](const Vec& z) {
    require(z.size() == 2, "bivariate jbar: dimension mismatch");
    return bivariate_gauss_power_jbar(m, z[0], z[1]);
  };
  return h;
}

RateFunctionHandle make_rate_handle(const MultivariateWeibullModel& m) {
  RateFunctionHandle h;
  h.k = m.k();
  h.alpha = m.alpha;
  h.envelope_is_identity = true;
  h.eval_jbar = [m](const Vec& t) { return weibull_rate(m, t); };
  return h;
}

RateFunctionHandle make_rate_handle(const TwoJumpModel& m) {
  RateFunctionHandle h;
  h.k = 2;
  h.alpha = TwoJumpModel::alpha();
  h.envelope_is_identity = true;
  h.eval_jbar = [m](const Vec& t) {
    require(t.size() == 2, "two-jump rate: dimension mismatch");
    return two_jump_rate(m, t[0], t[1]);
  };
  return h;
}

RateFunctionHandle make_rate_handle(const ModelSpec& spec) {
  if (std::holds_alternative<MdpGaussModel>(spec)) {
    throw PreconditionError(
        "mdp-gauss is a moderate-deviation model; it has no stretched-exponential rate handle");
  }
  return std::visit(
      [](const auto& m) -> RateFunctionHandle {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, MdpGaussModel>) {
          throw PreconditionError("unreachable");
        } else {
          return make_rate_handle(m);
        }
      },
      spec);
}

}  // namespace fewjumps
