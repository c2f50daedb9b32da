#pragma once

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <string>

namespace fewjumps {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Eigen::Ref;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Library-wide tolerances.
inline constexpr double kVectorEqTol = 1e-9;    // componentwise vector equality
inline constexpr double kObjectiveTol = 1e-8;   // optimizer convergence on objective
inline constexpr double kAgreementTol = 1e-6;   // relative restart agreement

/// Violated input contract (bad parameters, wrong dimensions, out-of-domain values).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced NaN or otherwise failed numerically.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested configuration exceeds a hard implementation cap.
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool is_nonnegative(const Ref<const Vec>& v, double tol = 0.0) {
  return (v.array() >= -tol).all();
}

inline bool is_strictly_positive(const Ref<const Vec>& v) {
  return (v.array() > 0.0).all();
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

}  // namespace fewjumps
