#include "fewjumps/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace fewjumps {

bool PsdPseudoInverse::in_range(const Ref<const Vec>& x, double tol) const {
  const double nx = x.norm();
  if (nx == 0.0) return true;
  const double resid = (x - projector * x).norm();
  return resid <= tol * nx;
}

double PsdPseudoInverse::quad_form(const Ref<const Vec>& x,
                                   double range_tol) const {
  if (!in_range(x, range_tol)) return kInf;
  return x.dot(pinv * x);
}

PsdPseudoInverse psd_pseudo_inverse(const Ref<const Mat>& a,
                                    double cutoff_rel) {
  require(a.rows() == a.cols(), "psd_pseudo_inverse: square matrix required");
  require(is_symmetric(a), "psd_pseudo_inverse: symmetric matrix required");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) {
    throw EvaluationError("psd_pseudo_inverse: eigendecomposition failed");
  }
  const int k = static_cast<int>(a.rows());
  Vec lam = es.eigenvalues();
  const Mat& q = es.eigenvectors();
  const double lmax = lam.size() ? lam.maxCoeff() : 0.0;
  require(lam.minCoeff() >= -1e-10 * std::max(1.0, lmax),
          "psd_pseudo_inverse: matrix is not positive semidefinite");
  const double cutoff = cutoff_rel * std::max(lmax, 0.0);

  PsdPseudoInverse out;
  out.eigenvalues = lam.cwiseMax(0.0);
  Vec inv = Vec::Zero(k);
  Vec unit = Vec::Zero(k);
  int rank = 0;
  for (int i = 0; i < k; ++i) {
    if (out.eigenvalues[i] > cutoff) {
      inv[i] = 1.0 / out.eigenvalues[i];
      unit[i] = 1.0;
      ++rank;
    } else {
      out.eigenvalues[i] = 0.0;
    }
  }
  out.rank = rank;
  out.pinv = q * inv.asDiagonal() * q.transpose();
  out.projector = q * unit.asDiagonal() * q.transpose();
  out.sqrt_factor = Mat(k, rank);
  int col = 0;
  for (int i = 0; i < k; ++i) {
    if (unit[i] > 0.0) {
      out.sqrt_factor.col(col++) = q.col(i) * std::sqrt(out.eigenvalues[i]);
    }
  }
  return out;
}

Mat symmetric_inverse_sqrt(const Ref<const Mat>& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) {
    throw EvaluationError("symmetric_inverse_sqrt: eigendecomposition failed");
  }
  const Vec& lam = es.eigenvalues();
  if (lam.minCoeff() <= 0.0) {
    throw EvaluationError("symmetric_inverse_sqrt: matrix not positive definite");
  }
  return es.eigenvectors() *
         lam.cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

Mat psd_factor(const Ref<const Mat>& a) {
  Eigen::LLT<Mat> llt(a);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  const PsdPseudoInverse p = psd_pseudo_inverse(a);
  return p.sqrt_factor;
}

}  // namespace fewjumps
