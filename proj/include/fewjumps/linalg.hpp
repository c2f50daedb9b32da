#pragma once

#include "fewjumps/common.hpp"

namespace fewjumps {

/// Eigendecomposition-backed pseudoinverse of a symmetric PSD matrix, with the
/// range projector needed to decide whether x^T A^+ x is finite.
struct PsdPseudoInverse {
  Mat pinv;       // A^+
  Mat projector;  // orthogonal projector onto range(A)
  Mat sqrt_factor;  // U with U U^T = A, columns span range(A) (k x rank)
  Vec eigenvalues;  // all eigenvalues, ascending, tiny ones clipped to 0
  int rank = 0;

  /// True when x lies in range(A): ||(I - P)x|| <= tol * ||x||.
  bool in_range(const Ref<const Vec>& x, double tol = 1e-8) const;

  /// x^T A^+ x with the +infinity convention off range.
  double quad_form(const Ref<const Vec>& x, double range_tol = 1e-8) const;
};

/// Pseudoinverse of symmetric PSD `a`; eigenvalues below
/// `cutoff_rel * max_eigenvalue` are treated as zero.
PsdPseudoInverse psd_pseudo_inverse(const Ref<const Mat>& a,
                                    double cutoff_rel = 1e-10);

/// Symmetric inverse square root of a symmetric positive definite matrix.
Mat symmetric_inverse_sqrt(const Ref<const Mat>& a);

/// Factor L with L L^T = a for symmetric PSD `a` (Cholesky when definite,
/// eigen-factor otherwise).
Mat psd_factor(const Ref<const Mat>& a);

inline bool is_symmetric(const Ref<const Mat>& a, double tol = 1e-12) {
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * (1.0 + a.cwiseAbs().maxCoeff());
}

}  // namespace fewjumps
