#pragma once

#include <vector>

#include "fewjumps/common.hpp"
#include "fewjumps/rate_function.hpp"
#include "fewjumps/rng.hpp"

namespace fewjumps {

/// Haar-uniform element of the Stiefel manifold: m x N with orthonormal rows.
struct StiefelSample {
  int m = 0;
  int N = 0;
  Mat v;

  double orthonormality_residual() const;  // ||V V^T - Id||_F
};

/// Gaussian matrix polar construction of a Haar-Stiefel sample.
StiefelSample sample_stiefel(int m, int N, SeededStream s);

/// Rescaled support value of the projected lp ball in direction u:
/// ((1/N) sum |<sqrt(N) v_i, u>|^q)^{1/q} with q the Hoelder conjugate of p.
double support_function(const StiefelSample& sample, double p,
                        const Ref<const Vec>& u);

/// Ordered pairwise-distinct unit directions with leading Gram matrices.
struct DirectionSet {
  int m = 0;
  std::vector<Vec> directions;

  Mat gram(int k) const;
  void validate() const;  // unit norms, pairwise distinctness
};

/// Deterministic quasi-uniform sphere set (golden-angle / spiral family).
DirectionSet spiral_directions(int m, int count);

struct SupportRateResult {
  std::vector<double> f_values;
  std::vector<double> j_seq;  // J_1 <= J_2 <= ... <= J_kmax
  double sup_value = 0.0;
  int k_max = 0;
  bool converged = true;  // truncation diagnostic on the last increment
};

/// Large-deviation rate of {support function >= f}: the nondecreasing
/// sequence J_k built from Gaussian-power rates with the direction Gram
/// matrices, and its truncated supremum.
SupportRateResult support_rate(const DirectionSet& ds,
                               const std::vector<double>& f_values, double q,
                               int k_max, const OptimizerOptions& opts = {});

}  // namespace fewjumps
