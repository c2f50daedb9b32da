#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fewjumps/common.hpp"
#include "fewjumps/rng.hpp"

namespace fewjumps {

struct EnvelopeResult {
  double value = 0.0;
  Vec argmin;          // a minimizing s >= t (best found)
  bool finite = true;  // false when jbar is +inf on all of {s >= t}
};

/// Tail-rate descriptor: homogeneity index alpha together with the cost
/// density jbar on the nonnegative orthant. The usable rate is the monotone
/// envelope J(t) = inf_{s >= t} jbar(s); when jbar is already componentwise
/// nondecreasing the flag short-circuits that infimum.
struct RateFunctionHandle {
  int k = 0;
  double alpha = 0.0;
  std::function<double(const Vec&)> eval_jbar;
  bool envelope_is_identity = false;
  // Exact envelope for handles whose finite set {jbar < inf} is a
  // lower-dimensional manifold; box descent cannot track those, so such
  // models supply the infimum directly.
  std::function<EnvelopeResult(const Vec&)> envelope_override;
};

/// An ordered list of <= k nonnegative parts summing to the target, with the
/// per-part envelope rates.
struct Decomposition {
  Vec target;
  std::vector<Vec> parts;
  std::vector<double> part_rates;
  double total = 0.0;

  int nonzero_parts(double tol = 1e-12) const;
};

enum class RateMethod { optimizer, oracle, closed_form };

struct RateEvaluation {
  double value = 0.0;
  Decomposition decomposition;
  RateMethod method = RateMethod::optimizer;
  int restarts_used = 0;
  bool converged = true;
};

struct OptimizerOptions {
  int random_restarts = 32;
  double agreement_tol = kAgreementTol;   // relative, best two restarts
  double objective_tol = kObjectiveTol;   // sweep-improvement stop
  double envelope_box_factor = 10.0;      // B in the s <= t + B*||t||*1 box
  int max_sweeps = 200;
  int threads = 1;
  std::uint64_t restart_seed = 0x5eedULL;  // restarts are deterministic
};

/// J(t) = inf over {s >= t componentwise} of eval_jbar(s).
EnvelopeResult monotone_envelope(const RateFunctionHandle& h,
                                 const Ref<const Vec>& t,
                                 const OptimizerOptions& opts = {});

/// Minimum of sum_r J(t^(r)) over decompositions of t into at most k
/// nonnegative parts; multi-start projected descent over split fractions.
RateEvaluation rate_minimize(const RateFunctionHandle& h,
                             const Ref<const Vec>& t,
                             const OptimizerOptions& opts = {});

/// Brute-force grid enumeration of decompositions (test oracle, k <= 3).
/// Split fractions per coordinate live on {0, 1/grid_n, ..., 1}.
RateEvaluation rate_grid_search(const RateFunctionHandle& h,
                                const Ref<const Vec>& t, int grid_n,
                                const OptimizerOptions& opts = {});

struct HomogeneityReport {
  int samples = 0;
  int violations = 0;
  double max_violation = 0.0;
  Vec worst_x;
  double worst_lambda = 1.0;
  bool passed() const { return violations == 0; }
};

/// Samples random (x, lambda) pairs and checks
/// |jbar(lambda x) - lambda^alpha jbar(x)| <= tol * (1 + lambda^alpha jbar(x)).
HomogeneityReport check_homogeneity(const RateFunctionHandle& h, int samples,
                                    double tol, SeededStream stream);

struct ConvexityProbePoint {
  double lambda = 0.0;
  double rate_mix = 0.0;
  double rate_interp = 0.0;  // lambda*I(a) + (1-lambda)*I(b)
  bool convexity_violated = false;
  bool concavity_violated = false;
};

struct ConvexityReport {
  double rate_a = 0.0;
  double rate_b = 0.0;
  std::vector<ConvexityProbePoint> points;
  bool any_convexity_violation = false;
  bool any_concavity_violation = false;
};

/// Midpoint convexity/concavity probe of the decomposition rate along the
/// segment [t_a, t_b].
ConvexityReport convexity_probe(const RateFunctionHandle& h,
                                const Ref<const Vec>& t_a,
                                const Ref<const Vec>& t_b,
                                const std::vector<double>& lambdas,
                                double tol = 1e-8,
                                const OptimizerOptions& opts = {});

}  // namespace fewjumps
