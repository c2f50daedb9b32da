#include <doctest.h>

#include <cmath>

#include "fewjumps/models.hpp"
#include "fewjumps/rate_function.hpp"
#include "fewjumps/rng.hpp"

using namespace fewjumps;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

OptimizerOptions fast_opts() {
  OptimizerOptions o;
  o.random_restarts = 16;
  return o;
}

}  // namespace

TEST_CASE("envelope of the bivariate model on the axis") {
  // For positive correlation the infimum over {s >= (t, 0)} sits at the
  // valley (t, rho^q t) with value t^{2/q}/2.
  const BivariateGaussPower m(0.5, 3.0);
  const auto h = make_rate_handle(m);
  for (double t : {0.5, 1.0, 2.7}) {
    const EnvelopeResult env = monotone_envelope(h, vec2(t, 0.0));
    CHECK(env.value == doctest::Approx(0.5 * std::pow(t, 2.0 / 3.0)).epsilon(1e-9));
    CHECK(env.argmin[1] == doctest::Approx(std::pow(0.5, 3.0) * t).epsilon(1e-3));
  }
}

TEST_CASE("identity envelope returns jbar directly") {
  const auto h = make_rate_handle(MultivariateWeibullModel(0.5, 1.0, Vec::Ones(2)));
  const Vec t = vec2(2.0, 3.0);
  CHECK(monotone_envelope(h, t).value == doctest::Approx(h.eval_jbar(t)));
}

TEST_CASE("envelope at rho = 0 equals jbar (grid-verified)") {
  const BivariateGaussPower m(0.0, 3.0);
  const auto h = make_rate_handle(m);
  const Vec t = vec2(1.0, 1.0);
  const double env = monotone_envelope(h, t).value;
  // Independent oracle: grid minimization over s >= (1,1) at resolution 1e-3.
  double grid_min = std::numeric_limits<double>::infinity();
  for (double s1 = 1.0; s1 <= 3.0; s1 += 1e-3) {
    for (double s2 = 1.0; s2 <= 3.0; s2 += 1e-3) {
      grid_min = std::min(grid_min, bivariate_gauss_power_jbar(m, s1, s2));
    }
  }
  CHECK(grid_min == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(env == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rate descriptors vanish at zero and are positive off zero") {
  std::vector<RateFunctionHandle> handles;
  handles.push_back(make_rate_handle(BivariateGaussPower(0.5, 3.0)));
  handles.push_back(make_rate_handle(TwoJumpModel(0.3)));
  handles.push_back(
      make_rate_handle(MultivariateWeibullModel(0.5, 1.0, Vec::Ones(2))));
  Mat coupled(2, 2);
  coupled << 1.0, 0.6, 0.6, 1.0;
  handles.push_back(make_rate_handle(GaussPowerModel(coupled, 4.0)));
  SeededStream s(91, 0);
  for (const auto& h : handles) {
    CHECK(h.eval_jbar(Vec::Zero(2)) == 0.0);
    CHECK(monotone_envelope(h, Vec::Zero(2)).value == 0.0);
    for (int i = 0; i < 25; ++i) {
      Vec t = vec2(s.uniform(0.0, 2.0), s.uniform(0.0, 2.0));
      t[i % 2] = std::max(t[i % 2], 1e-3);  // nonzero target
      CHECK(monotone_envelope(h, t).value > 0.0);
    }
  }
}

TEST_CASE("envelope dominance and monotone argmin") {
  SeededStream s(3, 14);
  const BivariateGaussPower m(0.7, 4.0);
  const auto h = make_rate_handle(m);
  for (int i = 0; i < 50; ++i) {
    const Vec t = vec2(s.uniform(0.0, 3.0), s.uniform(0.0, 3.0));
    const EnvelopeResult env = monotone_envelope(h, t);
    CHECK(env.value <= h.eval_jbar(t) + 1e-12);
    CHECK((env.argmin.array() >= t.array() - 1e-12).all());
  }
}

TEST_CASE("exact cost-program envelope agrees with box descent") {
  SeededStream s(17, 2);
  for (int trial = 0; trial < 25; ++trial) {
    const double rho = s.uniform(-0.8, 0.8);
    const double q = s.uniform(2.2, 5.0);
    const BivariateGaussPower biv(rho, q);
    const GaussPowerModel full(biv.sigma(), q);
    const auto h = make_rate_handle(biv);
    const Vec t = vec2(s.uniform(0.0, 2.5), s.uniform(0.0, 2.5));
    const double generic = monotone_envelope(h, t).value;
    const double exact = gauss_power_envelope(full, t).value;
    CHECK(generic == doctest::Approx(exact).epsilon(1e-7));
  }
}

TEST_CASE("rank-deficient covariance envelope via the cost program") {
  Mat sigma(2, 2);
  sigma << 1.0, 1.0, 1.0, 1.0;
  const GaussPowerModel m(sigma, 3.0);
  const auto h = make_rate_handle(m);
  // Feasible points have equal components; lifting (1,2) to (2,2) costs
  // jbar(2,2) = 2^{2/3}/2.
  const EnvelopeResult env = monotone_envelope(h, vec2(1.0, 2.0));
  CHECK(env.finite);
  CHECK(env.value == doctest::Approx(0.5 * std::pow(2.0, 2.0 / 3.0)).epsilon(1e-10));
  // A degenerate coordinate with zero variance can never deviate.
  Mat half = Mat::Zero(2, 2);
  half(0, 0) = 1.0;
  const GaussPowerModel dead(half, 3.0);
  const auto hd = make_rate_handle(dead);
  CHECK(!monotone_envelope(hd, vec2(1.0, 1.0)).finite);
  CHECK(monotone_envelope(hd, vec2(1.0, 0.0)).finite);
}

TEST_CASE("two-jump minimization splits into two parts") {
  const TwoJumpModel m(0.1);
  const auto h = make_rate_handle(m);
  const RateEvaluation ev = rate_minimize(h, vec2(1.0, 1.0), fast_opts());
  CHECK(ev.value <= 2.0 + 1e-6);
  CHECK(ev.decomposition.nonzero_parts() == 2);
  CHECK(ev.converged);
  CHECK(ev.value == ev.decomposition.total);
  // Fine 2-part scan oracle: the balanced split (c*(eps,1), c*(1,eps)) with
  // c = 1/(1+eps) gives 2/sqrt(1+eps); nothing on a 2000^2 grid beats it.
  double scan = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i) {
    for (int j = 0; j <= 2000; ++j) {
      const double a = i / 2000.0, b = j / 2000.0;
      scan = std::min(scan, two_jump_rate(m, a, b) +
                                two_jump_rate(m, 1.0 - a, 1.0 - b));
    }
  }
  const double balanced = 2.0 / std::sqrt(1.1);
  CHECK(scan >= balanced - 1e-9);
  CHECK(ev.value == doctest::Approx(balanced).epsilon(1e-7));
  // Parts sum to the target.
  Vec sum = Vec::Zero(2);
  for (const Vec& p : ev.decomposition.parts) sum += p;
  CHECK((sum - vec2(1.0, 1.0)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("one-dimensional rate is the envelope itself") {
  Mat s1(1, 1);
  s1 << 1.0;
  const auto h = make_rate_handle(GaussPowerModel(s1, 3.0));
  Vec t(1);
  t << 2.0;
  const RateEvaluation ev = rate_minimize(h, t);
  CHECK(ev.value == doctest::Approx(0.5 * std::pow(2.0, 2.0 / 3.0)).epsilon(1e-12));
  CHECK(ev.decomposition.parts.size() == 1);
}

TEST_CASE("axis rate of the bivariate model") {
  const BivariateGaussPower m(0.5, 3.0);
  const auto h = make_rate_handle(m);
  const RateEvaluation ev = rate_minimize(h, vec2(1.0, 1e-6), fast_opts());
  CHECK(ev.value == doctest::Approx(0.5).epsilon(2e-4));
}

TEST_CASE("grid oracle basics") {
  const TwoJumpModel m(0.1);
  const auto h = make_rate_handle(m);
  const RateEvaluation oracle = rate_grid_search(h, vec2(1.0, 1.0), 200);
  CHECK(oracle.value <= 2.0 + 1e-6);  // (1,0)+(0,1) lies on the grid
  CHECK(oracle.method == RateMethod::oracle);

  const BivariateGaussPower biv(0.0, 3.0);
  const auto hb = make_rate_handle(biv);
  const RateEvaluation opt = rate_minimize(hb, vec2(1.0, 1.0), fast_opts());
  const RateEvaluation orc = rate_grid_search(hb, vec2(1.0, 1.0), 100);
  CHECK(orc.value >= opt.value - 1e-8);
  CHECK(std::fabs(opt.value - orc.value) <= 1e-3 * orc.value);

  Mat s1(1, 1);
  s1 << 1.0;
  const auto h1 = make_rate_handle(GaussPowerModel(s1, 3.0));
  Vec t1(1);
  t1 << 1.4;
  for (int n : {2, 7, 50}) {
    CHECK(rate_grid_search(h1, t1, n).value ==
          doctest::Approx(monotone_envelope(h1, t1).value).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rate_grid_search(hb, vec2(1.0, 1.0), 1), PreconditionError);
}

TEST_CASE("oracle dominance and shrinking gap") {
  const TwoJumpModel m(0.35);
  const auto h = make_rate_handle(m);
  const Vec t = vec2(1.3, 0.8);
  const double opt = rate_minimize(h, t, fast_opts()).value;
  double prev_gap = std::numeric_limits<double>::infinity();
  for (int n : {25, 100, 400}) {
    const double orc = rate_grid_search(h, t, n).value;
    CHECK(opt <= orc + 1e-8);
    const double gap = orc - opt;
    CHECK(gap <= prev_gap + 1e-9);
    prev_gap = gap;
  }
  CHECK(prev_gap < 5e-3);
}

TEST_CASE("rate homogeneity in the target") {
  const auto check_model = [](const RateFunctionHandle& h, const Vec& t) {
    const double base = rate_minimize(h, t, fast_opts()).value;
    for (double lambda : {0.5, 2.0, 10.0}) {
      const double scaled = rate_minimize(h, Vec(lambda * t), fast_opts()).value;
      CHECK(scaled ==
            doctest::Approx(std::pow(lambda, h.alpha) * base).epsilon(1e-6));
    }
  };
  check_model(make_rate_handle(TwoJumpModel(0.25)), vec2(1.0, 0.7));
  check_model(make_rate_handle(BivariateGaussPower(0.4, 3.0)), vec2(0.9, 1.4));
  check_model(make_rate_handle(MultivariateWeibullModel(0.5, 1.0, Vec::Ones(2))),
              vec2(1.1, 0.4));
}

TEST_CASE("rate monotonicity in the target") {
  SeededStream s(31, 8);
  const auto h = make_rate_handle(TwoJumpModel(0.15));
  const auto hb = make_rate_handle(BivariateGaussPower(0.5, 3.0));
  for (int i = 0; i < 20; ++i) {
    const Vec t = vec2(s.uniform(0.2, 2.0), s.uniform(0.2, 2.0));
    const Vec up = vec2(t[0] + s.uniform(0.0, 1.0), t[1] + s.uniform(0.0, 1.0));
    CHECK(rate_minimize(h, t, fast_opts()).value <=
          rate_minimize(h, up, fast_opts()).value + 1e-8);
    if (i < 6) {
      CHECK(rate_minimize(hb, t, fast_opts()).value <=
            rate_minimize(hb, up, fast_opts()).value + 1e-8);
    }
  }
}

TEST_CASE("rate subadditivity across targets") {
  SeededStream s(77, 1);
  const auto h = make_rate_handle(BivariateGaussPower(0.6, 3.0));
  for (int i = 0; i < 8; ++i) {
    const Vec a = vec2(s.uniform(0.2, 1.5), s.uniform(0.2, 1.5));
    const Vec b = vec2(s.uniform(0.2, 1.5), s.uniform(0.2, 1.5));
    const double ia = rate_minimize(h, a, fast_opts()).value;
    const double ib = rate_minimize(h, b, fast_opts()).value;
    const double iab = rate_minimize(h, Vec(a + b), fast_opts()).value;
    CHECK(iab <= ia + ib + 1e-8);
  }
}

TEST_CASE("one-jump upper bound") {
  SeededStream s(13, 13);
  const auto h = make_rate_handle(BivariateGaussPower(0.45, 3.4));
  for (int i = 0; i < 12; ++i) {
    const Vec t = vec2(s.uniform(0.1, 2.0), s.uniform(0.1, 2.0));
    CHECK(rate_minimize(h, t, fast_opts()).value <=
          monotone_envelope(h, t).value + 1e-8);
  }
}

TEST_CASE("deterministic tie-break prefers fewer parts") {
  // Independent coordinates: one-jump and axis split tie in value; the
  // one-part decomposition must win, identically on repeat runs.
  const auto h = make_rate_handle(BivariateGaussPower(0.0, 3.0));
  const RateEvaluation e1 = rate_minimize(h, vec2(1.0, 1.0), fast_opts());
  const RateEvaluation e2 = rate_minimize(h, vec2(1.0, 1.0), fast_opts());
  CHECK(e1.decomposition.parts.size() == 1);
  CHECK(e1.value == e2.value);
  REQUIRE(e1.decomposition.parts.size() == e2.decomposition.parts.size());
  for (std::size_t i = 0; i < e1.decomposition.parts.size(); ++i) {
    CHECK((e1.decomposition.parts[i] - e2.decomposition.parts[i]).norm() == 0.0);
  }
}

TEST_CASE("threaded restarts match the serial reduction") {
  const auto h = make_rate_handle(TwoJumpModel(0.1));
  OptimizerOptions serial = fast_opts();
  OptimizerOptions parallel = fast_opts();
  parallel.threads = 4;
  const RateEvaluation a = rate_minimize(h, vec2(1.0, 1.0), serial);
  const RateEvaluation b = rate_minimize(h, vec2(1.0, 1.0), parallel);
  CHECK(a.value == b.value);
  REQUIRE(a.decomposition.parts.size() == b.decomposition.parts.size());
  for (std::size_t i = 0; i < a.decomposition.parts.size(); ++i) {
    CHECK((a.decomposition.parts[i] - b.decomposition.parts[i]).norm() == 0.0);
  }
}

TEST_CASE("homogeneity checker") {
  const auto hw = make_rate_handle(MultivariateWeibullModel(0.5, 1.0, Vec::Ones(2)));
  const auto rep = check_homogeneity(hw, 1000, 1e-10, SeededStream(8, 0));
  CHECK(rep.passed());

  const auto hb = make_rate_handle(BivariateGaussPower(0.5, 3.0));
  CHECK(hb.eval_jbar(vec2(8.0, 8.0)) ==
        doctest::Approx(4.0 * hb.eval_jbar(vec2(1.0, 1.0))).epsilon(1e-12));

  const auto ht = make_rate_handle(TwoJumpModel(0.3));
  CHECK(ht.eval_jbar(vec2(4.0, 8.0)) ==
        doctest::Approx(2.0 * ht.eval_jbar(vec2(1.0, 2.0))).epsilon(1e-12));
}

TEST_CASE("convexity probe reproduces both failures") {
  const double q = 3.0, rho = 0.5, p = 2.0 / q;
  const auto h = make_rate_handle(BivariateGaussPower(rho, q));
  const double delta = 1e-6;

  // Along the axis the rate is strictly midpoint-superadditive.
  const ConvexityReport conv = convexity_probe(
      h, vec2(1.0, delta), vec2(delta, delta), {0.5}, 1e-8, fast_opts());
  CHECK(conv.any_convexity_violation);
  CHECK(conv.points[0].rate_mix ==
        doctest::Approx(std::pow(2.0, -(1.0 + p))).epsilon(1e-3));

  // Mixing the two axis points at eps = rho^q/(1+rho^q) undershoots the chord.
  const double eps = std::pow(rho, q) / (1.0 + std::pow(rho, q));
  const ConvexityReport conc = convexity_probe(
      h, vec2(1.0, delta), vec2(delta, 1.0), {eps}, 1e-8, fast_opts());
  CHECK(conc.any_concavity_violation);
  CHECK(conc.points[0].rate_mix <= 0.5 * std::pow(1.0 - eps, p) + 1e-3);
  CHECK(conc.points[0].rate_mix < 0.5);

  // k = 1: a concave power never violates concavity along the ray.
  Mat s1(1, 1);
  s1 << 1.0;
  const auto h1 = make_rate_handle(GaussPowerModel(s1, 3.0));
  Vec a(1), b(1);
  a << 0.5;
  b << 2.5;
  const ConvexityReport ray =
      convexity_probe(h1, a, b, {0.2, 0.5, 0.8}, 1e-8, fast_opts());
  CHECK(!ray.any_concavity_violation);
}

TEST_CASE("three-dimensional grid oracle") {
  // Identity-envelope families take the one-jump decomposition, which lies on
  // every grid; the oracle must reproduce J(t) exactly.
  Vec lam(3);
  lam << 1.0, 0.5, 2.0;
  const MultivariateWeibullModel wb(0.5, 1.0, lam);
  const auto hw = make_rate_handle(wb);
  Vec t(3);
  t << 1.0, 2.0, 0.5;
  const double oracle = rate_grid_search(hw, t, 12).value;
  CHECK(oracle == doctest::Approx(weibull_rate(wb, t)).epsilon(1e-12));
  CHECK(rate_minimize(hw, t, fast_opts()).value <= oracle + 1e-8);

  // Coupled three-dimensional Gaussian powers: optimizer within the grid
  // resolution of the exhaustive enumeration.
  Mat sigma(3, 3);
  sigma << 1.0, 0.5, 0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 1.0;
  const auto hg = make_rate_handle(GaussPowerModel(sigma, 3.0));
  Vec ones = Vec::Ones(3);
  OptimizerOptions opts = fast_opts();
  opts.random_restarts = 8;
  const double opt = rate_minimize(hg, ones, opts).value;
  const double orc = rate_grid_search(hg, ones, 20, opts).value;
  CHECK(opt <= orc + 1e-8);
  CHECK(std::fabs(opt - orc) <= 0.03 * orc);
}

TEST_CASE("grid oracle memory guard") {
  Mat sigma(3, 3);
  sigma << 1.0, 0.2, 0.2, 0.2, 1.0, 0.2, 0.2, 0.2, 1.0;
  const auto h = make_rate_handle(GaussPowerModel(sigma, 3.0));
  CHECK_THROWS_AS(rate_grid_search(h, Vec::Ones(3), 200), UnsupportedError);
}

TEST_CASE("active-set solver dimension cap") {
  const MdpGaussModel big(Mat::Identity(13, 13));
  CHECK_THROWS_AS(mdp_rate(big, Vec::Ones(13)), UnsupportedError);
}

TEST_CASE("NaN from the rate density is an evaluation error") {
  RateFunctionHandle h;
  h.k = 2;
  h.alpha = 0.5;
  h.eval_jbar = [](const Vec& z) {
    return z[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : z.sum();
  };
  CHECK_THROWS_AS(monotone_envelope(h, vec2(1.0, 1.0), {}), EvaluationError);
}

TEST_CASE("sign enumeration cap") {
  const GaussPowerModel big(Mat::Identity(21, 21), 3.0);
  CHECK_THROWS_AS(gauss_power_jbar(big, Vec::Ones(21)), UnsupportedError);
}

TEST_CASE("precondition failures") {
  const auto h = make_rate_handle(TwoJumpModel(0.5));
  CHECK_THROWS_AS(rate_minimize(h, vec2(1.0, 0.0), {}), PreconditionError);
  CHECK_THROWS_AS(rate_minimize(h, vec2(-1.0, 1.0), {}), PreconditionError);
  CHECK_THROWS_AS(monotone_envelope(h, vec2(-1.0, 1.0), {}), PreconditionError);
  const auto h3 = make_rate_handle(GaussPowerModel(Mat::Identity(4, 4), 3.0));
  Vec t4 = Vec::Ones(4);
  CHECK_THROWS_AS(rate_grid_search(h3, t4, 10), UnsupportedError);
}
