#include "fewjumps/lpball.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "fewjumps/linalg.hpp"
#include "fewjumps/models.hpp"

namespace fewjumps {

double StiefelSample::orthonormality_residual() const {
  return (v * v.transpose() - Mat::Identity(m, m)).norm();
}

StiefelSample sample_stiefel(int m, int N, SeededStream s) {
  require(m >= 1 && N >= m, "sample_stiefel: N >= m >= 1 required");
  for (int attempt = 0; attempt < 2; ++attempt) {
    Mat g(m, N);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < N; ++j) g(i, j) = s.normal();
    }
    const Mat w = g * g.transpose() / static_cast<double>(N);
    Eigen::SelfAdjointEigenSolver<Mat> es(w);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < 1e-12) {
      continue;  // probability-zero degeneracy; one resample
    }
    StiefelSample out;
    out.m = m;
    out.N = N;
    out.v = es.eigenvectors() *
            es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
            es.eigenvectors().transpose() * g / std::sqrt(static_cast<double>(N));
    return out;
  }
  throw EvaluationError("sample_stiefel: Gram matrix numerically singular twice");
}

double support_function(const StiefelSample& sample, double p,
                        const Ref<const Vec>& u) {
  require(p > 1.0 && p < 2.0, "support_function: p in (1,2) required");
  require(u.size() == sample.m, "support_function: dimension mismatch");
  require(std::fabs(u.norm() - 1.0) <= 1e-10, "support_function: unit u required");
  const double q = p / (p - 1.0);
  const Vec w = sample.v.transpose() * u;
  const double scale = std::pow(static_cast<double>(sample.N), 0.5 * q - 1.0);
  double sum = 0.0;
  for (int i = 0; i < w.size(); ++i) sum += std::pow(std::fabs(w[i]), q);
  return std::pow(scale * sum, 1.0 / q);
}

Mat DirectionSet::gram(int k) const {
  require(k >= 1 && k <= static_cast<int>(directions.size()),
          "DirectionSet: k out of range");
  Mat g(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) g(i, j) = directions[i].dot(directions[j]);
  }
  return g;
}

void DirectionSet::validate() const {
  require(m >= 1, "DirectionSet: m >= 1 required");
  for (const Vec& u : directions) {
    require(u.size() == m, "DirectionSet: dimension mismatch");
    require(std::fabs(u.norm() - 1.0) <= 1e-12, "DirectionSet: unit norms required");
  }
  for (std::size_t i = 0; i < directions.size(); ++i) {
    for (std::size_t j = i + 1; j < directions.size(); ++j) {
      // Chordal distance ~ angle for nearly equal unit vectors.
      if ((directions[i] - directions[j]).norm() <= 1e-9) {
        throw PreconditionError("DirectionSet: directions must be pairwise distinct");
      }
    }
  }
}

DirectionSet spiral_directions(int m, int count) {
  require(m >= 1 && count >= 1, "spiral_directions: m, count >= 1 required");
  DirectionSet ds;
  ds.m = m;
  const double golden = 0.6180339887498948482;
  if (m == 1) {
    require(count <= 2, "spiral_directions: at most 2 directions on S^0");
    ds.directions.push_back(Vec::Constant(1, 1.0));
    if (count == 2) ds.directions.push_back(Vec::Constant(1, -1.0));
  } else if (m == 2) {
    for (int i = 0; i < count; ++i) {
      const double frac = std::fmod(golden * (i + 1), 1.0);
      const double theta = 2.0 * M_PI * frac;
      Vec u(2);
      u << std::cos(theta), std::sin(theta);
      ds.directions.push_back(u);
    }
  } else if (m == 3) {
    // Fibonacci spiral on the sphere.
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double theta = 2.0 * M_PI * golden * i;
      Vec u(3);
      u << r * std::cos(theta), r * std::sin(theta), z;
      u /= u.norm();
      ds.directions.push_back(u);
    }
  } else {
    // Deterministic quasi-uniform fallback: fixed-key Gaussian directions.
    SeededStream s(0x5F1EFE1ULL, static_cast<std::uint64_t>(m));
    for (int i = 0; i < count; ++i) {
      Vec u(m);
      for (int j = 0; j < m; ++j) u[j] = s.normal();
      u /= u.norm();
      ds.directions.push_back(u);
    }
  }
  ds.validate();
  return ds;
}

SupportRateResult support_rate(const DirectionSet& ds,
                               const std::vector<double>& f_values, double q,
                               int k_max, const OptimizerOptions& opts) {
  ds.validate();
  require(q > 2.0, "support_rate: q > 2 required");
  require(k_max >= 1 && k_max <= static_cast<int>(ds.directions.size()),
          "support_rate: k_max within direction count required");
  require(k_max <= 8, "support_rate: k_max <= 8 (optimizer cap)");
  require(static_cast<int>(f_values.size()) >= k_max,
          "support_rate: one f value per direction required");
  const double mq = abs_gaussian_moment(q);
  const double floor = std::pow(mq, 1.0 / q);
  for (int j = 0; j < k_max; ++j) {
    require(f_values[j] >= floor - 1e-12,
            "support_rate: f >= M_q^{1/q} required (the rate is 0 at the "
            "constant M_q^{1/q} and positive above it)");
  }

  SupportRateResult out;
  out.k_max = k_max;
  out.f_values.assign(f_values.begin(), f_values.begin() + k_max);
  for (int k = 1; k <= k_max; ++k) {
    Vec targets(k);
    std::vector<int> positive;
    for (int j = 0; j < k; ++j) {
      targets[j] = std::max(0.0, std::pow(f_values[j], q) - mq);
      if (targets[j] > 0.0) positive.push_back(j);
    }
    double jk = 0.0;
    if (!positive.empty()) {
      // Constraints at exactly M_q^{1/q} are asymptotically free; the rate
      // lives on the positive-target sub-block of the Gram matrix.
      const int p = static_cast<int>(positive.size());
      Mat gram(p, p);
      Vec sub(p);
      for (int a = 0; a < p; ++a) {
        sub[a] = targets[positive[a]];
        for (int b = 0; b < p; ++b) {
          gram(a, b) =
              ds.directions[positive[a]].dot(ds.directions[positive[b]]);
        }
      }
      const GaussPowerModel model(gram, q);
      const RateFunctionHandle h = make_rate_handle(model);
      jk = rate_minimize(h, sub, opts).value;
    }
    out.j_seq.push_back(jk);
  }
  out.sup_value = out.j_seq.back();
  if (k_max >= 2) {
    const double last = out.j_seq[k_max - 1];
    const double prev = out.j_seq[k_max - 2];
    out.converged = (last - prev) <= 1e-3 * std::max(last, 1e-300);
  }
  return out;
}

}  // namespace fewjumps
