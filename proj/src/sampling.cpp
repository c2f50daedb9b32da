#include "fewjumps/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "fewjumps/csv.hpp"
#include "fewjumps/linalg.hpp"
#include "fewjumps/model_json.hpp"
#include "fewjumps/special.hpp"

namespace fewjumps {

namespace {

constexpr long long kShardSize = 1 << 14;

// Draws one sample row; the (seed, stream, shard) layout fixes every draw
// independently of how shards are scheduled onto threads.
using RowSampler = std::function<void(SeededStream&, double*)>;

RowSampler gauss_power_row(const GaussPowerModel& m) {
  const Mat factor = psd_factor(m.sigma());
  const Vec mu = m.centering();
  const double q = m.q();
  const int k = m.k();
  return [factor, mu, q, k](SeededStream& s, double* out) {
    Vec xi(k);
    for (int j = 0; j < k; ++j) xi[j] = s.normal();
    const Vec g = factor * xi;
    for (int j = 0; j < k; ++j) out[j] = std::pow(std::fabs(g[j]), q) - mu[j];
  };
}

RowSampler bivariate_gauss_power_row(const BivariateGaussPower& m) {
  const double rho = m.rho;
  const double c = std::sqrt(1.0 - rho * rho);
  const double q = m.q;
  const double mq = abs_gaussian_moment(q);
  return [rho, c, q, mq](SeededStream& s, double* out) {
    const double z1 = s.normal();
    const double z2 = s.normal();
    const double g1 = z1;
    const double g2 = rho * z1 + c * z2;
    out[0] = std::pow(std::fabs(g1), q) - mq;
    out[1] = std::pow(std::fabs(g2), q) - mq;
  };
}

RowSampler mo_weibull_row(const MultivariateWeibullModel& m) {
  const Vec lambdas = m.lambdas;
  const double lambda0 = m.lambda0;
  const double inv_alpha = 1.0 / m.alpha;
  const int k = m.k();
  return [lambdas, lambda0, inv_alpha, k](SeededStream& s, double* out) {
    const double common = s.exponential() / lambda0;
    for (int j = 0; j < k; ++j) {
      const double own = s.exponential() / lambdas[j];
      out[j] = std::pow(std::min(own, common), inv_alpha);
    }
  };
}

RowSampler two_jump_row(const TwoJumpModel& m) {
  const double eps = m.epsilon;
  return [eps](SeededStream& s, double* out) {
    const double nl = -std::log(s.uniform());
    const double r = nl * nl;  // P(R >= t) = exp(-sqrt(t))
    const bool first = s.uniform() < 0.5;
    const double v1 = first ? 1.0 : eps;
    const double v2 = first ? eps : 1.0;
    out[0] = r * v1 * s.sign();
    out[1] = r * v2 * s.sign();
  };
}

RowSampler mdp_gauss_row(const MdpGaussModel& m) {
  const Mat factor = psd_factor(m.sigma());
  const int k = m.k();
  return [factor, k](SeededStream& s, double* out) {
    Vec xi(k);
    for (int j = 0; j < k; ++j) xi[j] = s.normal();
    const Vec g = factor * xi;
    for (int j = 0; j < k; ++j) out[j] = g[j];
  };
}

RowSampler make_row_sampler(const ModelSpec& spec) {
  struct Visitor {
    RowSampler operator()(const GaussPowerModel& m) const {
      return gauss_power_row(m);
    }
    RowSampler operator()(const BivariateGaussPower& m) const {
      return bivariate_gauss_power_row(m);
    }
    RowSampler operator()(const MultivariateWeibullModel& m) const {
      return mo_weibull_row(m);
    }
    RowSampler operator()(const TwoJumpModel& m) const { return two_jump_row(m); }
    RowSampler operator()(const MdpGaussModel& m) const { return mdp_gauss_row(m); }
  };
  return std::visit(Visitor{}, spec);
}

Mat sample_rows(const RowSampler& row, int k, long long n, SeededStream s) {
  require(n >= 1, "sampler: n >= 1 required");
  Mat out(n, k);
  const long long shards = (n + kShardSize - 1) / kShardSize;
  for (long long sh = 0; sh < shards; ++sh) {
    SeededStream sub = s.substream(static_cast<std::uint64_t>(sh));
    const long long lo = sh * kShardSize;
    const long long hi = std::min(n, lo + kShardSize);
    Vec buf(k);
    for (long long i = lo; i < hi; ++i) {
      row(sub, buf.data());
      out.row(i) = buf.transpose();
    }
  }
  return out;
}

// Deterministic sharded hit counting: shard -> substream, integer reduction.
long long count_hits(const RowSampler& row, int k, const Vec& threshold,
                     long long n, SeededStream s, int threads) {
  const long long shards = (n + kShardSize - 1) / kShardSize;
  std::atomic<long long> next{0};
  std::atomic<long long> total{0};
  const auto work = [&]() {
    Vec buf(k);
    long long local = 0;
    for (;;) {
      const long long sh = next.fetch_add(1);
      if (sh >= shards) break;
      SeededStream sub = s.substream(static_cast<std::uint64_t>(sh));
      const long long lo = sh * kShardSize;
      const long long hi = std::min(n, lo + kShardSize);
      for (long long i = lo; i < hi; ++i) {
        row(sub, buf.data());
        bool all = true;
        for (int j = 0; j < k; ++j) {
          if (buf[j] < threshold[j]) {
            all = false;
            break;
          }
        }
        local += all;
      }
    }
    total.fetch_add(local);
  };
  const int nt = std::max(1, threads);
  if (nt == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int i = 0; i < nt; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return total.load();
}

TailEstimate finish_estimate(const Vec& t, double x, long long hits,
                             long long n) {
  TailEstimate est;
  est.threshold = t;
  est.scale = x;
  est.hits = hits;
  est.n = n;
  est.log_prob = hits > 0 ? std::log(static_cast<double>(hits) / n) : -kInf;
  const BinomialInterval ci = clopper_pearson(hits, n);
  est.ci_low = ci.lo > 0.0 ? std::log(ci.lo) : -kInf;
  est.ci_high = ci.hi > 0.0 ? std::log(ci.hi) : -kInf;
  return est;
}

}  // namespace

Mat sample_gauss_power(const GaussPowerModel& m, long long n, SeededStream s) {
  return sample_rows(gauss_power_row(m), m.k(), n, s);
}

Mat sample_bivariate_gauss_power(const BivariateGaussPower& m, long long n,
                                 SeededStream s) {
  return sample_rows(bivariate_gauss_power_row(m), 2, n, s);
}

Mat sample_mo_weibull(const MultivariateWeibullModel& m, long long n,
                      SeededStream s) {
  return sample_rows(mo_weibull_row(m), m.k(), n, s);
}

Mat sample_two_jump(const TwoJumpModel& m, long long n, SeededStream s) {
  return sample_rows(two_jump_row(m), 2, n, s);
}

Mat sample_mdp_gauss(const MdpGaussModel& m, long long n, SeededStream s) {
  return sample_rows(mdp_gauss_row(m), m.k(), n, s);
}

Mat sample_model(const ModelSpec& spec, long long n, SeededStream s) {
  return sample_rows(make_row_sampler(spec), model_dimension(spec), n, s);
}

TailEstimate estimate_orthant_tail(const Ref<const Mat>& batch,
                                   const Ref<const Vec>& t, double x) {
  require(batch.rows() >= 1, "estimate_orthant_tail: nonempty batch required");
  require(batch.cols() == t.size(), "estimate_orthant_tail: dimension mismatch");
  require(x > 0.0, "estimate_orthant_tail: x > 0 required");
  const Vec threshold = x * t;
  long long hits = 0;
  for (long long i = 0; i < batch.rows(); ++i) {
    bool all = true;
    for (int j = 0; j < t.size(); ++j) {
      if (batch(i, j) < threshold[j]) {
        all = false;
        break;
      }
    }
    hits += all;
  }
  return finish_estimate(t, x, hits, batch.rows());
}

TailEstimate model_orthant_tail(const ModelSpec& spec, const Ref<const Vec>& t,
                                double x, long long n, SeededStream s,
                                int threads) {
  require(n >= 1, "model_orthant_tail: n >= 1 required");
  require(x > 0.0, "model_orthant_tail: x > 0 required");
  const int k = model_dimension(spec);
  require(t.size() == k, "model_orthant_tail: dimension mismatch");
  const Vec threshold = x * t;
  const long long hits =
      count_hits(make_row_sampler(spec), k, threshold, n, s, threads);
  return finish_estimate(t, x, hits, n);
}

EmpiricalRateCurve empirical_rate_curve(const ModelSpec& spec,
                                        const Ref<const Vec>& t,
                                        const std::vector<double>& scales,
                                        long long n_per_scale, SeededStream s,
                                        int threads) {
  require(!scales.empty(), "empirical_rate_curve: scales required");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    require(scales[i] > 0.0, "empirical_rate_curve: positive scales required");
    require(i == 0 || scales[i] > scales[i - 1],
            "empirical_rate_curve: scales must be increasing");
  }
  const RateFunctionHandle h = make_rate_handle(spec);
  const double alpha = h.alpha;

  EmpiricalRateCurve curve;
  curve.predicted = -monotone_envelope(h, t).value;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double x = scales[i];
    TailEstimate est = model_orthant_tail(
        spec, t, x, n_per_scale, s.substream(0x10000 + i), threads);
    const double xa = std::pow(x, alpha);
    curve.scales.push_back(x);
    curve.normalized.push_back(est.log_prob / xa);
    curve.ci_low.push_back(est.ci_low / xa);
    curve.ci_high.push_back(est.ci_high / xa);
    curve.estimates.push_back(std::move(est));
  }
  return curve;
}

TailEstimate sum_experiment(const ModelSpec& spec, long long N, double x_N,
                            const Ref<const Vec>& t, long long n_trials,
                            SeededStream s, int threads) {
  require(N >= 1, "sum_experiment: N >= 1 required");
  require(x_N > 0.0, "sum_experiment: x_N > 0 required");
  require(n_trials >= 1, "sum_experiment: n_trials >= 1 required");
  const int k = model_dimension(spec);
  require(t.size() == k, "sum_experiment: dimension mismatch");
  const Vec threshold = x_N * t;

  if (const auto* gauss = std::get_if<MdpGaussModel>(&spec)) {
    // Sum of N iid centered Gaussians is exactly sqrt(N) times one draw.
    const double root_n = std::sqrt(static_cast<double>(N));
    const Mat factor = psd_factor(gauss->sigma());
    const RowSampler row = [factor, root_n, k](SeededStream& st, double* out) {
      Vec xi(k);
      for (int j = 0; j < k; ++j) xi[j] = st.normal();
      const Vec g = root_n * (factor * xi);
      for (int j = 0; j < k; ++j) out[j] = g[j];
    };
    const long long hits = count_hits(row, k, threshold, n_trials, s, threads);
    return finish_estimate(t, x_N, hits, n_trials);
  }

  const RowSampler base = make_row_sampler(spec);
  Vec center = Vec::Zero(k);
  if (const auto* weib = std::get_if<MultivariateWeibullModel>(&spec)) {
    center = weibull_mean(*weib);  // the one family whose sampler is uncentered
  }
  const RowSampler row = [base, center, N, k](SeededStream& st, double* out) {
    Vec acc = Vec::Zero(k);
    Vec buf(k);
    for (long long i = 0; i < N; ++i) {
      base(st, buf.data());
      acc += buf - center;
    }
    for (int j = 0; j < k; ++j) out[j] = acc[j];
  };
  const long long hits = count_hits(row, k, threshold, n_trials, s, threads);
  return finish_estimate(t, x_N, hits, n_trials);
}

LeftTailReport check_left_tail(const Ref<const Mat>& batch, double alpha,
                               std::vector<double> thresholds) {
  require(batch.rows() >= 1, "check_left_tail: nonempty batch required");
  require(alpha > 0.0 && alpha < 1.0, "check_left_tail: alpha in (0,1) required");
  const int k = static_cast<int>(batch.cols());
  const long long n = batch.rows();
  if (thresholds.empty()) {
    // Default grid: fractions of the deepest observed left excursion.
    double deepest = 0.0;
    for (int j = 0; j < k; ++j) deepest = std::max(deepest, -batch.col(j).minCoeff());
    if (deepest <= 0.0) deepest = 1.0;
    for (double f : {0.2, 0.35, 0.5, 0.65, 0.8}) thresholds.push_back(f * deepest);
  }
  LeftTailReport rep;
  rep.thresholds = thresholds;
  rep.c = Vec::Constant(k, kInf);
  rep.bounded.assign(k, true);
  for (int j = 0; j < k; ++j) {
    for (double t : thresholds) {
      if (t <= 0.0) continue;
      long long cnt = 0;
      for (long long i = 0; i < n; ++i) cnt += batch(i, j) <= -t;
      if (cnt == 0) continue;
      rep.bounded[j] = false;
      const double c =
          -std::log(static_cast<double>(cnt) / n) / std::pow(t, alpha);
      rep.c[j] = std::min(rep.c[j], c);
    }
  }
  return rep;
}

void write_batch_csv(const std::string& path, const ModelSpec& spec,
                     const Ref<const Mat>& batch) {
  CsvWriter csv(path);
  csv.comment("model: " + model_to_json(spec).dump());
  std::vector<std::string> header;
  for (int j = 0; j < batch.cols(); ++j) {
    header.push_back("x" + std::to_string(j + 1));
  }
  csv.row(header);
  std::vector<std::string> fields(batch.cols());
  for (long long i = 0; i < batch.rows(); ++i) {
    for (int j = 0; j < batch.cols(); ++j) fields[j] = format_double(batch(i, j));
    csv.row(fields);
  }
}

}  // namespace fewjumps
