#include "fewjumps/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace fewjumps {

namespace {

constexpr double kBig = 1e305;  // stand-in for +inf inside scalar searches

double clip_inf(double v) {
  if (std::isnan(v)) throw EvaluationError("rate density returned NaN");
  return std::isfinite(v) ? v : kBig;
}

struct ScalarMin {
  double x = 0.0;
  double f = kBig;
};

double sign_with(double a, double b) { return b >= 0.0 ? std::fabs(a) : -std::fabs(a); }

// Bounded Brent minimization with golden fallback; endpoints are evaluated
// explicitly so boundary minima are exact.
template <typename F>
ScalarMin brent_minimize(F&& f, double lo, double hi, int max_iter = 60,
                         double rel_tol = 1e-11) {
  ScalarMin best;
  const double flo = clip_inf(f(lo));
  const double fhi = clip_inf(f(hi));
  best.x = flo <= fhi ? lo : hi;
  best.f = std::min(flo, fhi);
  if (hi - lo < 1e-15 * (1.0 + std::fabs(lo))) return best;

  const double gold = 0.3819660112501051;
  double a = lo, b = hi;
  double x = a + gold * (b - a), w = x, v = x;
  double fx = clip_inf(f(x)), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double m = 0.5 * (a + b);
    const double tol = rel_tol * std::fabs(x) + 1e-14;
    const double tol2 = 2.0 * tol;
    if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::fabs(e) > tol && fx < kBig && fw < kBig && fv < kBig) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      if (std::isfinite(p) && std::isfinite(q) && q != 0.0 &&
          std::fabs(p) < std::fabs(0.5 * q * e) && p > q * (a - x) &&
          p < q * (b - x)) {
        e = d;
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = sign_with(tol, m - x);
        golden = false;
      }
    }
    if (golden) {
      e = (x < m) ? b - x : a - x;
      d = gold * e;
    }
    const double u = (std::fabs(d) >= tol) ? x + d : x + sign_with(tol, d);
    const double fu = clip_inf(f(u));
    if (fu <= fx) {
      if (u < x) {
        b = x;
      } else {
        a = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  if (fx < best.f) {
    best.x = x;
    best.f = fx;
  }
  return best;
}

double eval_jbar_checked(const RateFunctionHandle& h, const Vec& s) {
  const double v = h.eval_jbar(s);
  if (std::isnan(v)) throw EvaluationError("rate density returned NaN");
  return v;
}

// Cyclic coordinate descent for the envelope search, s in [t, hi].
void envelope_descend(const RateFunctionHandle& h, const Vec& t, const Vec& hi,
                      Vec& s, double& fs, int max_sweeps) {
  const int k = h.k;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double improved = 0.0;
    for (int j = 0; j < k; ++j) {
      Vec probe = s;
      const auto slice = [&](double x) {
        probe[j] = x;
        return eval_jbar_checked(h, probe);
      };
      const ScalarMin r = brent_minimize(slice, t[j], hi[j]);
      if (r.f < fs - 1e-15 * (1.0 + std::fabs(fs))) {
        improved += fs - r.f;
        s[j] = r.x;
        fs = r.f;
      }
      probe[j] = s[j];
    }
    if (improved <= 1e-13 * (1.0 + std::fabs(fs))) break;
  }
}

}  // namespace

int Decomposition::nonzero_parts(double tol) const {
  int n = 0;
  for (const Vec& p : parts) {
    if (p.size() && p.cwiseAbs().maxCoeff() > tol) ++n;
  }
  return n;
}

EnvelopeResult monotone_envelope(const RateFunctionHandle& h,
                                 const Ref<const Vec>& t,
                                 const OptimizerOptions& opts) {
  require(h.k >= 1 && t.size() == h.k, "monotone_envelope: dimension mismatch");
  require(is_nonnegative(t, kVectorEqTol), "monotone_envelope: t >= 0 required");
  Vec tt = t.cwiseMax(0.0);

  EnvelopeResult out;
  if (tt.maxCoeff() <= 0.0) {
    out.value = 0.0;
    out.argmin = tt;
    out.finite = true;
    return out;
  }
  if (h.envelope_is_identity) {
    out.value = eval_jbar_checked(h, tt);
    out.argmin = tt;
    out.finite = std::isfinite(out.value);
    return out;
  }
  if (h.envelope_override) return h.envelope_override(tt);

  const int k = h.k;
  double box = opts.envelope_box_factor;
  Vec best_s;
  double best_f = kInf;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double span = box * std::max(tt.maxCoeff(), 1.0);
    const Vec hi = tt.array() + span;

    Vec s = tt;
    double fs = clip_inf(eval_jbar_checked(h, s));
    envelope_descend(h, tt, hi, s, fs, 60);

    if (fs >= kBig) {
      // Nothing finite from the downhill start. Diagonal probe: points
      // max(t)*1 + tau*1 dominate t for every tau >= 0, which keeps
      // rank-one-style valleys reachable.
      const double base = tt.maxCoeff();
      const auto diag = [&](double tau) {
        return eval_jbar_checked(h, Vec::Constant(k, base + tau));
      };
      const ScalarMin dm = brent_minimize(diag, 0.0, span);
      if (dm.f < fs) {
        Vec sd = Vec::Constant(k, base + dm.x);
        double fsd = dm.f;
        envelope_descend(h, tt, hi, sd, fsd, 60);
        if (fsd < fs) {
          s = sd;
          fs = fsd;
        }
      }
    }
    if (fs >= kBig) {
      // Still nothing finite; a few random interior starts.
      SeededStream rs(opts.restart_seed, 0xE77E10FEULL);
      for (int r = 0; r < 6 && fs >= kBig; ++r) {
        Vec sr(k);
        for (int j = 0; j < k; ++j) sr[j] = tt[j] + span * rs.uniform();
        double fsr = clip_inf(eval_jbar_checked(h, sr));
        envelope_descend(h, tt, hi, sr, fsr, 60);
        if (fsr < fs) {
          s = sr;
          fs = fsr;
        }
      }
    }
    if (fs < best_f) {
      best_f = fs;
      best_s = s;
    }
    const bool at_boundary =
        best_f < kBig && ((hi - best_s).array() < 1e-6 * span).any();
    if (!at_boundary) break;
    box *= 2.0;  // one doubling retry
  }

  out.finite = best_f < kBig;
  out.value = out.finite ? best_f : kInf;
  out.argmin = out.finite ? best_s : tt;
  return out;
}

namespace {

struct PartState {
  Mat fractions;            // m x k, columns sum to 1
  std::vector<double> rate;  // per-part envelope values
  double total = 0.0;
};

double envelope_value(const RateFunctionHandle& h, const Vec& part,
                      const OptimizerOptions& opts) {
  return monotone_envelope(h, part, opts).value;
}

void recompute(const RateFunctionHandle& h, const Vec& t, PartState& st,
               const OptimizerOptions& opts) {
  const int m = static_cast<int>(st.fractions.rows());
  st.rate.assign(m, 0.0);
  st.total = 0.0;
  for (int r = 0; r < m; ++r) {
    const Vec part = st.fractions.row(r).transpose().cwiseProduct(t);
    st.rate[r] = envelope_value(h, part, opts);
    st.total += st.rate[r];
  }
}

// Pairwise mass transfers, one coordinate at a time, until a full sweep stops
// improving. Minima of the concave-along-rays objective sit on faces, which
// the deterministic starts already touch; this polishes interior optima.
void cd_sweeps(const RateFunctionHandle& h, const Vec& t, PartState& st,
               const OptimizerOptions& opts) {
  const int m = static_cast<int>(st.fractions.rows());
  const int k = h.k;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double improved = 0.0;
    for (int j = 0; j < k; ++j) {
      for (int r = 0; r < m; ++r) {
        for (int s = r + 1; s < m; ++s) {
          const double wr = st.fractions(r, j);
          const double ws = st.fractions(s, j);
          if (wr + ws <= 0.0) continue;
          Vec pr = st.fractions.row(r).transpose().cwiseProduct(t);
          Vec ps = st.fractions.row(s).transpose().cwiseProduct(t);
          const double rest = st.total - st.rate[r] - st.rate[s];
          const auto transfer = [&](double phi) {
            pr[j] = (wr - phi) * t[j];
            ps[j] = (ws + phi) * t[j];
            return envelope_value(h, pr, opts) + envelope_value(h, ps, opts);
          };
          const ScalarMin best = brent_minimize(transfer, -ws, wr, 45);
          const double current = st.rate[r] + st.rate[s];
          if (best.f < current - 1e-15 * (1.0 + std::fabs(current))) {
            improved += current - best.f;
            st.fractions(r, j) = wr - best.x;
            st.fractions(s, j) = ws + best.x;
            pr[j] = st.fractions(r, j) * t[j];
            ps[j] = st.fractions(s, j) * t[j];
            st.rate[r] = envelope_value(h, pr, opts);
            st.rate[s] = envelope_value(h, ps, opts);
            st.total = rest + st.rate[r] + st.rate[s];
          }
        }
      }
    }
    if (improved <= opts.objective_tol * 1e-4 * (1.0 + std::fabs(st.total))) break;
  }
}

// Joint transfer polish for one part pair: bounded Nelder-Mead over the
// k-vector of fractions moved from part r to part s. Single-coordinate
// descent stalls on kink valleys that run diagonally through the transfer
// space; the simplex walks along them.
bool nm_pair_polish(const RateFunctionHandle& h, const Vec& t, PartState& st,
                    int r, int s, const OptimizerOptions& opts) {
  const int k = h.k;
  Vec lo(k), hi(k);
  double room = 0.0;
  for (int j = 0; j < k; ++j) {
    lo[j] = -st.fractions(s, j);
    hi[j] = st.fractions(r, j);
    room = std::max(room, hi[j] - lo[j]);
  }
  if (room < 1e-12) return false;

  Vec pr(k), ps(k);
  const auto objective = [&](Vec delta) {
    for (int j = 0; j < k; ++j) {
      delta[j] = std::min(std::max(delta[j], lo[j]), hi[j]);
      pr[j] = (st.fractions(r, j) - delta[j]) * t[j];
      ps[j] = (st.fractions(s, j) + delta[j]) * t[j];
    }
    return envelope_value(h, pr, opts) + envelope_value(h, ps, opts);
  };

  std::vector<Vec> simplex(k + 1, Vec::Zero(k));
  std::vector<double> value(k + 1);
  for (int j = 0; j < k; ++j) {
    const double step = (hi[j] >= -lo[j] ? hi[j] : lo[j]) * 0.25;
    simplex[j + 1][j] = step;
  }
  for (int i = 0; i <= k; ++i) value[i] = clip_inf(objective(simplex[i]));
  const double base = st.rate[r] + st.rate[s];

  double stall_best = kInf;
  int stall = 0;
  for (int it = 0; it < 60 * (k + 1); ++it) {
    int best = 0, worst = 0;
    for (int i = 1; i <= k; ++i) {
      if (value[i] < value[best]) best = i;
      if (value[i] > value[worst]) worst = i;
    }
    int second = (worst == 0) ? 1 : 0;
    for (int i = 0; i <= k; ++i) {
      if (i != worst && value[i] > value[second]) second = i;
    }
    if (value[worst] - value[best] <= 1e-14 * (1.0 + std::fabs(value[best]))) break;
    // Stall exit: when coordinate descent has already converged the simplex
    // rarely finds anything; stop probing once progress dries up.
    if (value[best] < stall_best - 1e-14 * (1.0 + std::fabs(value[best]))) {
      stall_best = value[best];
      stall = 0;
    } else if (++stall >= 8 * (k + 1)) {
      break;
    }
    Vec centroid = Vec::Zero(k);
    for (int i = 0; i <= k; ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= k;
    const Vec reflect = centroid + (centroid - simplex[worst]);
    const double f_reflect = clip_inf(objective(reflect));
    if (f_reflect < value[best]) {
      const Vec expand = centroid + 2.0 * (centroid - simplex[worst]);
      const double f_expand = clip_inf(objective(expand));
      if (f_expand < f_reflect) {
        simplex[worst] = expand;
        value[worst] = f_expand;
      } else {
        simplex[worst] = reflect;
        value[worst] = f_reflect;
      }
    } else if (f_reflect < value[second]) {
      simplex[worst] = reflect;
      value[worst] = f_reflect;
    } else {
      const Vec contract = centroid + 0.5 * (simplex[worst] - centroid);
      const double f_contract = clip_inf(objective(contract));
      if (f_contract < value[worst]) {
        simplex[worst] = contract;
        value[worst] = f_contract;
      } else {
        for (int i = 0; i <= k; ++i) {
          if (i == best) continue;
          simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
          value[i] = clip_inf(objective(simplex[i]));
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= k; ++i) {
    if (value[i] < value[best]) best = i;
  }
  if (value[best] >= base - 1e-13 * (1.0 + std::fabs(base))) return false;
  Vec delta = simplex[best];
  for (int j = 0; j < k; ++j) {
    delta[j] = std::min(std::max(delta[j], lo[j]), hi[j]);
    st.fractions(r, j) -= delta[j];
    st.fractions(s, j) += delta[j];
    pr[j] = st.fractions(r, j) * t[j];
    ps[j] = st.fractions(s, j) * t[j];
  }
  const double rest = st.total - st.rate[r] - st.rate[s];
  st.rate[r] = envelope_value(h, pr, opts);
  st.rate[s] = envelope_value(h, ps, opts);
  st.total = rest + st.rate[r] + st.rate[s];
  return true;
}

void descend(const RateFunctionHandle& h, const Vec& t, PartState& st,
             const OptimizerOptions& opts) {
  const int m = static_cast<int>(st.fractions.rows());
  recompute(h, t, st, opts);
  for (int round = 0; round < 8; ++round) {
    cd_sweeps(h, t, st, opts);
    bool polished = false;
    for (int r = 0; r < m; ++r) {
      for (int s = r + 1; s < m; ++s) {
        polished |= nm_pair_polish(h, t, st, r, s, opts);
      }
    }
    if (!polished) break;
  }
}

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

Decomposition canonicalize(const RateFunctionHandle& h, const Vec& t,
                           const Mat& fractions, const OptimizerOptions& opts) {
  const int m = static_cast<int>(fractions.rows());
  const int k = h.k;
  Mat w = fractions;
  // Exact column renormalization, dust pushed into the heaviest part.
  for (int j = 0; j < k; ++j) {
    double colsum = w.col(j).sum();
    if (colsum <= 0.0) {
      w(0, j) = 1.0;
      colsum = 1.0;
    }
    w.col(j) /= colsum;
    int heavy = 0;
    for (int r = 1; r < m; ++r) {
      if (w(r, j) > w(heavy, j)) heavy = r;
    }
    for (int r = 0; r < m; ++r) {
      if (r != heavy && w(r, j) < 1e-12) {
        w(heavy, j) += w(r, j);
        w(r, j) = 0.0;
      }
    }
  }
  std::vector<Vec> parts;
  for (int r = 0; r < m; ++r) {
    Vec part = w.row(r).transpose().cwiseProduct(t).cwiseMax(0.0);
    if (part.cwiseAbs().maxCoeff() > 0.0) parts.push_back(std::move(part));
  }
  std::sort(parts.begin(), parts.end(), lex_less);

  Decomposition d;
  d.target = t;
  d.parts = std::move(parts);
  d.part_rates.reserve(d.parts.size());
  d.total = 0.0;
  for (const Vec& p : d.parts) {
    const double rate = envelope_value(h, p, opts);
    d.part_rates.push_back(rate);
    d.total += rate;
  }
  return d;
}

// Tie-break: fewest nonzero parts, then lexicographically smallest flattened
// parts. Keeps results deterministic and schedule-independent.
bool decomposition_preferred(const Decomposition& a, const Decomposition& b) {
  const int na = static_cast<int>(a.parts.size());
  const int nb = static_cast<int>(b.parts.size());
  if (na != nb) return na < nb;
  for (int r = 0; r < na; ++r) {
    for (int i = 0; i < a.parts[r].size(); ++i) {
      const double x = a.parts[r][i];
      const double y = b.parts[r][i];
      if (x != y) return x < y;
    }
  }
  return false;
}

}  // namespace

RateEvaluation rate_minimize(const RateFunctionHandle& h,
                             const Ref<const Vec>& t,
                             const OptimizerOptions& opts) {
  require(h.k >= 1 && t.size() == h.k, "rate_minimize: dimension mismatch");
  require(is_strictly_positive(t), "rate_minimize: t > 0 componentwise required");
  const int k = h.k;
  const Vec target = t;

  RateEvaluation out;
  out.method = RateMethod::optimizer;
  if (k == 1) {
    const EnvelopeResult env = monotone_envelope(h, target, opts);
    if (h.envelope_is_identity) out.method = RateMethod::closed_form;
    out.value = env.value;
    out.decomposition.target = target;
    out.decomposition.parts = {target};
    out.decomposition.part_rates = {env.value};
    out.decomposition.total = env.value;
    out.restarts_used = 1;
    out.converged = true;
    return out;
  }

  const int m = k;
  std::vector<Mat> starts;
  {
    Mat one = Mat::Zero(m, k);
    one.row(0).setOnes();
    starts.push_back(one);  // the one-jump decomposition {t}
    Mat axis = Mat::Identity(m, k);
    starts.push_back(axis);  // axis-aligned split
    SeededStream rs(opts.restart_seed, 0xA11D0B5ULL);
    for (int r = 0; r < opts.random_restarts; ++r) {
      Mat w(m, k);
      for (int j = 0; j < k; ++j) {
        double sum = 0.0;
        for (int i = 0; i < m; ++i) {
          w(i, j) = rs.exponential();
          sum += w(i, j);
        }
        w.col(j) /= sum;
      }
      starts.push_back(std::move(w));
    }
  }

  std::vector<PartState> results(starts.size());
  const auto run_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      results[i].fractions = starts[i];
      descend(h, target, results[i], opts);
    }
  };
  const int threads = std::max(1, opts.threads);
  if (threads == 1 || starts.size() < 2) {
    run_range(0, starts.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (starts.size() + threads - 1) / threads;
    for (int ti = 0; ti < threads; ++ti) {
      const std::size_t lo = ti * chunk;
      const std::size_t hi = std::min(starts.size(), lo + chunk);
      if (lo < hi) pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  double best = kInf, second = kInf;
  for (const PartState& st : results) {
    if (st.total < best) {
      second = best;
      best = st.total;
    } else if (st.total < second) {
      second = st.total;
    }
  }

  Decomposition chosen;
  bool have = false;
  for (const PartState& st : results) {
    if (st.total <= best + 1e-12 * (1.0 + std::fabs(best))) {
      Decomposition cand = canonicalize(h, target, st.fractions, opts);
      if (!have || decomposition_preferred(cand, chosen)) {
        chosen = std::move(cand);
        have = true;
      }
    }
  }
  out.decomposition = std::move(chosen);
  out.value = out.decomposition.total;
  out.restarts_used = static_cast<int>(starts.size());
  out.converged = std::isfinite(best) &&
                  (second - best) <= opts.agreement_tol * (1.0 + std::fabs(best));
  return out;
}

RateEvaluation rate_grid_search(const RateFunctionHandle& h,
                                const Ref<const Vec>& t, int grid_n,
                                const OptimizerOptions& opts) {
  require(h.k >= 1 && t.size() == h.k, "rate_grid_search: dimension mismatch");
  require(is_strictly_positive(t), "rate_grid_search: t > 0 required");
  require(grid_n >= 2, "rate_grid_search: grid_n >= 2 required");
  if (h.k > 3) throw UnsupportedError("rate_grid_search: k <= 3 only");
  const double candidates = std::pow(static_cast<double>(grid_n),
                                     static_cast<double>(h.k * (h.k - 1)));
  if (candidates > 2e9) throw UnsupportedError("rate_grid_search: grid too large");

  const int n = grid_n;
  const Vec target = t;
  RateEvaluation out;
  out.method = RateMethod::oracle;
  out.restarts_used = 0;
  out.converged = true;

  if (h.k == 1) {
    const EnvelopeResult env = monotone_envelope(h, target, opts);
    out.value = env.value;
    out.decomposition.target = target;
    out.decomposition.parts = {target};
    out.decomposition.part_rates = {env.value};
    out.decomposition.total = env.value;
    return out;
  }

  if (h.k == 2) {
    Mat jgrid(n + 1, n + 1);
    Vec part(2);
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        part[0] = target[0] * i / n;
        part[1] = target[1] * j / n;
        jgrid(i, j) = envelope_value(h, part, opts);
      }
    }
    double best = kInf;
    int bi = n, bj = n;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double v = jgrid(i, j) + jgrid(n - i, n - j);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    Mat fr = Mat::Zero(2, 2);
    fr(0, 0) = static_cast<double>(bi) / n;
    fr(1, 0) = 1.0 - fr(0, 0);
    fr(0, 1) = static_cast<double>(bj) / n;
    fr(1, 1) = 1.0 - fr(0, 1);
    out.decomposition = canonicalize(h, target, fr, opts);
    out.value = out.decomposition.total;
    return out;
  }

  // k == 3: three parts, per-coordinate compositions (a, b, n-a-b).
  std::vector<double> jcache(static_cast<std::size_t>(n + 1) * (n + 1) * (n + 1));
  {
    Vec part(3);
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        for (int c = 0; c <= n; ++c) {
          part[0] = target[0] * a / n;
          part[1] = target[1] * b / n;
          part[2] = target[2] * c / n;
          jcache[(static_cast<std::size_t>(a) * (n + 1) + b) * (n + 1) + c] =
              envelope_value(h, part, opts);
        }
      }
    }
  }
  const auto at = [&](int a, int b, int c) {
    return jcache[(static_cast<std::size_t>(a) * (n + 1) + b) * (n + 1) + c];
  };
  double best = kInf;
  std::array<int, 6> barg{};
  for (int a1 = 0; a1 <= n; ++a1) {
    for (int b1 = 0; a1 + b1 <= n; ++b1) {
      for (int a2 = 0; a2 <= n; ++a2) {
        for (int b2 = 0; a2 + b2 <= n; ++b2) {
          for (int a3 = 0; a3 <= n; ++a3) {
            const double j12 = at(a1, a2, a3);
            for (int b3 = 0; a3 + b3 <= n; ++b3) {
              const double v =
                  j12 + at(b1, b2, b3) + at(n - a1 - b1, n - a2 - b2, n - a3 - b3);
              if (v < best) {
                best = v;
                barg = {a1, a2, a3, b1, b2, b3};
              }
            }
          }
        }
      }
    }
  }
  Mat fr(3, 3);
  for (int j = 0; j < 3; ++j) {
    fr(0, j) = static_cast<double>(barg[j]) / n;
    fr(1, j) = static_cast<double>(barg[3 + j]) / n;
    fr(2, j) = 1.0 - fr(0, j) - fr(1, j);
  }
  out.decomposition = canonicalize(h, target, fr, opts);
  out.value = out.decomposition.total;
  return out;
}

HomogeneityReport check_homogeneity(const RateFunctionHandle& h, int samples,
                                    double tol, SeededStream stream) {
  require(samples >= 1, "check_homogeneity: samples >= 1 required");
  HomogeneityReport rep;
  rep.samples = samples;
  for (int i = 0; i < samples; ++i) {
    Vec x(h.k);
    for (int j = 0; j < h.k; ++j) x[j] = stream.uniform(0.05, 3.0);
    const double lambda = std::exp(stream.uniform(std::log(0.1), std::log(10.0)));
    const double lhs = eval_jbar_checked(h, Vec(lambda * x));
    const double scaled = std::pow(lambda, h.alpha) * eval_jbar_checked(h, x);
    double viol;
    if (!std::isfinite(lhs) && !std::isfinite(scaled)) {
      viol = 0.0;
    } else if (!std::isfinite(lhs) || !std::isfinite(scaled)) {
      viol = kInf;
    } else {
      viol = std::fabs(lhs - scaled) / (1.0 + scaled);
    }
    if (viol > rep.max_violation) {
      rep.max_violation = viol;
      rep.worst_x = x;
      rep.worst_lambda = lambda;
    }
    if (viol > tol) ++rep.violations;
  }
  return rep;
}

ConvexityReport convexity_probe(const RateFunctionHandle& h,
                                const Ref<const Vec>& t_a,
                                const Ref<const Vec>& t_b,
                                const std::vector<double>& lambdas, double tol,
                                const OptimizerOptions& opts) {
  require(is_strictly_positive(t_a) && is_strictly_positive(t_b),
          "convexity_probe: positive endpoints required");
  for (double l : lambdas) {
    require(l > 0.0 && l < 1.0, "convexity_probe: lambdas in (0,1) required");
  }
  ConvexityReport rep;
  rep.rate_a = rate_minimize(h, t_a, opts).value;
  rep.rate_b = rate_minimize(h, t_b, opts).value;
  for (double l : lambdas) {
    const Vec mix = l * t_a + (1.0 - l) * t_b;
    ConvexityProbePoint pt;
    pt.lambda = l;
    pt.rate_mix = rate_minimize(h, mix, opts).value;
    pt.rate_interp = l * rep.rate_a + (1.0 - l) * rep.rate_b;
    pt.convexity_violated = pt.rate_mix > pt.rate_interp + tol;
    pt.concavity_violated = pt.rate_mix < pt.rate_interp - tol;
    rep.any_convexity_violation |= pt.convexity_violated;
    rep.any_concavity_violation |= pt.concavity_violated;
    rep.points.push_back(pt);
  }
  return rep;
}

}  // namespace fewjumps
