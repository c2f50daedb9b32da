#include "fewjumps/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include "fewjumps/csv.hpp"
#include "fewjumps/lpball.hpp"
#include "fewjumps/model_json.hpp"
#include "fewjumps/models.hpp"
#include "fewjumps/quadrature.hpp"
#include "fewjumps/rate_function.hpp"
#include "fewjumps/sampling.hpp"

namespace fewjumps::cli {

namespace {

using nlohmann::json;

struct Context {
  json config;
  std::string out_dir;
  std::uint64_t seed = 1;
  int threads = 1;
  bool json_summary = false;
  json summary;
};

Vec parse_vector(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw PreconditionError(what + ": nonempty array required");
  }
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw PreconditionError(what + ": numeric entries required");
    v[i] = j[i].get<double>();
  }
  return v;
}

std::vector<Vec> parse_targets(const json& cfg, int k) {
  if (!cfg.contains("targets")) throw PreconditionError("config: 'targets' required");
  const json& t = cfg["targets"];
  if (!t.is_array() || t.empty()) {
    throw PreconditionError("config: 'targets' must be a nonempty array of vectors");
  }
  std::vector<Vec> out;
  for (const auto& row : t) {
    Vec v = parse_vector(row, "target");
    if (v.size() != k) {
      throw PreconditionError("config: target dimension does not match model k");
    }
    out.push_back(std::move(v));
  }
  return out;
}

ModelSpec parse_model(const json& cfg) {
  if (!cfg.contains("model")) throw PreconditionError("config: 'model' required");
  return model_from_json(cfg["model"]);
}

double tolerance_or(const json& cfg, const std::string& name, double fallback) {
  if (cfg.contains("tolerances") && cfg["tolerances"].contains(name)) {
    return cfg["tolerances"][name].get<double>();
  }
  return fallback;
}

long long integer_or(const json& cfg, const std::string& name, long long fallback) {
  if (!cfg.contains(name)) return fallback;
  if (!cfg[name].is_number_integer()) {
    throw PreconditionError("config: '" + name + "' must be an integer");
  }
  return cfg[name].get<long long>();
}

double number_or(const json& cfg, const std::string& name, double fallback) {
  if (!cfg.contains(name)) return fallback;
  if (!cfg[name].is_number()) {
    throw PreconditionError("config: '" + name + "' must be numeric");
  }
  return cfg[name].get<double>();
}

std::string artifact_path(Context& ctx, const std::string& default_name) {
  std::string name = default_name;
  if (ctx.config.contains("output_path")) {
    name = ctx.config["output_path"].get<std::string>();
  }
  std::filesystem::path p(name);
  if (p.is_relative()) p = std::filesystem::path(ctx.out_dir) / p;
  std::filesystem::create_directories(p.parent_path().empty()
                                          ? std::filesystem::path(".")
                                          : p.parent_path());
  ctx.summary["artifacts"].push_back(p.string());
  return p.string();
}

OptimizerOptions optimizer_options(const Context& ctx) {
  OptimizerOptions opts;
  opts.agreement_tol = tolerance_or(ctx.config, "agreement", kAgreementTol);
  opts.random_restarts =
      static_cast<int>(integer_or(ctx.config, "random_restarts", 32));
  opts.threads = ctx.threads;
  return opts;
}

std::vector<std::string> vector_fields(const Vec& v) {
  std::vector<std::string> out;
  for (int i = 0; i < v.size(); ++i) out.push_back(format_double(v[i]));
  return out;
}

int cmd_rate_eval(Context& ctx, std::ostream& out) {
  const ModelSpec model = parse_model(ctx.config);
  const RateFunctionHandle h = make_rate_handle(model);
  const std::vector<Vec> targets = parse_targets(ctx.config, h.k);
  const OptimizerOptions opts = optimizer_options(ctx);

  CsvWriter csv(artifact_path(ctx, "rate_eval.csv"));
  csv.comment("model: " + model_to_json(model).dump());
  std::vector<std::string> header;
  for (int j = 0; j < h.k; ++j) header.push_back("t" + std::to_string(j + 1));
  header.insert(header.end(), {"value", "converged", "restarts", "nonzero_parts"});
  csv.row(header);

  json rows = json::array();
  for (const Vec& t : targets) {
    const RateEvaluation ev = rate_minimize(h, t, opts);
    std::vector<std::string> fields = vector_fields(t);
    fields.push_back(format_double(ev.value));
    fields.push_back(ev.converged ? "1" : "0");
    fields.push_back(std::to_string(ev.restarts_used));
    fields.push_back(std::to_string(ev.decomposition.nonzero_parts()));
    csv.row(fields);
    json r;
    r["t"] = std::vector<double>(t.data(), t.data() + t.size());
    r["value"] = ev.value;
    r["converged"] = ev.converged;
    r["nonzero_parts"] = ev.decomposition.nonzero_parts();
    rows.push_back(r);
    if (!ctx.json_summary) {
      out << "rate-eval: I(t) = " << format_double(ev.value) << " with "
          << ev.decomposition.nonzero_parts() << " part(s), "
          << (ev.converged ? "converged" : "NOT converged") << "\n";
    }
  }
  ctx.summary["results"] = rows;
  return kExitOk;
}

int cmd_decompose(Context& ctx, std::ostream& out) {
  const ModelSpec model = parse_model(ctx.config);
  const RateFunctionHandle h = make_rate_handle(model);
  const std::vector<Vec> targets = parse_targets(ctx.config, h.k);
  const OptimizerOptions opts = optimizer_options(ctx);

  CsvWriter csv(artifact_path(ctx, "decompose.csv"));
  csv.comment("model: " + model_to_json(model).dump());
  std::vector<std::string> header{"target_index", "part_index"};
  for (int j = 0; j < h.k; ++j) header.push_back("part" + std::to_string(j + 1));
  header.push_back("part_rate");
  csv.row(header);

  json rows = json::array();
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    const RateEvaluation ev = rate_minimize(h, targets[ti], opts);
    json jparts = json::array();
    for (std::size_t pi = 0; pi < ev.decomposition.parts.size(); ++pi) {
      std::vector<std::string> fields{std::to_string(ti), std::to_string(pi)};
      const auto part_fields = vector_fields(ev.decomposition.parts[pi]);
      fields.insert(fields.end(), part_fields.begin(), part_fields.end());
      fields.push_back(format_double(ev.decomposition.part_rates[pi]));
      csv.row(fields);
      jparts.push_back(std::vector<double>(
          ev.decomposition.parts[pi].data(),
          ev.decomposition.parts[pi].data() + ev.decomposition.parts[pi].size()));
    }
    json r;
    r["value"] = ev.value;
    r["parts"] = jparts;
    r["converged"] = ev.converged;
    rows.push_back(r);
    if (!ctx.json_summary) {
      out << "decompose: I(t) = " << format_double(ev.value) << " via "
          << ev.decomposition.parts.size() << " part(s)\n";
    }
  }
  ctx.summary["results"] = rows;
  return kExitOk;
}

int cmd_oracle_check(Context& ctx, std::ostream& out) {
  const ModelSpec model = parse_model(ctx.config);
  const RateFunctionHandle h = make_rate_handle(model);
  const std::vector<Vec> targets = parse_targets(ctx.config, h.k);
  const OptimizerOptions opts = optimizer_options(ctx);
  const int grid_n = static_cast<int>(integer_or(ctx.config, "grid_n", 200));
  const double tol_abs = tolerance_or(ctx.config, "oracle_abs", 1e-3);
  const double tol_rel = tolerance_or(ctx.config, "oracle_rel", 1e-2);

  CsvWriter csv(artifact_path(ctx, "oracle_check.csv"));
  csv.comment("model: " + model_to_json(model).dump());
  std::vector<std::string> header;
  for (int j = 0; j < h.k; ++j) header.push_back("t" + std::to_string(j + 1));
  header.insert(header.end(), {"optimizer", "oracle", "abs_diff", "tolerance", "pass"});
  csv.row(header);

  bool all_pass = true;
  json rows = json::array();
  for (const Vec& t : targets) {
    const double opt = rate_minimize(h, t, opts).value;
    const double orc = rate_grid_search(h, t, grid_n, opts).value;
    const double diff = std::fabs(opt - orc);
    const double tol = std::max(tol_abs, tol_rel * orc);
    const bool pass = diff <= tol;
    all_pass &= pass;
    std::vector<std::string> fields = vector_fields(t);
    fields.push_back(format_double(opt));
    fields.push_back(format_double(orc));
    fields.push_back(format_double(diff));
    fields.push_back(format_double(tol));
    fields.push_back(pass ? "1" : "0");
    csv.row(fields);
    json r;
    r["optimizer"] = opt;
    r["oracle"] = orc;
    r["pass"] = pass;
    rows.push_back(r);
    if (!ctx.json_summary) {
      out << "oracle-check: optimizer " << format_double(opt) << " vs grid "
          << format_double(orc) << (pass ? " (ok)" : " (MISMATCH)") << "\n";
    }
  }
  ctx.summary["results"] = rows;
  ctx.summary["pass"] = all_pass;
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_convexity_probe(Context& ctx, std::ostream& out) {
  const ModelSpec model = parse_model(ctx.config);
  const RateFunctionHandle h = make_rate_handle(model);
  if (!ctx.config.contains("t_a") || !ctx.config.contains("t_b")) {
    throw PreconditionError("config: 't_a' and 't_b' required");
  }
  const Vec ta = parse_vector(ctx.config["t_a"], "t_a");
  const Vec tb = parse_vector(ctx.config["t_b"], "t_b");
  if (ta.size() != h.k || tb.size() != h.k) {
    throw PreconditionError("config: probe endpoints must match model k");
  }
  std::vector<double> lambdas;
  if (ctx.config.contains("lambdas")) {
    for (const auto& l : ctx.config["lambdas"]) lambdas.push_back(l.get<double>());
  } else {
    lambdas = {0.5};
  }
  const double tol = tolerance_or(ctx.config, "probe", 1e-8);
  const ConvexityReport rep =
      convexity_probe(h, ta, tb, lambdas, tol, optimizer_options(ctx));

  CsvWriter csv(artifact_path(ctx, "convexity_probe.csv"));
  csv.comment("model: " + model_to_json(model).dump());
  csv.row({"lambda", "rate_a", "rate_b", "rate_mix", "rate_interp",
           "convexity_violated", "concavity_violated"});
  json rows = json::array();
  for (const auto& pt : rep.points) {
    csv.row({format_double(pt.lambda), format_double(rep.rate_a),
             format_double(rep.rate_b), format_double(pt.rate_mix),
             format_double(pt.rate_interp), pt.convexity_violated ? "1" : "0",
             pt.concavity_violated ? "1" : "0"});
    json r;
    r["lambda"] = pt.lambda;
    r["rate_mix"] = pt.rate_mix;
    r["rate_interp"] = pt.rate_interp;
    r["convexity_violated"] = pt.convexity_violated;
    r["concavity_violated"] = pt.concavity_violated;
    rows.push_back(r);
  }
  ctx.summary["rate_a"] = rep.rate_a;
  ctx.summary["rate_b"] = rep.rate_b;
  ctx.summary["points"] = rows;
  ctx.summary["any_convexity_violation"] = rep.any_convexity_violation;
  ctx.summary["any_concavity_violation"] = rep.any_concavity_violation;
  if (!ctx.json_summary) {
    out << "convexity-probe: convexity violated: "
        << (rep.any_convexity_violation ? "yes" : "no")
        << ", concavity violated: "
        << (rep.any_concavity_violation ? "yes" : "no") << "\n";
  }
  return kExitOk;
}

int cmd_mc_verify(Context& ctx, std::ostream& out) {
  const ModelSpec model = parse_model(ctx.config);
  const int k = model_dimension(model);
  const std::vector<Vec> targets = parse_targets(ctx.config, k);
  if (targets.size() != 1) {
    throw PreconditionError("mc-verify: exactly one target required");
  }
  if (!ctx.config.contains("scales")) {
    throw PreconditionError("config: 'scales' required");
  }
  std::vector<double> scales;
  for (const auto& s : ctx.config["scales"]) scales.push_back(s.get<double>());
  const long long n = integer_or(ctx.config, "n", 1000000);
  const bool expect_exact =
      ctx.config.value("expect_exact", model_family(model) == "mv-weibull");

  const SeededStream stream(ctx.seed, integer_or(ctx.config, "stream", 0));
  const EmpiricalRateCurve curve = empirical_rate_curve(
      model, targets[0], scales, n, stream, ctx.threads);

  const long long export_n = integer_or(ctx.config, "export_samples", 0);
  if (export_n > 0) {
    std::filesystem::path p =
        std::filesystem::path(ctx.out_dir) / "samples.csv";
    write_batch_csv(p.string(), model,
                    sample_model(model, export_n, stream.substream(0xBA7C4)));
    ctx.summary["artifacts"].push_back(p.string());
  }

  CsvWriter csv(artifact_path(ctx, "rate_curve.csv"));
  csv.comment("model: " + model_to_json(model).dump());
  csv.row({"x", "normalized", "ci_low", "ci_high", "predicted"});
  bool covered = true;
  json rows = json::array();
  for (std::size_t i = 0; i < curve.scales.size(); ++i) {
    csv.row({format_double(curve.scales[i]), format_double(curve.normalized[i]),
             format_double(curve.ci_low[i]), format_double(curve.ci_high[i]),
             format_double(curve.predicted)});
    const bool cover = curve.ci_low[i] <= curve.predicted &&
                       curve.predicted <= curve.ci_high[i];
    covered &= cover;
    json r;
    r["x"] = curve.scales[i];
    r["normalized"] = curve.normalized[i];
    r["covered"] = cover;
    r["hits"] = curve.estimates[i].hits;
    r["n"] = curve.estimates[i].n;
    rows.push_back(r);
    if (!ctx.json_summary) {
      out << "mc-verify: x = " << format_double(curve.scales[i])
          << " normalized = " << format_double(curve.normalized[i])
          << " predicted = " << format_double(curve.predicted)
          << (cover ? " (CI covers)" : " (CI MISSES)") << "\n";
    }
  }
  ctx.summary["predicted"] = curve.predicted;
  ctx.summary["points"] = rows;
  ctx.summary["covered"] = covered;
  ctx.summary["expect_exact"] = expect_exact;
  return (expect_exact && !covered) ? kExitCheckFailed : kExitOk;
}

int cmd_mdp_rate(Context& ctx, std::ostream& out) {
  const ModelSpec model = parse_model(ctx.config);
  const auto* gauss = std::get_if<MdpGaussModel>(&model);
  if (!gauss) throw PreconditionError("mdp-rate: model family must be mdp-gauss");
  const std::vector<Vec> targets = parse_targets(ctx.config, gauss->k());

  CsvWriter csv(artifact_path(ctx, "mdp_rate.csv"));
  csv.comment("model: " + model_to_json(model).dump());
  std::vector<std::string> header;
  for (int j = 0; j < gauss->k(); ++j) header.push_back("t" + std::to_string(j + 1));
  header.push_back("value");
  for (int j = 0; j < gauss->k(); ++j) header.push_back("z" + std::to_string(j + 1));
  csv.row(header);

  json rows = json::array();
  for (const Vec& t : targets) {
    const MdpRateResult r = mdp_rate(*gauss, t);
    std::vector<std::string> fields = vector_fields(t);
    fields.push_back(format_double(r.value));
    const auto zf = vector_fields(r.argmin);
    fields.insert(fields.end(), zf.begin(), zf.end());
    csv.row(fields);
    json jr;
    jr["value"] = r.value;
    jr["argmin"] = std::vector<double>(r.argmin.data(), r.argmin.data() + r.argmin.size());
    rows.push_back(jr);
    if (!ctx.json_summary) {
      out << "mdp-rate: value = " << format_double(r.value) << "\n";
    }
  }
  ctx.summary["results"] = rows;
  return kExitOk;
}

int cmd_lpball_rate(Context& ctx, std::ostream& out) {
  const int m = static_cast<int>(integer_or(ctx.config, "m", 0));
  const double q = number_or(ctx.config, "q", 0.0);
  const int k_max = static_cast<int>(integer_or(ctx.config, "k_max", 6));
  if (m < 1 || q <= 2.0) {
    throw PreconditionError("lpball-rate: fields 'm' (>=1) and 'q' (>2) required");
  }

  DirectionSet ds;
  if (ctx.config.contains("directions") &&
      ctx.config["directions"].value("type", "spiral") == "explicit") {
    ds.m = m;
    for (const auto& row : ctx.config["directions"]["vectors"]) {
      ds.directions.push_back(parse_vector(row, "direction"));
    }
    ds.validate();
  } else {
    int count = k_max;
    if (ctx.config.contains("directions")) {
      count = static_cast<int>(ctx.config["directions"].value("count", k_max));
    }
    ds = spiral_directions(m, count);
  }

  std::vector<double> f_values;
  if (!ctx.config.contains("f")) throw PreconditionError("lpball-rate: 'f' required");
  const json& f = ctx.config["f"];
  if (f.value("type", "constant") == "constant") {
    f_values.assign(ds.directions.size(), f["value"].get<double>());
  } else {
    for (const auto& v : f["values"]) f_values.push_back(v.get<double>());
  }

  const SupportRateResult res =
      support_rate(ds, f_values, q, k_max, optimizer_options(ctx));

  {
    std::filesystem::path p =
        std::filesystem::path(ctx.out_dir) / "directions.csv";
    CsvWriter dcsv(p.string());
    std::vector<std::string> header{"index"};
    for (int j = 0; j < m; ++j) header.push_back("u" + std::to_string(j + 1));
    dcsv.row(header);
    for (std::size_t i = 0; i < ds.directions.size(); ++i) {
      std::vector<std::string> fields{std::to_string(i)};
      const auto uf = vector_fields(ds.directions[i]);
      fields.insert(fields.end(), uf.begin(), uf.end());
      dcsv.row(fields);
    }
    ctx.summary["artifacts"].push_back(p.string());
  }

  CsvWriter csv(artifact_path(ctx, "lpball_rate.csv"));
  csv.row({"k", "J_k", "f_k"});
  for (int k = 1; k <= res.k_max; ++k) {
    csv.row({std::to_string(k), format_double(res.j_seq[k - 1]),
             format_double(res.f_values[k - 1])});
  }
  ctx.summary["j_seq"] = res.j_seq;
  ctx.summary["sup"] = res.sup_value;
  ctx.summary["converged"] = res.converged;
  if (!ctx.json_summary) {
    out << "lpball-rate: sup_k J_k = " << format_double(res.sup_value) << " at k = "
        << res.k_max << (res.converged ? "" : " (truncation NOT converged)") << "\n";
  }
  return kExitOk;
}

int cmd_stiefel_check(Context& ctx, std::ostream& out) {
  const int m = static_cast<int>(integer_or(ctx.config, "m", 0));
  const int n_ambient = static_cast<int>(integer_or(ctx.config, "N", 0));
  const int samples = static_cast<int>(integer_or(ctx.config, "samples", 1000));
  if (m < 1 || n_ambient < m || samples < 1) {
    throw PreconditionError("stiefel-check: fields 'm', 'N' (>= m), 'samples' required");
  }
  const double mq_order = number_or(ctx.config, "moment_q", 3.0);
  Vec u = Vec::Zero(m);
  u[0] = 1.0;
  if (ctx.config.contains("u")) {
    u = parse_vector(ctx.config["u"], "u");
    if (u.size() != m) throw PreconditionError("stiefel-check: 'u' must have length m");
    u /= u.norm();
  }
  SeededStream stream(ctx.seed, integer_or(ctx.config, "stream", 0));

  CsvWriter csv(artifact_path(ctx, "stiefel_check.csv"));
  csv.row({"sample", "residual", "moment_stat"});
  double max_resid = 0.0;
  double sum = 0.0, sum2 = 0.0;
  const double root_n = std::sqrt(static_cast<double>(n_ambient));
  for (int i = 0; i < samples; ++i) {
    const StiefelSample v = sample_stiefel(m, n_ambient, stream.substream(i));
    const double resid = v.orthonormality_residual();
    max_resid = std::max(max_resid, resid);
    const Vec w = v.v.transpose() * u;
    double stat = 0.0;
    for (int j = 0; j < w.size(); ++j) {
      stat += std::pow(std::fabs(root_n * w[j]), mq_order);
    }
    stat /= n_ambient;
    sum += stat;
    sum2 += stat * stat;
    csv.row({std::to_string(i), format_double(resid), format_double(stat)});
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, sum2 / samples - mean * mean);
  const double se = std::sqrt(var / samples);
  const double target = abs_gaussian_moment(mq_order);
  const bool ortho_ok = max_resid < 1e-10;
  const bool moment_ok = std::fabs(mean - target) <= 4.0 * se;

  ctx.summary["max_residual"] = max_resid;
  ctx.summary["moment_mean"] = mean;
  ctx.summary["moment_se"] = se;
  ctx.summary["moment_target"] = target;
  ctx.summary["pass"] = ortho_ok && moment_ok;
  if (!ctx.json_summary) {
    out << "stiefel-check: max ||VV^T - I||_F = " << format_double(max_resid)
        << (ortho_ok ? " (ok)" : " (FAIL)") << "\n"
        << "stiefel-check: moment mean = " << format_double(mean) << " vs "
        << format_double(target) << " +- " << format_double(4.0 * se)
        << (moment_ok ? " (ok)" : " (FAIL)") << "\n";
  }
  return (ortho_ok && moment_ok) ? kExitOk : kExitCheckFailed;
}

int dispatch(Context& ctx, std::ostream& out) {
  const std::string cmd = ctx.config.value("command", "");
  if (cmd == "rate-eval") return cmd_rate_eval(ctx, out);
  if (cmd == "decompose") return cmd_decompose(ctx, out);
  if (cmd == "oracle-check") return cmd_oracle_check(ctx, out);
  if (cmd == "convexity-probe") return cmd_convexity_probe(ctx, out);
  if (cmd == "mc-verify") return cmd_mc_verify(ctx, out);
  if (cmd == "mdp-rate") return cmd_mdp_rate(ctx, out);
  if (cmd == "lpball-rate") return cmd_lpball_rate(ctx, out);
  if (cmd == "stiefel-check") return cmd_stiefel_check(ctx, out);
  throw PreconditionError("config: unknown command '" + cmd + "'");
}

int resolve_threads(const Context& ctx, const CliInvocation& inv) {
  if (inv.threads) return std::max(1, *inv.threads);
  if (ctx.config.contains("threads")) {
    return std::max(1, static_cast<int>(ctx.config["threads"].get<long long>()));
  }
  if (const char* env = std::getenv("FEWJUMPS_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

int run_config(nlohmann::json config, const CliInvocation& inv,
               std::ostream& out) {
  Context ctx;
  int code = kExitOk;
  try {
    if (!config.is_object()) throw PreconditionError("config: object required");
    if (config.value("version", 1) != 1) {
      throw PreconditionError("config: unsupported schema version");
    }
    ctx.config = std::move(config);
    ctx.out_dir = inv.out_dir;
    ctx.json_summary = inv.json_summary;
    ctx.seed = inv.seed ? *inv.seed
                        : static_cast<std::uint64_t>(integer_or(ctx.config, "seed", 1));
    ctx.threads = resolve_threads(ctx, inv);
    ctx.summary["command"] = ctx.config.value("command", "");
    ctx.summary["seed"] = ctx.seed;
    ctx.summary["artifacts"] = nlohmann::json::array();
    std::filesystem::create_directories(ctx.out_dir);
    code = dispatch(ctx, out);
  } catch (const PreconditionError& e) {
    out << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const UnsupportedError& e) {
    out << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    out << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const EvaluationError& e) {
    out << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  ctx.summary["exit"] = code;
  if (ctx.json_summary) out << ctx.summary.dump(2) << "\n";
  return code;
}

int run_config_file(const std::string& path, const CliInvocation& inv,
                    std::ostream& out) {
  std::ifstream in(path);
  if (!in) {
    out << "validation error: cannot open config file '" << path << "'\n";
    return kExitValidation;
  }
  nlohmann::json config;
  try {
    in >> config;
  } catch (const nlohmann::json::exception& e) {
    out << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  return run_config(std::move(config), inv, out);
}

}  // namespace fewjumps::cli
