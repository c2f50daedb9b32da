#include "fewjumps/model_json.hpp"

namespace fewjumps {

namespace {

using nlohmann::json;

double number_field(const json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_number()) {
    throw PreconditionError(std::string("model: numeric field '") + name +
                            "' required");
  }
  return j[name].get<double>();
}

Mat matrix_field(const json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_array() || j[name].empty()) {
    throw PreconditionError(std::string("model: matrix field '") + name +
                            "' required");
  }
  const auto& rows = j[name];
  const std::size_t k = rows.size();
  Mat m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!rows[i].is_array() || rows[i].size() != k) {
      throw PreconditionError(std::string("model: '") + name +
                              "' must be square");
    }
    for (std::size_t jj = 0; jj < k; ++jj) {
      if (!rows[i][jj].is_number()) {
        throw PreconditionError(std::string("model: '") + name +
                                "' entries must be numeric");
      }
      m(i, jj) = rows[i][jj].get<double>();
    }
  }
  return m;
}

Vec vector_field(const json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_array() || j[name].empty()) {
    throw PreconditionError(std::string("model: vector field '") + name +
                            "' required");
  }
  Vec v(j[name].size());
  for (std::size_t i = 0; i < j[name].size(); ++i) {
    if (!j[name][i].is_number()) {
      throw PreconditionError(std::string("model: '") + name +
                              "' entries must be numeric");
    }
    v[i] = j[name][i].get<double>();
  }
  return v;
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

void check_declared_k(const json& j, int k) {
  if (j.contains("k")) {
    if (!j["k"].is_number_integer() || j["k"].get<int>() != k) {
      throw PreconditionError("model: declared k does not match parameters");
    }
  }
}

}  // namespace

ModelSpec model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw PreconditionError("model: object with string 'family' required");
  }
  const std::string family = j["family"].get<std::string>();
  if (family == "gauss-power") {
    const Mat sigma = matrix_field(j, "Sigma");
    check_declared_k(j, static_cast<int>(sigma.rows()));
    return GaussPowerModel(sigma, number_field(j, "q"));
  }
  if (family == "bivariate-gauss-power") {
    check_declared_k(j, 2);
    return BivariateGaussPower(number_field(j, "rho"), number_field(j, "q"));
  }
  if (family == "mv-weibull") {
    const Vec lambdas = vector_field(j, "lambdas");
    check_declared_k(j, static_cast<int>(lambdas.size()));
    return MultivariateWeibullModel(number_field(j, "alpha"),
                                    number_field(j, "lambda0"), lambdas);
  }
  if (family == "two-jump") {
    check_declared_k(j, 2);
    return TwoJumpModel(number_field(j, "epsilon"));
  }
  if (family == "mdp-gauss") {
    const Mat sigma = matrix_field(j, "Sigma");
    check_declared_k(j, static_cast<int>(sigma.rows()));
    return MdpGaussModel(sigma);
  }
  throw PreconditionError("model: unknown family '" + family + "'");
}

nlohmann::json model_to_json(const ModelSpec& spec) {
  json j;
  j["family"] = model_family(spec);
  j["k"] = model_dimension(spec);
  if (const auto* m = std::get_if<GaussPowerModel>(&spec)) {
    j["Sigma"] = matrix_to_json(m->sigma());
    j["q"] = m->q();
  } else if (const auto* m = std::get_if<BivariateGaussPower>(&spec)) {
    j["rho"] = m->rho;
    j["q"] = m->q;
  } else if (const auto* m = std::get_if<MultivariateWeibullModel>(&spec)) {
    j["alpha"] = m->alpha;
    j["lambda0"] = m->lambda0;
    json lam = json::array();
    for (int i = 0; i < m->lambdas.size(); ++i) lam.push_back(m->lambdas[i]);
    j["lambdas"] = lam;
  } else if (const auto* m = std::get_if<TwoJumpModel>(&spec)) {
    j["epsilon"] = m->epsilon;
  } else if (const auto* m = std::get_if<MdpGaussModel>(&spec)) {
    j["Sigma"] = matrix_to_json(m->sigma());
  }
  return j;
}

}  // namespace fewjumps
