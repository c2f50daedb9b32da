#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "fewjumps/cli.hpp"

using namespace fewjumps;
namespace fs = std::filesystem;

namespace {

nlohmann::json two_jump_config() {
  return nlohmann::json{
      {"version", 1},
      {"command", "rate-eval"},
      {"model", {{"family", "two-jump"}, {"epsilon", 0.1}}},
      {"targets", {{1.0, 1.0}}},
      {"seed", 7},
      {"random_restarts", 8},
  };
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           fs::path("fewjumps_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("rate-eval command produces a value and an artifact") {
  TempDir dir;
  cli::CliInvocation inv;
  inv.out_dir = dir.path.string();
  inv.json_summary = true;
  std::ostringstream out;
  const int code = cli::run_config(two_jump_config(), inv, out);
  CHECK(code == cli::kExitOk);
  const auto summary = nlohmann::json::parse(out.str());
  CHECK(summary["results"][0]["value"].get<double>() <= 2.0 + 1e-6);
  CHECK(summary["results"][0]["nonzero_parts"].get<int>() == 2);
  CHECK(fs::exists(dir.path / "rate_eval.csv"));
}

TEST_CASE("dimension mismatch is a validation error") {
  TempDir dir;
  auto cfg = two_jump_config();
  cfg["targets"] = {{1.0, 1.0, 1.0}};
  cli::CliInvocation inv;
  inv.out_dir = dir.path.string();
  std::ostringstream out;
  CHECK(cli::run_config(cfg, inv, out) == cli::kExitValidation);
  CHECK(!fs::exists(dir.path / "rate_eval.csv"));
}

TEST_CASE("unknown family and command are validation errors") {
  TempDir dir;
  cli::CliInvocation inv;
  inv.out_dir = dir.path.string();
  std::ostringstream out;
  auto cfg = two_jump_config();
  cfg["model"]["family"] = "mystery";
  CHECK(cli::run_config(cfg, inv, out) == cli::kExitValidation);
  cfg = two_jump_config();
  cfg["command"] = "noop";
  CHECK(cli::run_config(cfg, inv, out) == cli::kExitValidation);
  cfg = two_jump_config();
  cfg["version"] = 2;
  CHECK(cli::run_config(cfg, inv, out) == cli::kExitValidation);
}

TEST_CASE("oracle-check exits cleanly on agreement") {
  TempDir dir;
  nlohmann::json cfg{
      {"version", 1},
      {"command", "oracle-check"},
      {"model", {{"family", "two-jump"}, {"epsilon", 0.4}}},
      {"targets", {{1.0, 0.7}}},
      {"grid_n", 100},
      {"random_restarts", 8},
      {"seed", 3},
  };
  cli::CliInvocation inv;
  inv.out_dir = dir.path.string();
  inv.json_summary = true;
  std::ostringstream out;
  CHECK(cli::run_config(cfg, inv, out) == cli::kExitOk);
  const auto summary = nlohmann::json::parse(out.str());
  CHECK(summary["pass"].get<bool>());
}

TEST_CASE("mdp-rate command on the identity covariance") {
  TempDir dir;
  nlohmann::json cfg{
      {"version", 1},
      {"command", "mdp-rate"},
      {"model",
       {{"family", "mdp-gauss"}, {"Sigma", {{1.0, 0.0}, {0.0, 1.0}}}}},
      {"targets", {{1.0, 1.0}}},
      {"seed", 1},
  };
  cli::CliInvocation inv;
  inv.out_dir = dir.path.string();
  inv.json_summary = true;
  std::ostringstream out;
  CHECK(cli::run_config(cfg, inv, out) == cli::kExitOk);
  const auto summary = nlohmann::json::parse(out.str());
  CHECK(summary["results"][0]["value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("mc-verify covers the exact weibull survival") {
  TempDir dir;
  nlohmann::json cfg{
      {"version", 1},
      {"command", "mc-verify"},
      {"model",
       {{"family", "mv-weibull"},
        {"alpha", 0.5},
        {"lambda0", 1.0},
        {"lambdas", {1.0, 1.0}}}},
      {"targets", {{1.0, 1.0}}},
      {"scales", {1.0, 4.0}},
      {"n", 100000},
      {"seed", 11},
  };
  cli::CliInvocation inv;
  inv.out_dir = dir.path.string();
  inv.json_summary = true;
  std::ostringstream out;
  CHECK(cli::run_config(cfg, inv, out) == cli::kExitOk);
  const auto summary = nlohmann::json::parse(out.str());
  CHECK(summary["covered"].get<bool>());
  CHECK(fs::exists(dir.path / "rate_curve.csv"));
  // Column contract for curve artifacts.
  std::ifstream csv(dir.path / "rate_curve.csv");
  std::string line;
  std::getline(csv, line);  // model echo comment
  std::getline(csv, line);
  CHECK(line == "x,normalized,ci_low,ci_high,predicted");
}

TEST_CASE("lpball-rate and stiefel-check commands") {
  TempDir dir;
  nlohmann::json lp{
      {"version", 1},
      {"command", "lpball-rate"},
      {"m", 2},
      {"q", 3.0},
      {"k_max", 2},
      {"directions", {{"type", "explicit"}, {"vectors", {{1.0, 0.0}, {0.0, 1.0}}}}},
      {"f", {{"type", "constant"}, {"value", 1.6}}},
      {"random_restarts", 8},
      {"seed", 5},
  };
  cli::CliInvocation inv;
  inv.out_dir = dir.path.string();
  inv.json_summary = true;
  std::ostringstream out;
  CHECK(cli::run_config(lp, inv, out) == cli::kExitOk);
  const auto summary = nlohmann::json::parse(out.str());
  CHECK(summary["sup"].get<double>() > 0.0);

  nlohmann::json st{
      {"version", 1}, {"command", "stiefel-check"}, {"m", 3},
      {"N", 60},      {"samples", 50},              {"seed", 9},
  };
  std::ostringstream out2;
  CHECK(cli::run_config(st, inv, out2) == cli::kExitOk);
}
